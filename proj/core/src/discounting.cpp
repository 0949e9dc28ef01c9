#include "qhkit/discounting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qh {

DiscountFunction DiscountFunction::exponential(double beta) {
    if (!(beta > -1.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (-1, 1)");
    DiscountFunction fn;
    fn.kind = Kind::Exponential;
    fn.beta = beta;
    return fn;
}

DiscountFunction DiscountFunction::hyperbolic(double c, double k) {
    if (!(c > 0.0) || !(k > 0.0)) throw std::invalid_argument("c and k must be positive");
    DiscountFunction fn;
    fn.kind = Kind::Hyperbolic;
    fn.c = c;
    fn.k = k;
    return fn;
}

DiscountFunction DiscountFunction::quasi_hyperbolic(double nu, double beta) {
    if (!(beta > -1.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (-1, 1)");
    require_finite(nu, "nu");
    DiscountFunction fn;
    fn.kind = Kind::QuasiHyperbolic;
    fn.nu = nu;
    fn.beta = beta;
    return fn;
}

double discount_weight(const DiscountFunction& fn, long i) {
    if (i < 0) throw std::invalid_argument("i must be nonnegative");
    switch (fn.kind) {
    case DiscountFunction::Kind::Exponential:
        return (1.0 - fn.beta) * std::pow(fn.beta, static_cast<double>(i));
    case DiscountFunction::Kind::Hyperbolic:
        return fn.c / (1.0 + fn.k * static_cast<double>(i));
    case DiscountFunction::Kind::QuasiHyperbolic:
        if (i == 0) return 1.0 - fn.nu * fn.beta;
        return fn.nu * (1.0 - fn.beta) * std::pow(fn.beta, static_cast<double>(i));
    }
    throw std::logic_error("unknown discount kind");
}

Vec discounted_sum(const DiscountFunction& fn, const std::vector<Vec>& xs) {
    if (xs.empty()) throw std::invalid_argument("discounted_sum: empty sequence");
    const std::size_t dim = xs.front().size();
    Vec out(dim, 0.0);
    const long t = static_cast<long>(xs.size()) - 1;
    for (long i = 0; i <= t; ++i) {
        const Vec& x = xs[static_cast<std::size_t>(t - i)];
        require_same_dim(xs.front(), x);
        const double w = discount_weight(fn, i);
        for (std::size_t j = 0; j < dim; ++j) out[j] += w * x[j];
    }
    return out;
}

Vec ewma_update(const Vec& buffer, double beta, const Vec& x) {
    require_same_dim(buffer, x);
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in [0, 1)");
    Vec out(buffer.size());
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        out[i] = beta * buffer[i] + (1.0 - beta) * x[i];
    }
    return out;
}

Vec qhwma(double nu, double beta, const Vec& ewma_value, const Vec& current) {
    (void)beta; // the beta lives in the tracked ewma; kept for the call shape
    require_same_dim(ewma_value, current);
    Vec out(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
        out[i] = (1.0 - nu) * current[i] + nu * ewma_value[i];
    }
    return out;
}

double rho(double nu, double beta) {
    if (!(beta > -1.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (-1, 1)");
    const double a = 1.0 - nu * beta;
    const double b = nu * beta * (1.0 - beta);
    return a * a + b * b / (1.0 - beta * beta);
}

double rho_truncated(double nu, double beta, long t) {
    if (!(beta > -1.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (-1, 1)");
    if (t < 0) throw std::invalid_argument("t must be nonnegative");
    const double a = 1.0 - nu * beta;
    const double b = nu * beta * (1.0 - beta);
    const double fac = 1.0 - std::pow(beta, 2.0 * static_cast<double>(t));
    return a * a + b * b * fac / (1.0 - beta * beta);
}

double estimate_variance_ratio(const DiscountFunction& fn, long n_samples, SeededRng rng) {
    if (n_samples < 1000) throw std::invalid_argument("n_samples must be at least 1000");
    if (fn.kind == DiscountFunction::Kind::Hyperbolic) {
        throw std::invalid_argument("variance ratio is undefined for hyperbolic weights");
    }
    const double beta = fn.beta;
    const double nu = fn.kind == DiscountFunction::Kind::Exponential ? 1.0 : fn.nu;

    // Discard the initialization-bias transient before accumulating.
    long burn = 20;
    if (beta > 0.0) burn = static_cast<long>(std::ceil(20.0 / (1.0 - beta)));
    burn = std::min(burn, n_samples / 2);

    double g = 0.0;
    double sumsq = 0.0;
    long count = 0;
    for (long t = 0; t < n_samples; ++t) {
        const double x = rng.next_gaussian();
        g = beta * g + (1.0 - beta) * x;
        const double y = (1.0 - nu) * x + nu * g;
        if (t >= burn) {
            sumsq += y * y;
            ++count;
        }
    }
    return sumsq / static_cast<double>(count);
}

Hwma::Hwma(double c, double k, std::size_t max_len) : c_(c), k_(k), max_len_(max_len) {
    if (!(c > 0.0) || !(k > 0.0)) throw std::invalid_argument("c and k must be positive");
    if (max_len == 0) throw std::invalid_argument("max_len must be positive");
}

void Hwma::push(const Vec& x) {
    if (history_.size() >= max_len_) {
        throw std::length_error("Hwma history cap exceeded");
    }
    if (!history_.empty()) require_same_dim(history_.front(), x);
    history_.push_back(x);
}

Vec Hwma::value() const {
    if (history_.empty()) throw std::logic_error("Hwma::value on empty history");
    const std::size_t dim = history_.front().size();
    Vec out(dim, 0.0);
    const long t = static_cast<long>(history_.size()) - 1;
    for (long i = 0; i <= t; ++i) {
        const Vec& x = history_[static_cast<std::size_t>(t - i)];
        const double w = c_ / (1.0 + k_ * static_cast<double>(i));
        for (std::size_t j = 0; j < dim; ++j) out[j] += w * x[j];
    }
    return out;
}

} // namespace qh
