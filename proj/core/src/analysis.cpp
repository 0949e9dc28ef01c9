#include "qhkit/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace qh {

namespace {

TransitionMatrix make(TransitionKind kind, std::size_t side,
                      std::variant<QhmParams, PidGains, SnvParams, AccSgdParams> params) {
    TransitionMatrix m;
    m.kind = kind;
    m.side = side;
    m.entries.assign(side * side, 0.0);
    m.params = std::move(params);
    return m;
}

void set(TransitionMatrix& m, std::size_t r, std::size_t c, double v) {
    m.entries[r * m.side + c] = v;
}

std::vector<double> mat_mul(const std::vector<double>& a, const std::vector<double>& b,
                            std::size_t n) {
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a[i * n + k];
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) out[i * n + j] += aik * b[k * n + j];
        }
    }
    return out;
}

double chi_snv(const SnvParams& p, long n) {
    return std::pow(p.beta1, static_cast<double>(n)) * (p.beta2 * (1.0 - p.beta1) - p.beta1);
}

double chi_accsgd(const AccSgdParams& p) {
    return (p.kappa - p.eps * p.eps * p.xi) / (p.kappa + p.eps * p.xi);
}

} // namespace

TransitionMatrix build_transition(const QhmParams& p) {
    validate(p);
    // State [g, theta, grad, out].
    auto m = make(TransitionKind::Qhm, 4, p);
    set(m, 0, 0, p.beta);
    set(m, 0, 2, 1.0 - p.beta);
    set(m, 1, 0, -p.alpha * p.nu * p.beta);
    set(m, 1, 1, 1.0);
    set(m, 1, 2, -p.alpha * (1.0 - p.nu * p.beta));
    set(m, 3, 1, 1.0);
    return m;
}

TransitionMatrix build_transition(const PidGains& p) {
    // State [e, w, v, theta0, grad, out].
    auto m = make(TransitionKind::Pid, 6, p);
    set(m, 0, 4, -1.0);
    set(m, 1, 1, 1.0);
    set(m, 1, 4, -1.0);
    set(m, 2, 0, -(1.0 - p.beta));
    set(m, 2, 2, p.beta);
    set(m, 2, 4, -(1.0 - p.beta));
    set(m, 3, 3, 1.0);
    set(m, 5, 0, p.kp);
    set(m, 5, 1, p.ki);
    set(m, 5, 2, p.kd);
    set(m, 5, 3, 1.0);
    return m;
}

TransitionMatrix build_transition(const SnvParams& p) {
    // State [xi, xi_prev, grad, out].
    auto m = make(TransitionKind::Snv, 4, p);
    set(m, 0, 0, 1.0 + p.beta1);
    set(m, 0, 1, -p.beta1);
    set(m, 0, 2, -p.gamma);
    set(m, 1, 0, 1.0);
    set(m, 3, 0, 1.0 + p.beta2);
    set(m, 3, 1, -p.beta2);
    return m;
}

TransitionMatrix build_transition(const AccSgdParams& p) {
    // State [w_bar, w, grad, out].
    const double e2xk = p.eps * p.eps * p.xi / p.kappa;
    const double denom = p.kappa + p.eps * p.xi;
    auto m = make(TransitionKind::AccSgd, 4, p);
    set(m, 0, 0, 1.0 - e2xk);
    set(m, 0, 1, e2xk);
    set(m, 0, 2, -p.delta * p.eps * p.xi);
    set(m, 1, 0, (p.eps * p.xi / denom) * (1.0 - e2xk));
    set(m, 1, 1, (p.kappa + p.eps * p.eps * p.eps * p.xi * p.xi / p.kappa) / denom);
    set(m, 1, 2, -p.delta * (p.kappa + p.eps * p.eps * p.xi * p.xi) / denom);
    set(m, 3, 1, 1.0);
    return m;
}

std::vector<double> matrix_power_last_row(const TransitionMatrix& a, long n) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    std::vector<double> pow = a.entries;
    for (long i = 0; i < n; ++i) pow = mat_mul(pow, a.entries, a.side);
    std::vector<double> row(pow.end() - static_cast<long>(a.side), pow.end());
    for (double x : row) {
        if (!std::isfinite(x)) throw std::overflow_error("matrix power overflowed to nonfinite");
    }
    return row;
}

std::vector<double> closed_form_last_row(const TransitionMatrix& a, long n) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    const double dn = static_cast<double>(n);
    switch (a.kind) {
    case TransitionKind::Qhm: {
        const auto& p = std::get<QhmParams>(a.params);
        const double bn = std::pow(p.beta, dn);
        return {-p.alpha * p.nu * p.beta * (1.0 - bn) / (1.0 - p.beta), 1.0,
                -p.alpha * (1.0 - p.nu * bn), 0.0};
    }
    case TransitionKind::Pid: {
        const auto& p = std::get<PidGains>(a.params);
        const double omb = 1.0 - p.beta;
        const double grad_coeff =
            n == 1 ? -(p.kp + p.ki + omb * p.kd)
                   : -(p.ki - omb * omb * std::pow(p.beta, dn - 2.0) * p.kd);
        return {-p.kd * std::pow(p.beta, dn - 1.0) * omb, p.ki,
                p.kd * std::pow(p.beta, dn), 1.0, grad_coeff, 0.0};
    }
    case TransitionKind::Snv: {
        const auto& p = std::get<SnvParams>(a.params);
        const double chi = chi_snv(p, n);
        const double omb = 1.0 - p.beta1;
        return {(1.0 + chi) / omb, -(p.beta1 + chi) / omb,
                -p.gamma / (p.beta1 * omb) * (p.beta1 + chi), 0.0};
    }
    case TransitionKind::AccSgd: {
        const auto& p = std::get<AccSgdParams>(a.params);
        const double chi_n = std::pow(chi_accsgd(p), dn);
        const double top = p.kappa - p.eps * p.eps * p.xi;
        const double norm = p.kappa * (1.0 + p.eps);
        return {(top - top * chi_n) / norm,
                (p.eps * (p.kappa + p.eps * p.xi) + top * chi_n) / norm,
                -p.delta * (p.eps * (1.0 + p.xi) - (p.eps * p.xi - 1.0) * chi_n) / (1.0 + p.eps),
                0.0};
    }
    }
    throw std::logic_error("unknown transition kind");
}

double gradient_coefficient(const QhmParams& p, long i) {
    return -p.alpha * (1.0 - p.nu * std::pow(p.beta, static_cast<double>(i)));
}

double gradient_coefficient(const PidGains& p, long i) {
    const double omb = 1.0 - p.beta;
    if (i == 1) return -(p.kp + p.ki + omb * p.kd);
    return -(p.ki - omb * omb * std::pow(p.beta, static_cast<double>(i - 2)) * p.kd);
}

double gradient_coefficient(const SnvParams& p, long i) {
    return -p.gamma / (p.beta1 * (1.0 - p.beta1)) * (p.beta1 + chi_snv(p, i));
}

double gradient_coefficient(const AccSgdParams& p, long i) {
    const double chi_i = std::pow(chi_accsgd(p), static_cast<double>(i));
    return -p.delta * (p.eps * (1.0 + p.xi) - (p.eps * p.xi - 1.0) * chi_i) / (1.0 + p.eps);
}

namespace {

template <class Params>
Vec unrolled_sum(const Params& p, std::span<const Vec> grads, const Vec& theta0) {
    if (grads.empty()) throw std::invalid_argument("grads must be nonempty");
    Vec out = theta0;
    const long t = static_cast<long>(grads.size());
    for (long i = 1; i <= t; ++i) {
        const Vec& g = grads[static_cast<std::size_t>(t - i)];
        require_same_dim(theta0, g);
        const double c = gradient_coefficient(p, i);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * g[j];
    }
    return out;
}

} // namespace

Vec unrolled_theta(const QhmParams& p, std::span<const Vec> grads, const Vec& theta0,
                   const Vec* g0) {
    Vec out = unrolled_sum(p, grads, theta0);
    if (g0 != nullptr) {
        require_same_dim(theta0, *g0);
        const double t = static_cast<double>(grads.size());
        const double c =
            -p.alpha * p.nu * p.beta * (1.0 - std::pow(p.beta, t)) / (1.0 - p.beta);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * (*g0)[j];
    }
    return out;
}

Vec unrolled_theta(const PidGains& p, std::span<const Vec> grads, const Vec& theta0) {
    return unrolled_sum(p, grads, theta0);
}

Vec unrolled_theta(const SnvParams& p, std::span<const Vec> grads, const Vec& theta0) {
    // xi_0 = xi_{-1} = theta0: the buffer-coefficient columns sum to one, so
    // only theta0 plus the gradient sum remains.
    return unrolled_sum(p, grads, theta0);
}

Vec unrolled_theta(const AccSgdParams& p, std::span<const Vec> grads, const Vec& theta0) {
    // w_bar_0 = w_0 = theta0, same collapse as SNV.
    return unrolled_sum(p, grads, theta0);
}

void validate(const BoundParams& p) {
    if (!(p.beta1 > 0.0 && p.beta1 < std::sqrt(p.beta2) && p.beta2 < 1.0)) {
        throw std::invalid_argument("requires 0 < beta1 < sqrt(beta2) < 1");
    }
    if (!(p.nu2 > 0.0)) throw std::invalid_argument("nu2 must be positive");
    if (!(p.nu1 >= 0.0)) throw std::invalid_argument("nu1 must be nonnegative");
}

double adam_update_bound(const BoundParams& p, std::optional<long> t) {
    validate(p);
    const double first = (1.0 - p.nu1 * p.beta1) * (1.0 - p.nu1 * p.beta1) /
                         (1.0 - p.nu2 * p.beta2);
    const double num = p.nu1 * p.beta1 * (1.0 - p.beta1);
    double fac = 1.0;
    if (t.has_value()) {
        if (*t < 1) throw std::invalid_argument("t must be positive");
        fac = 1.0 - std::pow(p.beta1 * p.beta1 / p.beta2, static_cast<double>(*t));
    }
    const double second =
        num * num * fac / (p.nu2 * (1.0 - p.beta2) * (p.beta2 - p.beta1 * p.beta1));
    return std::sqrt(first + second);
}

double kingma_claimed_bound(double beta1, double beta2) {
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument("beta1 must be in [0, 1)");
    if (!(beta2 > 0.0 && beta2 < 1.0)) throw std::invalid_argument("beta2 must be in (0, 1)");
    return std::max(1.0, (1.0 - beta1) / std::sqrt(1.0 - beta2));
}

std::vector<double> adversarial_gradient_sequence(const BoundParams& p, long t) {
    validate(p);
    if (t < 1) throw std::invalid_argument("t must be positive");
    // In time order the gradient of age a = t - j carries the moment-weight
    // ratio nu1*(1-beta1)*beta1^a / (nu2*(1-beta2)*beta2^a); the final
    // gradient carries (1-nu1*beta1)/(1-nu2*beta2).
    std::vector<double> xs(static_cast<std::size_t>(t) + 1);
    const double head = p.nu1 * (1.0 - p.beta1) / (p.nu2 * (1.0 - p.beta2));
    for (long j = 0; j < t; ++j) {
        const double age = static_cast<double>(t - j);
        xs[static_cast<std::size_t>(j)] = head * std::pow(p.beta1 / p.beta2, age);
    }
    xs[static_cast<std::size_t>(t)] = (1.0 - p.nu1 * p.beta1) / (1.0 - p.nu2 * p.beta2);
    return xs;
}

double normalized_update_ratio(const BoundParams& p, std::span<const double> grads) {
    if (grads.empty()) throw std::invalid_argument("grads must be nonempty");
    double g = 0.0;
    double s = 0.0;
    for (double x : grads) {
        g = p.beta1 * g + (1.0 - p.beta1) * x;
        s = p.beta2 * s + (1.0 - p.beta2) * x * x;
    }
    const double last = grads.back();
    const double gt = (1.0 - p.nu1) * last + p.nu1 * g;
    const double st = (1.0 - p.nu2) * last * last + p.nu2 * s;
    if (st <= 0.0) throw std::domain_error("second-moment estimate vanished");
    return std::fabs(gt) / std::sqrt(st);
}

double pid_d_term_closed_form(std::span<const double> grads, double beta) {
    if (grads.empty()) throw std::invalid_argument("grads must be nonempty");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (0, 1)");
    const long t = static_cast<long>(grads.size()) - 1;
    double ewma = 0.0;
    for (long i = 0; i <= t; ++i) {
        ewma += std::pow(beta, static_cast<double>(i)) *
                grads[static_cast<std::size_t>(t - i)];
    }
    ewma *= 1.0 - beta;
    return (1.0 - beta) / beta * (-grads.back() + ewma);
}

} // namespace qh
