#include "qhkit/vec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qh {

bool all_finite(const Vec& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

void require_finite(const Vec& v, const char* what) {
    if (!all_finite(v)) {
        throw std::invalid_argument(std::string(what) + " contains a nonfinite entry");
    }
}

void require_same_dim(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()));
    }
}

Vec axpy(double a, const Vec& x, const Vec& y) {
    require_same_dim(x, y);
    require_finite(a, "scale");
    require_finite(x, "x");
    require_finite(y, "y");
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + y[i];
    return out;
}

Vec scaled(double a, const Vec& x) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i];
    return out;
}

double dot(const Vec& x, const Vec& y) {
    require_same_dim(x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double l2_norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double linf_dist(const Vec& x, const Vec& y) {
    require_same_dim(x, y);
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = std::fabs(x[i] - y[i]);
        if (d > m) m = d;
    }
    return m;
}

Vec zeros(std::size_t dim) { return Vec(dim, 0.0); }

Vec constant(std::size_t dim, double value) { return Vec(dim, value); }

} // namespace qh
