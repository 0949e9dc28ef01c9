#pragma once

#include <cstddef>
#include <vector>

namespace qh {

// Dense 64-bit real vector. All toolkit arithmetic is double precision.
using Vec = std::vector<double>;

bool all_finite(const Vec& v);
void require_finite(double x, const char* what);
void require_finite(const Vec& v, const char* what);
void require_same_dim(const Vec& x, const Vec& y);

// a*x + y, elementwise. Rejects dimension mismatch and nonfinite inputs.
Vec axpy(double a, const Vec& x, const Vec& y);

Vec scaled(double a, const Vec& x);
double dot(const Vec& x, const Vec& y);
double l2_norm(const Vec& v);
double linf_dist(const Vec& x, const Vec& y);

Vec zeros(std::size_t dim);
Vec constant(std::size_t dim, double value);

} // namespace qh
