#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "qhkit/rng.hpp"
#include "qhkit/vec.hpp"

namespace qh {

// Weighting of past terms in a discounted sum. The weight of the term i
// steps in the past is:
//   Exponential:      (1 - beta) * beta^i
//   Hyperbolic:       c / (1 + k*i)                  (diverges; not an average)
//   QuasiHyperbolic:  1 - nu*beta        for i = 0
//                     nu*(1-beta)*beta^i for i > 0
struct DiscountFunction {
    enum class Kind { Exponential, Hyperbolic, QuasiHyperbolic };

    Kind kind = Kind::Exponential;
    double beta = 0.0; // Exponential, QuasiHyperbolic: in (-1, 1)
    double nu = 1.0;   // QuasiHyperbolic
    double c = 1.0;    // Hyperbolic: > 0
    double k = 1.0;    // Hyperbolic: > 0

    static DiscountFunction exponential(double beta);
    static DiscountFunction hyperbolic(double c, double k);
    static DiscountFunction quasi_hyperbolic(double nu, double beta);
};

double discount_weight(const DiscountFunction& fn, long i);

// sum_{i=0}^{t} weight(i) * xs[t-i]; the last element of xs is the most
// recent and receives weight(0).
Vec discounted_sum(const DiscountFunction& fn, const std::vector<Vec>& xs);

// beta*buffer + (1-beta)*x. Tracks the exponential discounted sum online.
Vec ewma_update(const Vec& buffer, double beta, const Vec& x);

// (1-nu)*current + nu*ewma_value. Equals the quasi-hyperbolic discounted
// sum when ewma_value tracks the same history from zero.
Vec qhwma(double nu, double beta, const Vec& ewma_value, const Vec& current);

// Limit covariance scaling factor of the quasi-hyperbolic weighted moving
// average of i.i.d. inputs: (1-nu*beta)^2 + [nu*beta*(1-beta)]^2/(1-beta^2).
double rho(double nu, double beta);

// Exact covariance factor after t+1 terms (finite history started at zero):
// (1-nu*beta)^2 + [nu*beta*(1-beta)]^2 * (1-beta^(2t)) / (1-beta^2).
double rho_truncated(double nu, double beta, long t);

// Simulates i.i.d. unit-variance draws through the running weighted average
// and returns the empirical variance of the average, which approaches
// rho(nu, beta) (and (1-beta)/(1+beta) for the exponential case).
// Requires n_samples >= 1000. Undefined for the hyperbolic variant, whose
// weights do not sum to a finite value.
double estimate_variance_ratio(const DiscountFunction& fn, long n_samples, SeededRng rng);

// Hyperbolically weighted moving average. Needs the full history, so it is
// kept only for testing; the stored history is capped and push() past the
// cap is a hard error.
class Hwma {
public:
    Hwma(double c, double k, std::size_t max_len);

    void push(const Vec& x);
    Vec value() const;
    std::size_t size() const { return history_.size(); }

private:
    double c_;
    double k_;
    std::size_t max_len_;
    std::deque<Vec> history_; // history_.back() is the most recent
};

} // namespace qh
