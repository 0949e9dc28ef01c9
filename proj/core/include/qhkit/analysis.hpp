#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qhkit/conversions.hpp"
#include "qhkit/vec.hpp"

namespace qh {

// Per-coordinate linear dynamics of a two-state (or PID) optimizer. The
// state vector is [buffers..., grad, output slot]; one multiplication
// advances the buffers, a second reads off theta. Powers of the matrix give
// the closed-form dependence of theta_t on the initial buffers and the full
// gradient history.
enum class TransitionKind { Qhm, Pid, Snv, AccSgd };

struct TransitionMatrix {
    TransitionKind kind;
    std::size_t side = 0;
    std::vector<double> entries; // row-major, side*side
    std::variant<QhmParams, PidGains, SnvParams, AccSgdParams> params;

    double at(std::size_t r, std::size_t c) const { return entries[r * side + c]; }
};

TransitionMatrix build_transition(const QhmParams& p);
TransitionMatrix build_transition(const PidGains& p);
TransitionMatrix build_transition(const SnvParams& p);
TransitionMatrix build_transition(const AccSgdParams& p);

// Last row of A^(n+1), by iterated multiplication. Overflow to a nonfinite
// entry is reported as an error.
std::vector<double> matrix_power_last_row(const TransitionMatrix& a, long n);

// The same row from the closed-form expressions, evaluated directly.
std::vector<double> closed_form_last_row(const TransitionMatrix& a, long n);

// Coefficient of the gradient i steps in the past in the unrolled expression
// for theta_t (i in [1, t]).
double gradient_coefficient(const QhmParams& p, long i);   // -alpha*(1 - nu*beta^i)
double gradient_coefficient(const PidGains& p, long i);
double gradient_coefficient(const SnvParams& p, long i);
double gradient_coefficient(const AccSgdParams& p, long i);

// theta_t computed directly from the gradient history via the closed-form
// coefficients: theta_t = theta0 + sum_{i=1..t} coeff(i) * grads[t-i].
// Buffer initialization follows each family's convention (QHM/PID zero
// buffers, SNV/AccSGD buffers equal to theta0); QHM additionally accepts a
// nonzero initial momentum buffer g0.
Vec unrolled_theta(const QhmParams& p, std::span<const Vec> grads, const Vec& theta0,
                   const Vec* g0 = nullptr);
Vec unrolled_theta(const PidGains& p, std::span<const Vec> grads, const Vec& theta0);
Vec unrolled_theta(const SnvParams& p, std::span<const Vec> grads, const Vec& theta0);
Vec unrolled_theta(const AccSgdParams& p, std::span<const Vec> grads, const Vec& theta0);

// Parameters of the normalized-update bound |g~ / sqrt(s~)| for QHAdam with
// eps = 0 and bias correction off. Requires 0 < beta1 < sqrt(beta2) < 1 and
// nu2 > 0.
struct BoundParams {
    double nu1 = 1.0;
    double nu2 = 1.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
};

void validate(const BoundParams& p);

// Tight per-coordinate bound after t+1 gradients; t = nullopt selects the
// limit form (a distinct code path, not a large-t approximation).
double adam_update_bound(const BoundParams& p, std::optional<long> t = std::nullopt);

// The disproven bound max{1, (1-beta1)/sqrt(1-beta2)}, kept for comparison.
double kingma_claimed_bound(double beta1, double beta2);

// Scalar gradient sequence (time order, length t+1) maximizing the
// normalized update; feeding it through the eps = 0, uncorrected moment
// recursions attains adam_update_bound(p, t) exactly.
std::vector<double> adversarial_gradient_sequence(const BoundParams& p, long t);

// Ratio |g~ / sqrt(s~)| produced by running a gradient sequence through the
// eps = 0, uncorrected QHAdam moment recursions.
double normalized_update_ratio(const BoundParams& p, std::span<const double> grads);

// Closed form of the PID D-term after consuming grads (e_{-1} = v_{-1} = 0):
// v_t = ((1-beta)/beta) * [-grads.back() + (1-beta) * sum beta^i * grads[t-i]].
double pid_d_term_closed_form(std::span<const double> grads, double beta);

} // namespace qh
