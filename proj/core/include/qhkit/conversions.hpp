#pragma once

#include <vector>

#include "qhkit/errors.hpp"

namespace qh {

// Parameter records for the algorithm families related to QHM by closed-form
// mappings. Mapping functions validate their outputs against QHM's accepted
// ranges (alpha > 0, nu in [0,1], beta in [0,1)) and throw infeasible_error,
// naming the violated constraint, instead of returning out-of-range values.

struct QhmParams {
    double alpha = 1.0;
    double nu = 0.7;
    double beta = 0.999;
    // Initial-buffer coefficient produced by the two-state-optimizer
    // mapping: g0 = g0_scale * a0. Zero everywhere else.
    double g0_scale = 0.0;
};

void validate(const QhmParams& p);

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double beta = 0.9;
};

struct SnvParams {
    double gamma = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.0;
};

struct AccSgdParams {
    double delta = 0.0;
    double kappa = 0.0;
    double xi = 0.0;
    double eps = 0.7;
    // Whether delta > 0, kappa > 1, xi <= sqrt(kappa), eps in (0,1) all hold.
    // The mapping is algebraically defined either way; the flag records
    // whether the result is a legal AccSGD parameterization.
    bool feasible = false;
};

struct AnPidParams {
    double r = 0.1;
    double kd = 1.0;
    double beta = 0.9;
};

// Generic two-state optimizer coefficients:
//   a'     = h*a + k*theta + l*grad
//   theta' = m*a + q*theta + z*grad
struct TsoParams {
    double h = 0.0, k = 0.0, l = 0.0, m = 0.0, q = 0.0, z = 0.0;
};

struct AggMoParams {
    std::vector<double> betas;
    std::vector<double> gammas;
};

// --- QHM <-> PID ---
// kp = -alpha*nu*beta/(1-beta), ki = alpha, kd = alpha*nu*beta^2/(1-beta)^2.
// beta = 0 degenerates to the pure-I controller (kp = kd = 0).
PidGains qhm_to_pid(const QhmParams& p);
// alpha = ki, nu = kp^2/(kd*ki), beta = kd/(kd - kp). ki = 0 and the PI case
// (kp != 0 = kd) are unrecoverable; kp = kd = 0 is pure-I, returned as nu=0.
QhmParams pid_to_qhm(double kp, double ki, double kd);

// --- QHM <-> SNV ---
SnvParams qhm_to_snv(const QhmParams& p);
QhmParams snv_to_qhm(double gamma, double beta1, double beta2);

// --- QHM <-> AccSGD ---
// Requires nu < 1 (momentum itself is not representable). The result's
// feasible flag reports whether AccSGD's own constraints hold.
AccSgdParams qhm_to_accsgd(const QhmParams& p, double eps);
// Inverse map. With enforce_constraints the AccSGD constraints are checked
// up front and violations throw; pass false to evaluate the algebraic
// inverse on flagged-infeasible parameter records.
QhmParams accsgd_to_qhm(const AccSgdParams& p, bool enforce_constraints = true);

// The xi at which AccSGD would coincide with NAG for the given kappa, eps.
// It always exceeds sqrt(kappa), so the result is never feasible.
struct NagRecoveryXi {
    double xi = 0.0;
    bool feasible = false;
};
NagRecoveryXi nag_recovery_xi(double kappa, double eps);

// --- An-style PID -> QHM ---
// alpha = r/(1-beta), nu = 1 - kd*(1-beta)^2/(r*beta).
QhmParams anpid_to_qhm(double r, double kd, double beta);

// --- Two-state optimizer -> QHM ---
// Valid only when (checked to absolute tolerance 1e-9):
//   psi = k*m - h*q != 0,   phi = sqrt((h-q)^2 + 4*k*m) real, nonzero, <= 1,
//   (h+q+phi)/2 = 1,   h-q+phi = 0,   1-l = (h+q-phi)/2.
// The returned params carry g0_scale, the coefficient mapping the TSO's
// initial buffer a0 onto QHM's initial momentum buffer.
QhmParams tso_to_qhm(const TsoParams& p);

// --- AggMo ---
// Effective learning rate (gamma/K) * sum_i 1/(1 - beta_i).
double aggmo_effective_lr(double gamma, const std::vector<double>& betas);
// Two-buffer extended AggMo reproducing a QHM trajectory exactly:
// betas [0, beta], gammas [2*alpha*(1-nu), 2*alpha*nu*(1-beta)].
AggMoParams extended_aggmo_from_qhm(const QhmParams& p);

// Rate change between the unnormalized momentum/NAG convention and the
// dampened-buffer convention used here: alpha / (1 - beta).
double unnormalized_lr_convert(double alpha, double beta);

} // namespace qh
