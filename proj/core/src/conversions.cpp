#include "qhkit/conversions.hpp"

#include <cmath>
#include <stdexcept>

namespace qh {

namespace {

QhmParams checked_qhm(double alpha, double nu, double beta, double g0_scale = 0.0) {
    QhmParams p{alpha, nu, beta, g0_scale};
    validate(p);
    return p;
}

constexpr double kTsoTol = 1e-9;

} // namespace

void validate(const QhmParams& p) {
    if (!(p.alpha > 0.0)) throw infeasible_error("alpha > 0 violated");
    if (!(p.nu >= 0.0 && p.nu <= 1.0)) throw infeasible_error("nu in [0, 1] violated");
    if (!(p.beta >= 0.0 && p.beta < 1.0)) throw infeasible_error("beta in [0, 1) violated");
}

PidGains qhm_to_pid(const QhmParams& p) {
    validate(p);
    if (!(p.beta < 1.0)) throw infeasible_error("beta < 1 violated");
    const double omb = 1.0 - p.beta;
    PidGains g;
    g.kp = -p.alpha * p.nu * p.beta / omb;
    g.ki = p.alpha;
    g.kd = p.alpha * p.nu * p.beta * p.beta / (omb * omb);
    g.beta = p.beta;
    return g;
}

QhmParams pid_to_qhm(double kp, double ki, double kd) {
    if (ki == 0.0) throw infeasible_error("ki != 0 violated (P/D/PD controller is not recoverable)");
    if (kp == 0.0 && kd == 0.0) {
        // Pure-I controller: plain SGD; beta is arbitrary, pinned to 0.
        return checked_qhm(ki, 0.0, 0.0);
    }
    if (kd == 0.0) throw infeasible_error("kd != 0 violated (PI controller is not recoverable)");
    if (kd == kp) throw infeasible_error("kd != kp violated (beta undefined)");
    const double nu = kp * kp / (kd * ki);
    const double beta = kd / (kd - kp);
    return checked_qhm(ki, nu, beta);
}

SnvParams qhm_to_snv(const QhmParams& p) {
    validate(p);
    if (!(p.beta > 0.0 && p.beta < 1.0)) throw infeasible_error("beta in (0, 1) violated");
    SnvParams s;
    s.gamma = p.alpha * (1.0 - p.beta);
    s.beta1 = p.beta;
    s.beta2 = (1.0 - p.nu) * p.beta / (1.0 - p.beta);
    return s;
}

QhmParams snv_to_qhm(double gamma, double beta1, double beta2) {
    if (!(beta1 > 0.0 && beta1 < 1.0)) throw infeasible_error("beta1 in (0, 1) violated");
    const double alpha = gamma / (1.0 - beta1);
    const double nu = 1.0 - (1.0 - beta1) / beta1 * beta2;
    return checked_qhm(alpha, nu, beta1);
}

AccSgdParams qhm_to_accsgd(const QhmParams& p, double eps) {
    validate(p);
    if (!(eps > 0.0 && eps < 1.0)) throw infeasible_error("eps in (0, 1) violated");
    if (!(p.nu < 1.0)) throw infeasible_error("nu < 1 violated (momentum is not representable)");
    if (!(p.beta > 0.0)) throw infeasible_error("beta > 0 violated");
    AccSgdParams a;
    a.delta = p.alpha * (1.0 - p.nu);
    a.kappa = (p.beta + eps) * (eps * p.nu + 1.0) / ((1.0 - p.nu) * (1.0 - p.beta));
    a.xi = (eps * p.nu + 1.0) / (eps * (1.0 - p.nu));
    a.eps = eps;
    a.feasible = a.delta > 0.0 && a.kappa > 1.0 && a.xi <= std::sqrt(a.kappa);
    return a;
}

QhmParams accsgd_to_qhm(const AccSgdParams& p, bool enforce_constraints) {
    if (enforce_constraints) {
        if (!(p.delta > 0.0)) throw infeasible_error("delta > 0 violated");
        if (!(p.kappa > 1.0)) throw infeasible_error("kappa > 1 violated");
        if (!(p.xi <= std::sqrt(p.kappa))) throw infeasible_error("xi <= sqrt(kappa) violated");
        if (!(p.eps > 0.0 && p.eps < 1.0)) throw infeasible_error("eps in (0, 1) violated");
    }
    const double alpha = p.delta * p.eps * (1.0 + p.xi) / (1.0 + p.eps);
    const double nu = (p.eps * p.xi - 1.0) / (p.eps * (1.0 + p.xi));
    const double beta = (p.kappa - p.eps * p.eps * p.xi) / (p.kappa + p.eps * p.xi);
    return checked_qhm(alpha, nu, beta);
}

NagRecoveryXi nag_recovery_xi(double kappa, double eps) {
    if (!(kappa > 1.0)) throw std::invalid_argument("kappa must exceed 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in (0, 1)");
    NagRecoveryXi out;
    out.xi = (1.0 - eps + std::sqrt(4.0 * kappa + (1.0 - eps) * (1.0 - eps))) / (2.0 * eps);
    out.feasible = out.xi <= std::sqrt(kappa);
    return out;
}

QhmParams anpid_to_qhm(double r, double kd, double beta) {
    if (!(r > 0.0)) throw infeasible_error("r > 0 violated");
    if (!(kd >= 0.0)) throw infeasible_error("kd >= 0 violated");
    if (!(beta > 0.0 && beta < 1.0)) throw infeasible_error("beta in (0, 1) violated");
    const double alpha = r / (1.0 - beta);
    const double nu = 1.0 - kd * (1.0 - beta) * (1.0 - beta) / (r * beta);
    if (nu < 0.0) throw infeasible_error("nu in [0, 1] violated (kd too large for r, beta)");
    return checked_qhm(alpha, nu, beta);
}

QhmParams tso_to_qhm(const TsoParams& p) {
    const double disc = (p.h - p.q) * (p.h - p.q) + 4.0 * p.k * p.m;
    if (disc < -kTsoTol) throw infeasible_error("phi real violated (km < -(h-q)^2/4)");
    const double phi = std::sqrt(std::max(disc, 0.0));
    const double psi = p.k * p.m - p.h * p.q;
    if (std::fabs(psi) <= kTsoTol) throw infeasible_error("psi != 0 violated");
    if (std::fabs(phi) <= kTsoTol) throw infeasible_error("phi != 0 violated");
    if (phi > 1.0 + kTsoTol) throw infeasible_error("phi <= 1 violated");
    if (std::fabs(0.5 * (p.h + p.q + phi) - 1.0) > kTsoTol) {
        throw infeasible_error("(h+q+phi)/2 = 1 violated");
    }
    if (std::fabs(p.h - p.q + phi) > kTsoTol) throw infeasible_error("h-q+phi = 0 violated");
    const double beta = 0.5 * (p.h + p.q - phi);
    if (std::fabs((1.0 - p.l) - beta) > kTsoTol) throw infeasible_error("1-l = (h+q-phi)/2 violated");

    const double lm_hz = p.l * p.m - p.h * p.z;
    const double lq_kz = p.l * p.q - p.k * p.z;
    const double denom = (p.h - p.q - phi) * lm_hz + 2.0 * p.m * lq_kz;
    const double alpha = denom / (2.0 * psi * phi);
    const double nu = 2.0 * p.m * lq_kz / denom;
    const double g0_scale = -((2.0 - (p.h + p.q - phi)) * psi) / ((p.h + p.q - phi) * lq_kz);
    return checked_qhm(alpha, nu, beta, g0_scale);
}

double aggmo_effective_lr(double gamma, const std::vector<double>& betas) {
    if (betas.empty()) throw std::invalid_argument("betas must be nonempty");
    double sum = 0.0;
    for (double b : betas) {
        if (!(b >= 0.0 && b < 1.0)) throw infeasible_error("beta in [0, 1) violated");
        sum += 1.0 / (1.0 - b);
    }
    return gamma / static_cast<double>(betas.size()) * sum;
}

AggMoParams extended_aggmo_from_qhm(const QhmParams& p) {
    validate(p);
    AggMoParams a;
    a.betas = {0.0, p.beta};
    a.gammas = {2.0 * p.alpha * (1.0 - p.nu), 2.0 * p.alpha * p.nu * (1.0 - p.beta)};
    return a;
}

double unnormalized_lr_convert(double alpha, double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw infeasible_error("beta in [0, 1) violated");
    return alpha / (1.0 - beta);
}

} // namespace qh
