#pragma once

#include <cstddef>
#include <vector>

#include "qhkit/vec.hpp"

namespace qh {

// Step-update optimizers. Each holds its hyperparameters plus any auxiliary
// buffers and exposes step(theta, grad[, lr]) -> theta'. States are plain
// values: copy one to branch a trajectory, move it between threads freely.
// Buffers start at zero unless a constructor says otherwise.
//
// Momentum buffers here are dampened: g' = beta*g + (1-beta)*grad, so g is a
// weighted average of past gradients and the update magnitude does not grow
// with beta. The conversion from the unnormalized convention is a rate
// change, alpha -> alpha/(1-beta).

struct Sgd {
    Vec step(const Vec& theta, const Vec& grad, double lr) const;
};

struct Momentum {
    double beta;
    Vec g;

    Momentum(double beta, std::size_t dim);
    Vec step(const Vec& theta, const Vec& grad, double lr);
};

struct Nag {
    double beta;
    Vec g;

    Nag(double beta, std::size_t dim);
    Vec step(const Vec& theta, const Vec& grad, double lr);
};

// Quasi-hyperbolic momentum: the update is a nu-weighted average of the
// momentum step and the plain SGD step.
//   g'     = beta*g + (1-beta)*grad
//   theta' = theta - lr*[(1-nu)*grad + nu*g']
struct Qhm {
    double nu;
    double beta;
    Vec g;

    Qhm(double nu, double beta, std::size_t dim);
    Vec step(const Vec& theta, const Vec& grad, double lr);
};

struct Adam {
    double beta1;
    double beta2;
    double eps;
    bool bias_correction;
    Vec g;
    Vec s;
    long t = 0; // completed steps

    Adam(double beta1, double beta2, double eps, std::size_t dim, bool bias_correction = true);
    Vec step(const Vec& theta, const Vec& grad, double lr);
};

// Adam with both moment estimators replaced by quasi-hyperbolic terms.
// eps is added outside the square root. Bias correction uses exponent t+1
// with t counting completed steps from zero; disabling it gives the
// RMSProp / NAdam-style recoveries.
struct QhAdam {
    double nu1;
    double beta1;
    double nu2;
    double beta2;
    double eps;
    bool bias_correction;
    Vec g;
    Vec s;
    long t = 0;

    QhAdam(double nu1, double beta1, double nu2, double beta2, double eps, std::size_t dim,
           bool bias_correction = true);
    Vec step(const Vec& theta, const Vec& grad, double lr);
};

// PID control optimizer. The controller drives the negative stochastic
// gradient to zero; theta is recomputed from the stored theta0 each step.
//   e  = -grad
//   v' = beta*v + (1-beta)*(e - e_prev)
//   w' = w + e
//   theta' = theta0 + kp*e + ki*w' + kd*v'
struct PidControl {
    double kp;
    double ki;
    double kd;
    double beta;
    Vec theta0;
    Vec e_prev;
    Vec w;
    Vec v;

    PidControl(double kp, double ki, double kd, double beta, Vec theta0);
    Vec step(const Vec& theta, const Vec& grad);
};

// PID variant whose control signal drives the parameter increment instead of
// the offset from theta0; the integral term carries the exponential decay.
//   e  = -grad
//   v' = beta*v + (1-beta)*(e - e_prev)
//   w' = beta*w + r*e
//   theta' = theta + w' + kd*v'
struct AnPid {
    double r;
    double kd;
    double beta;
    Vec e_prev;
    Vec w;
    Vec v;

    AnPid(double r, double kd, double beta, std::size_t dim);
    Vec step(const Vec& theta, const Vec& grad);
};

// Synthesized Nesterov variant: two past iterates, extrapolated output.
//   xi'    = xi - gamma*grad + beta1*(xi - xi_prev)
//   theta' = xi' + beta2*(xi' - xi)
// Initialized with xi = xi_prev = theta0.
struct Snv {
    double gamma;
    double beta1;
    double beta2;
    Vec xi;
    Vec xi_prev;

    Snv(double gamma, double beta1, double beta2, Vec theta0);
    Vec step(const Vec& theta, const Vec& grad);
};

// Accelerated SGD for stochastic least squares (delta > 0, kappa > 1,
// xi <= sqrt(kappa), eps in (0,1)). One auxiliary buffer, initialized to
// theta0; the iterate w is the caller's theta.
//   w_bar' = (1 - e2xk)*w_bar + e2xk*(theta - (kappa*delta/eps)*grad)   e2xk = eps^2*xi/kappa
//   theta' = cw*w_bar' + (1 - cw)*(theta - delta*grad)                  cw   = eps*xi/(kappa + eps*xi)
struct AccSgd {
    double delta;
    double kappa;
    double xi;
    double eps;
    Vec w_bar;

    AccSgd(double delta, double kappa, double xi, double eps, Vec theta0);
    Vec step(const Vec& theta, const Vec& grad);
};

// Aggregated momentum: K unnormalized buffers g_i' = beta_i*g_i + grad,
// update theta' = theta - (1/K) * sum_i gamma_i * g_i'. The standard form
// uses one shared gamma; the extended form weights buffers individually.
struct AggMo {
    std::vector<double> betas;
    std::vector<double> gammas;
    std::vector<Vec> buffers;

    AggMo(std::vector<double> betas, std::vector<double> gammas, std::size_t dim);
    static AggMo standard(std::vector<double> betas, double gamma, std::size_t dim);
    Vec step(const Vec& theta, const Vec& grad);
};

// Generic two-state optimizer with a linear transition:
//   a'     = h*a + k*theta + l*grad
//   theta' = m*a + q*theta + z*grad
struct Tso {
    double h, k, l, m, q, z;
    Vec a;

    Tso(double h, double k, double l, double m, double q, double z, Vec a0);
    Vec step(const Vec& theta, const Vec& grad);
};

} // namespace qh
