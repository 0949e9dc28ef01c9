#include "qhkit/optimizers.hpp"

#include <cmath>
#include <stdexcept>

namespace qh {

namespace {

void check_step_inputs(const Vec& theta, const Vec& grad) {
    require_same_dim(theta, grad);
    require_finite(grad, "grad");
}

void check_lr(double lr) {
    if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
}

void check_nu(double nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("nu must be in [0, 1]");
}

void check_beta(double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in [0, 1)");
}

} // namespace

Vec Sgd::step(const Vec& theta, const Vec& grad, double lr) const {
    check_step_inputs(theta, grad);
    check_lr(lr);
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) out[i] = theta[i] - lr * grad[i];
    return out;
}

Momentum::Momentum(double beta_, std::size_t dim) : beta(beta_), g(dim, 0.0) {
    check_beta(beta);
}

Vec Momentum::step(const Vec& theta, const Vec& grad, double lr) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, g);
    check_lr(lr);
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        g[i] = beta * g[i] + (1.0 - beta) * grad[i];
        out[i] = theta[i] - lr * g[i];
    }
    return out;
}

Nag::Nag(double beta_, std::size_t dim) : beta(beta_), g(dim, 0.0) {
    check_beta(beta);
}

Vec Nag::step(const Vec& theta, const Vec& grad, double lr) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, g);
    check_lr(lr);
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        g[i] = beta * g[i] + (1.0 - beta) * grad[i];
        out[i] = theta[i] - lr * ((1.0 - beta) * grad[i] + beta * g[i]);
    }
    return out;
}

Qhm::Qhm(double nu_, double beta_, std::size_t dim) : nu(nu_), beta(beta_), g(dim, 0.0) {
    check_nu(nu);
    check_beta(beta);
}

Vec Qhm::step(const Vec& theta, const Vec& grad, double lr) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, g);
    check_lr(lr);
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        g[i] = beta * g[i] + (1.0 - beta) * grad[i];
        out[i] = theta[i] - lr * ((1.0 - nu) * grad[i] + nu * g[i]);
    }
    return out;
}

Adam::Adam(double beta1_, double beta2_, double eps_, std::size_t dim, bool bias_correction_)
    : beta1(beta1_), beta2(beta2_), eps(eps_), bias_correction(bias_correction_),
      g(dim, 0.0), s(dim, 0.0) {
    check_beta(beta1);
    check_beta(beta2);
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
}

Vec Adam::step(const Vec& theta, const Vec& grad, double lr) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, g);
    check_lr(lr);
    const double c1 = bias_correction ? 1.0 - std::pow(beta1, static_cast<double>(t + 1)) : 1.0;
    const double c2 = bias_correction ? 1.0 - std::pow(beta2, static_cast<double>(t + 1)) : 1.0;
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        g[i] = beta1 * g[i] + (1.0 - beta1) * grad[i];
        s[i] = beta2 * s[i] + (1.0 - beta2) * grad[i] * grad[i];
        const double ghat = g[i] / c1;
        const double shat = s[i] / c2;
        out[i] = theta[i] - lr * ghat / (std::sqrt(shat) + eps);
    }
    ++t;
    return out;
}

QhAdam::QhAdam(double nu1_, double beta1_, double nu2_, double beta2_, double eps_,
               std::size_t dim, bool bias_correction_)
    : nu1(nu1_), beta1(beta1_), nu2(nu2_), beta2(beta2_), eps(eps_),
      bias_correction(bias_correction_), g(dim, 0.0), s(dim, 0.0) {
    check_nu(nu1);
    check_nu(nu2);
    check_beta(beta1);
    check_beta(beta2);
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
}

Vec QhAdam::step(const Vec& theta, const Vec& grad, double lr) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, g);
    check_lr(lr);
    const double c1 = bias_correction ? 1.0 - std::pow(beta1, static_cast<double>(t + 1)) : 1.0;
    const double c2 = bias_correction ? 1.0 - std::pow(beta2, static_cast<double>(t + 1)) : 1.0;
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double g2 = grad[i] * grad[i];
        g[i] = beta1 * g[i] + (1.0 - beta1) * grad[i];
        s[i] = beta2 * s[i] + (1.0 - beta2) * g2;
        const double ghat = g[i] / c1;
        const double shat = s[i] / c2;
        const double num = (1.0 - nu1) * grad[i] + nu1 * ghat;
        const double den = std::sqrt((1.0 - nu2) * g2 + nu2 * shat) + eps;
        out[i] = theta[i] - lr * num / den;
    }
    ++t;
    return out;
}

PidControl::PidControl(double kp_, double ki_, double kd_, double beta_, Vec theta0_)
    : kp(kp_), ki(ki_), kd(kd_), beta(beta_), theta0(std::move(theta0_)),
      e_prev(theta0.size(), 0.0), w(theta0.size(), 0.0), v(theta0.size(), 0.0) {
    check_beta(beta);
    require_finite(theta0, "theta0");
}

Vec PidControl::step(const Vec& theta, const Vec& grad) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, theta0);
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double e = -grad[i];
        v[i] = beta * v[i] + (1.0 - beta) * (e - e_prev[i]);
        w[i] += e;
        e_prev[i] = e;
        out[i] = theta0[i] + kp * e + ki * w[i] + kd * v[i];
    }
    return out;
}

AnPid::AnPid(double r_, double kd_, double beta_, std::size_t dim)
    : r(r_), kd(kd_), beta(beta_), e_prev(dim, 0.0), w(dim, 0.0), v(dim, 0.0) {
    if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
    if (!(kd >= 0.0)) throw std::invalid_argument("kd must be nonnegative");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (0, 1)");
}

Vec AnPid::step(const Vec& theta, const Vec& grad) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, w);
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double e = -grad[i];
        v[i] = beta * v[i] + (1.0 - beta) * (e - e_prev[i]);
        w[i] = beta * w[i] + r * e;
        e_prev[i] = e;
        out[i] = theta[i] + w[i] + kd * v[i];
    }
    return out;
}

Snv::Snv(double gamma_, double beta1_, double beta2_, Vec theta0)
    : gamma(gamma_), beta1(beta1_), beta2(beta2_), xi(theta0), xi_prev(std::move(theta0)) {
    require_finite(xi, "theta0");
}

Vec Snv::step(const Vec& theta, const Vec& grad) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, xi);
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double xi_next = xi[i] - gamma * grad[i] + beta1 * (xi[i] - xi_prev[i]);
        out[i] = xi_next + beta2 * (xi_next - xi[i]);
        xi_prev[i] = xi[i];
        xi[i] = xi_next;
    }
    return out;
}

AccSgd::AccSgd(double delta_, double kappa_, double xi_, double eps_, Vec theta0)
    : delta(delta_), kappa(kappa_), xi(xi_), eps(eps_), w_bar(std::move(theta0)) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (!(kappa > 1.0)) throw std::invalid_argument("kappa must exceed 1");
    if (!(xi <= std::sqrt(kappa))) throw std::invalid_argument("xi must not exceed sqrt(kappa)");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in (0, 1)");
    require_finite(w_bar, "theta0");
}

Vec AccSgd::step(const Vec& theta, const Vec& grad) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, w_bar);
    const double e2xk = eps * eps * xi / kappa;
    const double cw = eps * xi / (kappa + eps * xi);
    const double long_rate = kappa * delta / eps;
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        w_bar[i] = (1.0 - e2xk) * w_bar[i] + e2xk * (theta[i] - long_rate * grad[i]);
        out[i] = cw * w_bar[i] + (1.0 - cw) * (theta[i] - delta * grad[i]);
    }
    return out;
}

AggMo::AggMo(std::vector<double> betas_, std::vector<double> gammas_, std::size_t dim)
    : betas(std::move(betas_)), gammas(std::move(gammas_)) {
    if (betas.empty()) throw std::invalid_argument("AggMo needs at least one buffer");
    if (betas.size() != gammas.size()) {
        throw std::invalid_argument("betas and gammas must have the same length");
    }
    for (double b : betas) check_beta(b);
    for (double gm : gammas) require_finite(gm, "gamma");
    buffers.assign(betas.size(), Vec(dim, 0.0));
}

AggMo AggMo::standard(std::vector<double> betas, double gamma, std::size_t dim) {
    std::vector<double> gammas(betas.size(), gamma);
    return AggMo(std::move(betas), std::move(gammas), dim);
}

Vec AggMo::step(const Vec& theta, const Vec& grad) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, buffers.front());
    const double inv_k = 1.0 / static_cast<double>(betas.size());
    Vec out = theta;
    for (std::size_t b = 0; b < betas.size(); ++b) {
        Vec& buf = buffers[b];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            buf[i] = betas[b] * buf[i] + grad[i]; // unnormalized on purpose
            out[i] -= inv_k * gammas[b] * buf[i];
        }
    }
    return out;
}

Tso::Tso(double h_, double k_, double l_, double m_, double q_, double z_, Vec a0)
    : h(h_), k(k_), l(l_), m(m_), q(q_), z(z_), a(std::move(a0)) {
    require_finite(a, "a0");
}

Vec Tso::step(const Vec& theta, const Vec& grad) {
    check_step_inputs(theta, grad);
    require_same_dim(theta, a);
    Vec out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double a_next = h * a[i] + k * theta[i] + l * grad[i];
        out[i] = m * a[i] + q * theta[i] + z * grad[i];
        a[i] = a_next;
    }
    return out;
}

} // namespace qh
