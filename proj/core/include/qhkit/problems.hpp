#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qhkit/rng.hpp"
#include "qhkit/vec.hpp"

namespace qh {

struct NoiseModel {
    enum class Kind { None, Additive, Multiplicative };

    Kind kind = Kind::None;
    double sigma = 0.0;

    static NoiseModel none();
    static NoiseModel additive(double sigma);
    static NoiseModel multiplicative(double sigma);
};

// L(theta) = 1/2 theta'H theta + b'theta with diagonal positive-definite H.
// Gradients are exact, then perturbed per the noise model; the loss returned
// by eval is always exact.
struct QuadraticProblem {
    Vec eigenvalues;
    Vec linear;
    NoiseModel noise;

    QuadraticProblem(Vec eigenvalues, Vec linear, NoiseModel noise = NoiseModel::none());

    std::size_t dim() const { return eigenvalues.size(); }
    std::pair<double, Vec> eval(const Vec& theta, SeededRng& rng) const;
    double true_loss(const Vec& theta) const;
    Vec initial_point() const { return constant(dim(), 1.0); }
};

double condition_number(const QuadraticProblem& p);

// One-sample stochastic least squares: x ~ N(0, diag(cov)), y = w*'x + noise,
// loss = 1/2 (theta'x - y)^2. true_loss is the expected loss.
struct LeastSquaresProblem {
    Vec cov_eigenvalues;
    Vec true_weights;
    double label_sigma = 0.0;

    static LeastSquaresProblem make(std::size_t dim, Vec cov_eigenvalues, double label_sigma,
                                    std::uint64_t weights_seed);

    std::size_t dim() const { return cov_eigenvalues.size(); }
    std::pair<double, Vec> eval(const Vec& theta, SeededRng& rng) const;
    double true_loss(const Vec& theta) const;
    Vec initial_point() const { return zeros(dim()); }
};

// Multinomial logistic regression on a synthetic Gaussian-cluster dataset.
// The dataset is generated once from data_seed and is bit-reproducible.
// Parameters are laid out as [W (features x classes, row-major), bias].
// The objective is mean cross-entropy plus l2_coeff * |theta|^2 (so the
// gradient contribution is 2*l2_coeff*theta).
struct LogisticProblem {
    long n_samples = 0;
    long n_features = 0;
    long n_classes = 0;
    double separation = 1.0;
    double feature_scale = 1.0;
    double l2_coeff = 0.5e-4;
    long minibatch = 16;
    std::uint64_t data_seed = 0;

    std::vector<Vec> features;
    std::vector<int> labels;

    LogisticProblem(long n_samples, long n_features, long n_classes, double separation,
                    double feature_scale, double l2_coeff, long minibatch,
                    std::uint64_t data_seed);

    std::size_t param_dim() const {
        return static_cast<std::size_t>(n_features * n_classes + n_classes);
    }
    // Mean loss/gradient over a seeded random minibatch.
    std::pair<double, Vec> eval(const Vec& theta, SeededRng& rng) const;
    // Mean loss/gradient over the whole dataset.
    std::pair<double, Vec> full_batch(const Vec& theta) const;
    double true_loss(const Vec& theta) const;
    Vec initial_point() const { return zeros(param_dim()); }

private:
    std::pair<double, Vec> batch_eval(const Vec& theta, const std::vector<std::size_t>& idx) const;
};

} // namespace qh
