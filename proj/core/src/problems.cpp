#include "qhkit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qh {

NoiseModel NoiseModel::none() { return NoiseModel{Kind::None, 0.0}; }

NoiseModel NoiseModel::additive(double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("sigma must be finite and nonnegative");
    }
    return NoiseModel{Kind::Additive, sigma};
}

NoiseModel NoiseModel::multiplicative(double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("sigma must be finite and nonnegative");
    }
    return NoiseModel{Kind::Multiplicative, sigma};
}

QuadraticProblem::QuadraticProblem(Vec eigenvalues_, Vec linear_, NoiseModel noise_)
    : eigenvalues(std::move(eigenvalues_)), linear(std::move(linear_)), noise(noise_) {
    if (eigenvalues.empty()) throw std::invalid_argument("quadratic needs at least one eigenvalue");
    for (double ev : eigenvalues) {
        if (!(ev > 0.0)) throw std::invalid_argument("eigenvalues must be positive");
    }
    if (linear.empty()) linear.assign(eigenvalues.size(), 0.0);
    require_same_dim(eigenvalues, linear);
}

std::pair<double, Vec> QuadraticProblem::eval(const Vec& theta, SeededRng& rng) const {
    require_same_dim(theta, eigenvalues);
    double loss = 0.0;
    Vec grad(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        loss += 0.5 * eigenvalues[i] * theta[i] * theta[i] + linear[i] * theta[i];
        grad[i] = eigenvalues[i] * theta[i] + linear[i];
    }
    switch (noise.kind) {
    case NoiseModel::Kind::None:
        break;
    case NoiseModel::Kind::Additive:
        for (double& g : grad) g += noise.sigma * rng.next_gaussian();
        break;
    case NoiseModel::Kind::Multiplicative:
        for (double& g : grad) g *= 1.0 + noise.sigma * rng.next_gaussian();
        break;
    }
    return {loss, std::move(grad)};
}

double QuadraticProblem::true_loss(const Vec& theta) const {
    require_same_dim(theta, eigenvalues);
    double loss = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        loss += 0.5 * eigenvalues[i] * theta[i] * theta[i] + linear[i] * theta[i];
    }
    return loss;
}

double condition_number(const QuadraticProblem& p) {
    const auto [mn, mx] = std::minmax_element(p.eigenvalues.begin(), p.eigenvalues.end());
    return *mx / *mn;
}

LeastSquaresProblem LeastSquaresProblem::make(std::size_t dim, Vec cov_eigenvalues,
                                              double label_sigma, std::uint64_t weights_seed) {
    if (cov_eigenvalues.size() != dim) {
        throw std::invalid_argument("cov_eigenvalues size must equal dim");
    }
    for (double ev : cov_eigenvalues) {
        if (!(ev > 0.0)) throw std::invalid_argument("covariance eigenvalues must be positive");
    }
    if (!(label_sigma >= 0.0)) throw std::invalid_argument("label_sigma must be nonnegative");
    LeastSquaresProblem p;
    p.cov_eigenvalues = std::move(cov_eigenvalues);
    p.label_sigma = label_sigma;
    SeededRng rng(weights_seed);
    p.true_weights.resize(dim);
    for (double& w : p.true_weights) w = rng.next_gaussian();
    return p;
}

std::pair<double, Vec> LeastSquaresProblem::eval(const Vec& theta, SeededRng& rng) const {
    require_same_dim(theta, cov_eigenvalues);
    Vec x(theta.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::sqrt(cov_eigenvalues[i]) * rng.next_gaussian();
    }
    const double y = dot(true_weights, x) + label_sigma * rng.next_gaussian();
    const double r = dot(theta, x) - y;
    Vec grad(theta.size());
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = r * x[i];
    return {0.5 * r * r, std::move(grad)};
}

double LeastSquaresProblem::true_loss(const Vec& theta) const {
    require_same_dim(theta, cov_eigenvalues);
    double loss = 0.5 * label_sigma * label_sigma;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double d = theta[i] - true_weights[i];
        loss += 0.5 * cov_eigenvalues[i] * d * d;
    }
    return loss;
}

LogisticProblem::LogisticProblem(long n_samples_, long n_features_, long n_classes_,
                                 double separation_, double feature_scale_, double l2_coeff_,
                                 long minibatch_, std::uint64_t data_seed_)
    : n_samples(n_samples_), n_features(n_features_), n_classes(n_classes_),
      separation(separation_), feature_scale(feature_scale_), l2_coeff(l2_coeff_),
      minibatch(minibatch_), data_seed(data_seed_) {
    if (n_samples < 1 || n_features < 1 || n_classes < 2) {
        throw std::invalid_argument("need n_samples >= 1, n_features >= 1, n_classes >= 2");
    }
    if (minibatch < 1 || minibatch > n_samples) {
        throw std::invalid_argument("minibatch must be in [1, n_samples]");
    }
    if (!(l2_coeff >= 0.0)) throw std::invalid_argument("l2_coeff must be nonnegative");

    SeededRng rng(data_seed);
    const double mean_scale = separation / std::sqrt(static_cast<double>(n_features));
    std::vector<Vec> means(static_cast<std::size_t>(n_classes));
    for (auto& m : means) {
        m.resize(static_cast<std::size_t>(n_features));
        for (double& c : m) c = mean_scale * rng.next_gaussian();
    }
    features.resize(static_cast<std::size_t>(n_samples));
    labels.resize(static_cast<std::size_t>(n_samples));
    for (long i = 0; i < n_samples; ++i) {
        const int label = static_cast<int>(i % n_classes);
        labels[static_cast<std::size_t>(i)] = label;
        Vec& x = features[static_cast<std::size_t>(i)];
        x.resize(static_cast<std::size_t>(n_features));
        const Vec& m = means[static_cast<std::size_t>(label)];
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = feature_scale * (m[j] + rng.next_gaussian());
        }
    }
}

std::pair<double, Vec> LogisticProblem::batch_eval(const Vec& theta,
                                                   const std::vector<std::size_t>& idx) const {
    if (theta.size() != param_dim()) throw std::invalid_argument("theta shape mismatch");
    const std::size_t d = static_cast<std::size_t>(n_features);
    const std::size_t c = static_cast<std::size_t>(n_classes);
    const std::size_t bias_off = d * c;

    double loss = 0.0;
    Vec grad(theta.size(), 0.0);
    std::vector<double> scores(c);
    std::vector<double> probs(c);
    for (std::size_t sample : idx) {
        const Vec& x = features[sample];
        const int label = labels[sample];
        for (std::size_t k = 0; k < c; ++k) {
            double s = theta[bias_off + k];
            for (std::size_t j = 0; j < d; ++j) s += theta[j * c + k] * x[j];
            scores[k] = s;
        }
        const double mx = *std::max_element(scores.begin(), scores.end());
        double z = 0.0;
        for (std::size_t k = 0; k < c; ++k) {
            probs[k] = std::exp(scores[k] - mx);
            z += probs[k];
        }
        for (std::size_t k = 0; k < c; ++k) probs[k] /= z;
        loss -= std::log(probs[static_cast<std::size_t>(label)]);
        for (std::size_t k = 0; k < c; ++k) {
            const double resid = probs[k] - (static_cast<std::size_t>(label) == k ? 1.0 : 0.0);
            for (std::size_t j = 0; j < d; ++j) grad[j * c + k] += resid * x[j];
            grad[bias_off + k] += resid;
        }
    }
    const double inv_b = 1.0 / static_cast<double>(idx.size());
    loss *= inv_b;
    for (double& g : grad) g *= inv_b;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        loss += l2_coeff * theta[i] * theta[i];
        grad[i] += 2.0 * l2_coeff * theta[i];
    }
    return {loss, std::move(grad)};
}

std::pair<double, Vec> LogisticProblem::eval(const Vec& theta, SeededRng& rng) const {
    std::vector<std::size_t> idx(static_cast<std::size_t>(minibatch));
    for (auto& i : idx) {
        i = static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(n_samples));
    }
    return batch_eval(theta, idx);
}

std::pair<double, Vec> LogisticProblem::full_batch(const Vec& theta) const {
    std::vector<std::size_t> idx(static_cast<std::size_t>(n_samples));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return batch_eval(theta, idx);
}

double LogisticProblem::true_loss(const Vec& theta) const {
    return full_batch(theta).first;
}

} // namespace qh
