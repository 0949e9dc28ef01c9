#include "qhkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace qh {

Stepper make_stepper(const OptimizerConfig& cfg, std::size_t dim) {
    if (cfg.family == "sgd") return Stepper::with_lr(Sgd{});
    if (cfg.family == "momentum") return Stepper::with_lr(Momentum(cfg.beta, dim));
    if (cfg.family == "nag") return Stepper::with_lr(Nag(cfg.beta, dim));
    if (cfg.family == "qhm") return Stepper::with_lr(Qhm(cfg.nu, cfg.beta, dim));
    if (cfg.family == "adam") {
        return Stepper::with_lr(Adam(cfg.beta1, cfg.beta2, cfg.eps, dim, cfg.bias_correction));
    }
    if (cfg.family == "qhadam") {
        return Stepper::with_lr(
            QhAdam(cfg.nu1, cfg.beta1, cfg.nu2, cfg.beta2, cfg.eps, dim, cfg.bias_correction));
    }
    throw std::invalid_argument("unknown optimizer family: " + cfg.family);
}

std::pair<double, Vec> problem_eval(const ProblemVariant& p, const Vec& theta, SeededRng& rng) {
    return std::visit([&](const auto& prob) { return prob.eval(theta, rng); }, p);
}

double problem_true_loss(const ProblemVariant& p, const Vec& theta) {
    return std::visit([&](const auto& prob) { return prob.true_loss(theta); }, p);
}

Vec problem_initial_point(const ProblemVariant& p) {
    return std::visit([](const auto& prob) { return prob.initial_point(); }, p);
}

RunResult run_single(Stepper stepper, const ProblemVariant& problem, const LRSchedule& schedule,
                     long steps, std::uint64_t seed, long record_every) {
    if (steps < 1) throw std::invalid_argument("steps must be positive");
    const auto start = std::chrono::steady_clock::now();

    RunResult res;
    res.seed = seed;
    res.best_loss = std::numeric_limits<double>::infinity();

    SeededRng rng(seed);
    Vec theta = problem_initial_point(problem);

    for (long t = 0; t < steps; ++t) {
        const double lr = schedule.at(t);
        auto [loss, grad] = problem_eval(problem, theta, rng);
        if (!std::isfinite(loss) || !all_finite(grad)) {
            res.exploded = true;
            res.exploded_at = t;
            break;
        }
        res.best_loss = std::min(res.best_loss, loss);
        Vec next = stepper.step(theta, grad, lr);
        const double norm = l2_norm(next);
        if (!std::isfinite(norm) || norm > kExplosionNorm) {
            res.exploded = true;
            res.exploded_at = t;
            break;
        }
        if (record_every > 0 && t % record_every == 0) {
            double upd_sq = 0.0;
            for (std::size_t i = 0; i < theta.size(); ++i) {
                const double d = next[i] - theta[i];
                upd_sq += d * d;
            }
            res.records.push_back({t, lr, loss, norm, std::sqrt(upd_sq)});
        }
        theta = std::move(next);
    }

    res.final_loss = res.exploded ? std::numeric_limits<double>::infinity()
                                  : problem_true_loss(problem, theta);
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

std::vector<double> default_nu_grid() {
    return {0.0, 0.25, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99, 0.995, 0.998, 0.999, 0.9995, 1.0};
}

std::vector<double> default_beta_grid() {
    return {0.0, 0.25, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99, 0.995, 0.998, 0.999, 0.9995};
}

std::vector<RunResult> run_sweep(const SweepSpec& spec, int parallelism) {
    if (spec.family != "qhm" && spec.family != "qhadam") {
        throw std::invalid_argument("sweep supports the qhm and qhadam families");
    }
    if (parallelism < 1) throw std::invalid_argument("parallelism must be positive");
    if (spec.nu_grid.empty() || spec.beta_grid.empty() || spec.seeds.empty()) {
        throw std::invalid_argument("sweep grids and seeds must be nonempty");
    }

    struct Cell {
        double nu;
        double beta;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    cells.reserve(spec.nu_grid.size() * spec.beta_grid.size() * spec.seeds.size());
    for (double nu : spec.nu_grid) {
        for (double beta : spec.beta_grid) {
            for (std::uint64_t seed : spec.seeds) cells.push_back({nu, beta, seed});
        }
    }

    const std::size_t dim = problem_initial_point(spec.problem).size();
    std::vector<RunResult> results(cells.size());

    auto run_cell = [&](std::size_t i) {
        const Cell& c = cells[i];
        OptimizerConfig cfg;
        cfg.family = spec.family;
        if (spec.family == "qhm") {
            cfg.nu = c.nu;
            cfg.beta = c.beta;
        } else {
            cfg.nu1 = c.nu;
            cfg.beta1 = c.beta;
            cfg.nu2 = spec.qhadam_nu2;
            cfg.beta2 = spec.qhadam_beta2;
            cfg.eps = spec.qhadam_eps;
        }
        RunResult r = run_single(make_stepper(cfg, dim), spec.problem, spec.schedule, spec.steps,
                                 c.seed, spec.record_every);
        r.family = spec.family;
        r.nu = c.nu;
        r.beta = c.beta;
        r.alpha = spec.schedule.base_alpha;
        results[i] = std::move(r);
    };

    const int jobs = std::min<int>(parallelism, static_cast<int>(cells.size()));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                    run_cell(i);
                }
            });
        }
        for (auto& th : workers) th.join();
    }
    return results;
}

std::string sweep_csv(const std::vector<RunResult>& results) {
    std::string out = "optimizer,nu,beta,alpha,seed,final_loss,best_loss,exploded\n";
    for (const auto& r : results) {
        out += r.family;
        out += ',';
        out += format_double(r.nu);
        out += ',';
        out += format_double(r.beta);
        out += ',';
        out += format_double(r.alpha);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += format_double(r.final_loss);
        out += ',';
        out += format_double(r.best_loss);
        out += ',';
        out += r.exploded ? '1' : '0';
        out += '\n';
    }
    return out;
}

namespace {

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

} // namespace

SweepSummary summarize_sweep(const SweepSpec& spec, const std::vector<RunResult>& results) {
    const std::size_t n_seeds = spec.seeds.size();
    SweepSummary summary;
    summary.best.median_final_loss = std::numeric_limits<double>::infinity();
    std::size_t idx = 0;
    for (double nu : spec.nu_grid) {
        for (double beta : spec.beta_grid) {
            std::vector<double> finals;
            finals.reserve(n_seeds);
            for (std::size_t s = 0; s < n_seeds; ++s) finals.push_back(results[idx++].final_loss);
            CellSummary cell{nu, beta, median(std::move(finals))};
            if (cell.median_final_loss < summary.best.median_final_loss) summary.best = cell;
            if (nu == 0.7 && beta == 0.999) summary.default_cell = cell;
            if (nu == beta) {
                if (!summary.best_nag_cell.has_value() ||
                    cell.median_final_loss < summary.best_nag_cell->median_final_loss) {
                    summary.best_nag_cell = cell;
                }
            }
        }
    }
    return summary;
}

EquivalenceReport check_equivalence(Stepper a, Stepper b, const QuadraticProblem& problem,
                                    const Vec& theta0, long steps, double lr, double tol,
                                    bool relative) {
    if (problem.noise.kind != NoiseModel::Kind::None) {
        throw std::invalid_argument("equivalence checks run on noiseless problems");
    }
    SeededRng rng(0);
    Vec ta = theta0;
    Vec tb = theta0;
    EquivalenceReport rep;
    double scale = 1.0;
    for (long t = 0; t < steps; ++t) {
        const Vec ga = problem.eval(ta, rng).second;
        const Vec gb = problem.eval(tb, rng).second;
        ta = a.step(ta, ga, lr);
        tb = b.step(tb, gb, lr);
        rep.max_abs_dev = std::max(rep.max_abs_dev, linf_dist(ta, tb));
        for (double x : ta) scale = std::max(scale, std::fabs(x));
    }
    rep.max_rel_dev = rep.max_abs_dev / scale;
    rep.pass = (relative ? rep.max_rel_dev : rep.max_abs_dev) < tol;
    return rep;
}

} // namespace qh
