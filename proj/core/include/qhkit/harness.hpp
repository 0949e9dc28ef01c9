#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qhkit/csv.hpp"
#include "qhkit/optimizers.hpp"
#include "qhkit/problems.hpp"
#include "qhkit/schedule.hpp"
#include "qhkit/trajectory.hpp"

namespace qh {

// Type-erased optimizer: owns its state, returns the next iterate.
// Optimizers whose rate is baked into their own parameters ignore lr.
class Stepper {
public:
    template <class Opt>
    static Stepper with_lr(Opt opt) {
        return Stepper([o = std::move(opt)](const Vec& theta, const Vec& grad,
                                            double lr) mutable { return o.step(theta, grad, lr); });
    }

    template <class Opt>
    static Stepper fixed_rate(Opt opt) {
        return Stepper([o = std::move(opt)](const Vec& theta, const Vec& grad,
                                            double) mutable { return o.step(theta, grad); });
    }

    Vec step(const Vec& theta, const Vec& grad, double lr) { return fn_(theta, grad, lr); }

private:
    explicit Stepper(std::function<Vec(const Vec&, const Vec&, double)> fn) : fn_(std::move(fn)) {}
    std::function<Vec(const Vec&, const Vec&, double)> fn_;
};

// Scheduled optimizer families driven by run/sweep.
struct OptimizerConfig {
    std::string family = "qhm"; // sgd | momentum | nag | qhm | adam | qhadam
    double nu = 0.7;
    double beta = 0.999;
    double nu1 = 0.7;
    double beta1 = 0.999;
    double nu2 = 1.0;
    double beta2 = 0.999;
    double eps = 1e-8;
    bool bias_correction = true;
};

Stepper make_stepper(const OptimizerConfig& cfg, std::size_t dim);

using ProblemVariant = std::variant<QuadraticProblem, LeastSquaresProblem, LogisticProblem>;

std::pair<double, Vec> problem_eval(const ProblemVariant& p, const Vec& theta, SeededRng& rng);
double problem_true_loss(const ProblemVariant& p, const Vec& theta);
Vec problem_initial_point(const ProblemVariant& p);

struct RunResult {
    std::string family;
    double nu = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;

    std::vector<TrajectoryRecord> records;
    double final_loss = 0.0; // deterministic full/true loss at the final iterate
    double best_loss = 0.0;  // minimum sampled loss seen during the run
    bool exploded = false;
    long exploded_at = -1; // first step with a nonfinite value
    double wall_seconds = 0.0;
};

// Any nonfinite loss/gradient/parameter, or parameter norm beyond this,
// marks the run exploded at that step.
inline constexpr double kExplosionNorm = 1e12;

// Deterministic given (stepper construction, problem, schedule, steps, seed).
// record_every = 0 disables trajectory records; otherwise every k-th step is
// logged (step 0 always).
RunResult run_single(Stepper stepper, const ProblemVariant& problem, const LRSchedule& schedule,
                     long steps, std::uint64_t seed, long record_every = 1);

std::vector<double> default_nu_grid();
std::vector<double> default_beta_grid();

struct SweepSpec {
    std::string family = "qhm"; // qhm | qhadam
    std::vector<double> nu_grid = default_nu_grid();
    std::vector<double> beta_grid = default_beta_grid();
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    long steps = 2700;
    LRSchedule schedule;
    ProblemVariant problem = QuadraticProblem({1.0}, {});
    long record_every = 0;
    // qhadam sweeps vary (nu1, beta1) and keep these fixed.
    double qhadam_nu2 = 1.0;
    double qhadam_beta2 = 0.999;
    double qhadam_eps = 1e-8;
};

// One result per (nu, beta, seed), in that grid order, independent of the
// parallelism degree.
std::vector<RunResult> run_sweep(const SweepSpec& spec, int parallelism);

// Schema: optimizer,nu,beta,alpha,seed,final_loss,best_loss,exploded.
std::string sweep_csv(const std::vector<RunResult>& results);

struct CellSummary {
    double nu = 0.0;
    double beta = 0.0;
    double median_final_loss = 0.0;
};

struct SweepSummary {
    CellSummary best;
    std::optional<CellSummary> default_cell;  // nu = 0.7, beta = 0.999
    std::optional<CellSummary> best_nag_cell; // best among nu == beta cells
};

SweepSummary summarize_sweep(const SweepSpec& spec, const std::vector<RunResult>& results);

struct EquivalenceReport {
    double max_abs_dev = 0.0;
    double max_rel_dev = 0.0; // abs deviation over max(1, sup |theta_a|)
    bool pass = false;
};

// Runs both steppers from theta0 on the noiseless problem for the given
// number of steps with a fixed rate, comparing iterates per coordinate.
EquivalenceReport check_equivalence(Stepper a, Stepper b, const QuadraticProblem& problem,
                                    const Vec& theta0, long steps, double lr, double tol = 1e-8,
                                    bool relative = false);

} // namespace qh
