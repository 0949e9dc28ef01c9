#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "qhkit/analysis.hpp"
#include "qhkit/conversions.hpp"
#include "qhkit/csv.hpp"
#include "qhkit/discounting.hpp"
#include "qhkit/harness.hpp"

namespace qh::cli {

namespace {

ProblemVariant problem_from_config(const Config& cfg) {
    const std::string kind = cfg.get_string("problem.kind", "quadratic");
    if (kind == "quadratic") {
        Vec eigs = cfg.get_doubles("problem.eigenvalues", {1.0, 10.0});
        Vec linear = cfg.get_doubles("problem.linear", {});
        const std::string noise = cfg.get_string("problem.noise", "none");
        const double sigma = cfg.get_double("problem.noise_sigma", 0.0);
        NoiseModel model = NoiseModel::none();
        if (noise == "additive") {
            model = NoiseModel::additive(sigma);
        } else if (noise == "multiplicative") {
            model = NoiseModel::multiplicative(sigma);
        } else if (noise != "none") {
            throw std::runtime_error("problem.noise must be none|additive|multiplicative");
        }
        return QuadraticProblem(std::move(eigs), std::move(linear), model);
    }
    if (kind == "least_squares") {
        const long dim = cfg.get_long("problem.dim", 10);
        Vec cov = cfg.get_doubles("problem.cov_eigenvalues", {});
        if (cov.empty()) {
            // geometric spread from 1 to 100
            cov.resize(static_cast<std::size_t>(dim));
            for (long i = 0; i < dim; ++i) {
                const double f = dim == 1 ? 0.0 : static_cast<double>(i) / (dim - 1);
                cov[static_cast<std::size_t>(i)] = std::pow(10.0, 2.0 * f);
            }
        }
        return LeastSquaresProblem::make(
            static_cast<std::size_t>(dim), std::move(cov),
            cfg.get_double("problem.label_sigma", 0.1),
            static_cast<std::uint64_t>(cfg.get_long("problem.weights_seed", 7)));
    }
    if (kind == "logistic") {
        return LogisticProblem(
            cfg.get_long("problem.samples", 512), cfg.get_long("problem.features", 8),
            cfg.get_long("problem.classes", 3), cfg.get_double("problem.separation", 1.0),
            cfg.get_double("problem.feature_scale", 0.5), cfg.get_double("problem.l2_coeff", 0.5e-4),
            cfg.get_long("problem.minibatch", 16),
            static_cast<std::uint64_t>(cfg.get_long("problem.data_seed", 1234)));
    }
    throw std::runtime_error("problem.kind must be quadratic|least_squares|logistic");
}

OptimizerConfig optimizer_from_config(const Config& cfg) {
    OptimizerConfig oc;
    oc.family = cfg.get_string("optimizer.family", "qhm");
    oc.nu = cfg.get_double("optimizer.nu", oc.nu);
    oc.beta = cfg.get_double("optimizer.beta", oc.beta);
    oc.nu1 = cfg.get_double("optimizer.nu1", oc.nu1);
    oc.beta1 = cfg.get_double("optimizer.beta1", oc.beta1);
    oc.nu2 = cfg.get_double("optimizer.nu2", oc.nu2);
    oc.beta2 = cfg.get_double("optimizer.beta2", oc.beta2);
    oc.eps = cfg.get_double("optimizer.eps", oc.eps);
    oc.bias_correction = cfg.get_bool("optimizer.bias_correction", true);
    return oc;
}

LRSchedule schedule_from_config(const Config& cfg, double default_alpha, long default_warmup,
                                long default_every, double default_factor) {
    return LRSchedule(cfg.get_double("schedule.base_alpha", default_alpha),
                      cfg.get_long("schedule.warmup_steps", default_warmup),
                      cfg.get_long("schedule.decay_every", default_every),
                      cfg.get_double("schedule.decay_factor", default_factor));
}

std::uint64_t env_default_seed() {
    if (const char* env = std::getenv("QHKIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::runtime_error("QHKIT_SEED is not an integer");
        }
    }
    return 42;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << content;
}

QuadraticProblem oracle_problem(long dim) {
    Vec eigs(static_cast<std::size_t>(dim));
    for (long i = 0; i < dim; ++i) {
        const double f = dim == 1 ? 1.0 : static_cast<double>(i + 1) / static_cast<double>(dim);
        eigs[static_cast<std::size_t>(i)] = f; // spectrum spread over (0, 1]
    }
    return QuadraticProblem(std::move(eigs), {});
}

} // namespace

double ConvertArgs::get(const std::string& k) const {
    const auto it = num.find(k);
    if (it == num.end()) throw std::runtime_error("missing required flag --" + k);
    return it->second;
}

double ConvertArgs::get(const std::string& k, double fallback) const {
    const auto it = num.find(k);
    return it == num.end() ? fallback : it->second;
}

int cmd_run(const Config& cfg, std::optional<std::uint64_t> seed,
            const std::optional<std::string>& out, std::optional<long> steps) {
    const ProblemVariant problem = problem_from_config(cfg);
    const OptimizerConfig oc = optimizer_from_config(cfg);
    const LRSchedule schedule = schedule_from_config(cfg, 1.0, 0, 900, 1.0);
    const long n_steps = steps.value_or(cfg.get_long("run.steps", 100));
    const long record_every = cfg.get_long("run.record_every", 1);
    const std::uint64_t run_seed =
        seed.value_or(cfg.has("run.seed")
                          ? static_cast<std::uint64_t>(cfg.get_long("run.seed", 0))
                          : env_default_seed());

    const std::size_t dim = problem_initial_point(problem).size();
    RunResult res = run_single(make_stepper(oc, dim), problem, schedule, n_steps, run_seed,
                               record_every);
    const std::string path = out.value_or(cfg.get_string("output.path", "trajectory.csv"));
    write_file(path, trajectory_csv(res.records));
    if (res.exploded) {
        std::cerr << "run exploded at step " << res.exploded_at << "; partial trajectory in "
                  << path << "\n";
        return kExitExploded;
    }
    std::cout << "steps=" << n_steps << " final_loss=" << format_double(res.final_loss)
              << " out=" << path << "\n";
    return kExitOk;
}

int cmd_sweep(const Config& cfg, std::optional<int> jobs, std::optional<std::uint64_t> seed,
              const std::optional<std::string>& out) {
    SweepSpec spec;
    spec.family = cfg.get_string("optimizer.family", "qhm");
    spec.problem = problem_from_config(cfg);
    spec.nu_grid = cfg.get_doubles("sweep.nu_grid", spec.nu_grid);
    spec.beta_grid = cfg.get_doubles("sweep.beta_grid", spec.beta_grid);
    spec.steps = cfg.get_long("sweep.steps", 2700);
    if (seed.has_value()) {
        spec.seeds = {*seed};
    } else {
        spec.seeds = cfg.get_seeds("sweep.seeds", spec.seeds);
    }
    // The qhm protocol: alpha = 1, first-"epoch" warmup, 10-fold decay each
    // third of the budget. qhadam runs at a flat 1e-3.
    if (spec.family == "qhadam") {
        spec.schedule = schedule_from_config(cfg, 1e-3, 0, spec.steps, 1.0);
        spec.qhadam_nu2 = cfg.get_double("optimizer.nu2", 1.0);
        spec.qhadam_beta2 = cfg.get_double("optimizer.beta2", 0.999);
        spec.qhadam_eps = cfg.get_double("optimizer.eps", 1e-8);
    } else {
        spec.schedule = schedule_from_config(cfg, 1.0, spec.steps / 90, spec.steps / 3, 0.1);
    }
    const int n_jobs = jobs.value_or(static_cast<int>(cfg.get_long("sweep.jobs", 1)));

    const std::vector<RunResult> results = run_sweep(spec, n_jobs);
    const std::string path = out.value_or(cfg.get_string("output.path", "sweep.csv"));
    write_file(path, sweep_csv(results));

    const SweepSummary summary = summarize_sweep(spec, results);
    std::cout << "cells=" << spec.nu_grid.size() * spec.beta_grid.size()
              << " seeds=" << spec.seeds.size() << " out=" << path << "\n";
    std::cout << "best cell: nu=" << format_double(summary.best.nu)
              << " beta=" << format_double(summary.best.beta)
              << " median_final_loss=" << format_double(summary.best.median_final_loss) << "\n";
    if (summary.default_cell) {
        std::cout << "default cell (nu=0.7, beta=0.999): median_final_loss="
                  << format_double(summary.default_cell->median_final_loss) << "\n";
    }
    if (summary.best_nag_cell) {
        std::cout << "best nag-row cell: nu=beta=" << format_double(summary.best_nag_cell->nu)
                  << " median_final_loss="
                  << format_double(summary.best_nag_cell->median_final_loss) << "\n";
    }
    return kExitOk;
}

namespace {

// Human-facing key=value lines round at 12 significant digits; the
// bit-exact formatting contract applies to CSV output only.
void print_kv(const char* key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    std::cout << key << "=" << buf << "\n";
}

int convert_impl(const std::string& from, const std::string& to, const ConvertArgs& args) {
    if (from == "qhm" && to == "pid") {
        const QhmParams p{args.get("alpha"), args.get("nu"), args.get("beta"), 0.0};
        const PidGains g = qhm_to_pid(p);
        print_kv("kp", g.kp);
        print_kv("ki", g.ki);
        print_kv("kd", g.kd);
        print_kv("beta", g.beta);
        return kExitOk;
    }
    if (from == "pid" && to == "qhm") {
        const QhmParams p = pid_to_qhm(args.get("kp"), args.get("ki"), args.get("kd"));
        print_kv("alpha", p.alpha);
        print_kv("nu", p.nu);
        print_kv("beta", p.beta);
        return kExitOk;
    }
    if (from == "qhm" && to == "snv") {
        const QhmParams p{args.get("alpha"), args.get("nu"), args.get("beta"), 0.0};
        const SnvParams s = qhm_to_snv(p);
        print_kv("gamma", s.gamma);
        print_kv("beta1", s.beta1);
        print_kv("beta2", s.beta2);
        return kExitOk;
    }
    if (from == "snv" && to == "qhm") {
        const QhmParams p = snv_to_qhm(args.get("gamma"), args.get("beta1"), args.get("beta2"));
        print_kv("alpha", p.alpha);
        print_kv("nu", p.nu);
        print_kv("beta", p.beta);
        return kExitOk;
    }
    if (from == "qhm" && to == "accsgd") {
        const QhmParams p{args.get("alpha"), args.get("nu"), args.get("beta"), 0.0};
        const AccSgdParams a = qhm_to_accsgd(p, args.get("eps", 0.7));
        if (!a.feasible) throw infeasible_error("xi <= sqrt(kappa) violated");
        print_kv("delta", a.delta);
        print_kv("kappa", a.kappa);
        print_kv("xi", a.xi);
        print_kv("eps", a.eps);
        return kExitOk;
    }
    if (from == "accsgd" && to == "qhm") {
        AccSgdParams a;
        a.delta = args.get("delta");
        a.kappa = args.get("kappa");
        a.xi = args.get("xi");
        a.eps = args.get("eps", 0.7);
        const QhmParams p = accsgd_to_qhm(a);
        print_kv("alpha", p.alpha);
        print_kv("nu", p.nu);
        print_kv("beta", p.beta);
        return kExitOk;
    }
    if (from == "anpid" && to == "qhm") {
        const QhmParams p = anpid_to_qhm(args.get("r"), args.get("kd"), args.get("beta"));
        print_kv("alpha", p.alpha);
        print_kv("nu", p.nu);
        print_kv("beta", p.beta);
        return kExitOk;
    }
    if (from == "tso" && to == "qhm") {
        TsoParams t;
        t.h = args.get("h");
        t.k = args.get("k");
        t.l = args.get("l");
        t.m = args.get("m");
        t.q = args.get("q");
        t.z = args.get("z");
        const QhmParams p = tso_to_qhm(t);
        print_kv("alpha", p.alpha);
        print_kv("nu", p.nu);
        print_kv("beta", p.beta);
        print_kv("g0_scale", p.g0_scale);
        return kExitOk;
    }
    if (from == "qhm" && to == "aggmo") {
        const QhmParams p{args.get("alpha"), args.get("nu"), args.get("beta"), 0.0};
        const AggMoParams a = extended_aggmo_from_qhm(p);
        std::cout << "betas=" << format_double(a.betas[0]) << "," << format_double(a.betas[1])
                  << "\n";
        std::cout << "gammas=" << format_double(a.gammas[0]) << "," << format_double(a.gammas[1])
                  << "\n";
        return kExitOk;
    }
    if (from == "aggmo-lr" && to.empty()) {
        if (args.betas.empty()) throw std::runtime_error("missing required flag --betas");
        print_kv("alpha", aggmo_effective_lr(args.get("gamma"), args.betas));
        return kExitOk;
    }
    if (from == "momentum-lr" && to.empty()) {
        print_kv("alpha", unnormalized_lr_convert(args.get("alpha"), args.get("beta")));
        return kExitOk;
    }
    if (from == "nag-xi" && to.empty()) {
        const NagRecoveryXi r = nag_recovery_xi(args.get("kappa"), args.get("eps", 0.7));
        print_kv("xi", r.xi);
        std::cout << "feasible=" << (r.feasible ? "true" : "false")
                  << " (xi > sqrt(kappa) means AccSGD cannot reach NAG)\n";
        return kExitOk;
    }
    std::cerr << "unknown conversion: " << from << " -> " << to << "\n";
    return kExitUsage;
}

} // namespace

int cmd_convert(const std::string& from, const std::string& to, const ConvertArgs& args) {
    try {
        return convert_impl(from, to, args);
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible conversion: " << e.what() << "\n";
        return kExitInfeasible;
    }
}

int cmd_bound(double nu1, double nu2, double beta1, double beta2, std::optional<long> t,
              bool sweep_nu2, const std::optional<std::string>& out) {
    BoundParams p{nu1, nu2, beta1, beta2};
    if (sweep_nu2) {
        std::string csv = "nu2,bound\n";
        for (int i = 1; i <= 100; ++i) {
            BoundParams q = p;
            q.nu2 = static_cast<double>(i) / 100.0;
            csv += format_double(q.nu2);
            csv += ',';
            csv += format_double(adam_update_bound(q, t));
            csv += '\n';
        }
        if (out.has_value()) {
            write_file(*out, csv);
            std::cout << "wrote " << *out << "\n";
        } else {
            std::cout << csv;
        }
        return kExitOk;
    }
    print_kv("bound", adam_update_bound(p, t));
    print_kv("kingma_claimed", kingma_claimed_bound(beta1, beta2));
    return kExitOk;
}

int cmd_variance(double nu, double beta, long n, std::uint64_t seed) {
    const double expected = rho(nu, beta);
    const double empirical =
        estimate_variance_ratio(DiscountFunction::quasi_hyperbolic(nu, beta), n, SeededRng(seed));
    const double rel = std::fabs(empirical - expected) / expected;
    print_kv("rho", expected);
    print_kv("empirical", empirical);
    print_kv("rel_dev", rel);
    const bool pass = rel < 0.05;
    std::cout << (pass ? "PASS" : "FAIL") << " (5% tolerance)\n";
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_oracle_check(const std::string& a, const std::string& b, double alpha, double nu,
                     double beta, double eps, long steps, long dim) {
    const QuadraticProblem problem = oracle_problem(dim);
    const Vec theta0 = problem.initial_point();
    const std::size_t d = theta0.size();
    const QhmParams qp{alpha, nu, beta, 0.0};

    // "qhm unrolled" compares the recursion against the closed-form sum.
    if (a == "qhm" && b == "unrolled") {
        Qhm opt(nu, beta, d);
        SeededRng rng(0);
        Vec theta = theta0;
        std::vector<Vec> grads;
        double max_dev = 0.0;
        for (long t = 0; t < steps; ++t) {
            grads.push_back(problem.eval(theta, rng).second);
            theta = opt.step(theta, grads.back(), alpha);
            max_dev = std::max(max_dev, linf_dist(theta, unrolled_theta(qp, grads, theta0)));
        }
        print_kv("max_deviation", max_dev);
        const bool pass = max_dev < 1e-8;
        std::cout << (pass ? "PASS" : "FAIL") << "\n";
        return pass ? kExitOk : kExitCheckFailed;
    }

    auto make_named = [&](const std::string& name) -> Stepper {
        if (name == "sgd") return Stepper::with_lr(Sgd{});
        if (name == "momentum") return Stepper::with_lr(Momentum(beta, d));
        if (name == "momentum-nubeta") return Stepper::with_lr(Momentum(nu * beta, d));
        if (name == "nag") return Stepper::with_lr(Nag(beta, d));
        if (name == "qhm") {
            // the family-collapse identities pin nu for the trivial pairs
            double use_nu = nu;
            if (b == "sgd" || a == "sgd") use_nu = 0.0;
            if (b == "momentum" || a == "momentum") use_nu = 1.0;
            if (b == "nag" || a == "nag") use_nu = beta;
            return Stepper::with_lr(Qhm(use_nu, beta, d));
        }
        if (name == "pid") {
            const PidGains g = qhm_to_pid(qp);
            return Stepper::fixed_rate(PidControl(g.kp, g.ki, g.kd, g.beta, theta0));
        }
        if (name == "snv") {
            const SnvParams s = qhm_to_snv(qp);
            return Stepper::fixed_rate(Snv(s.gamma, s.beta1, s.beta2, theta0));
        }
        if (name == "accsgd") {
            const AccSgdParams ap = qhm_to_accsgd(qp, eps);
            if (!ap.feasible) throw infeasible_error("xi <= sqrt(kappa) violated");
            return Stepper::fixed_rate(AccSgd(ap.delta, ap.kappa, ap.xi, ap.eps, theta0));
        }
        if (name == "anpid") {
            const double r = alpha * (1.0 - beta);
            const double kd = (1.0 - nu) * alpha * beta / (1.0 - beta);
            return Stepper::fixed_rate(AnPid(r, kd, beta, d));
        }
        if (name == "aggmo") {
            const AggMoParams am = extended_aggmo_from_qhm(qp);
            return Stepper::fixed_rate(AggMo(am.betas, am.gammas, d));
        }
        if (name == "tso") {
            return Stepper::fixed_rate(Tso(beta, 0.0, 1.0 - beta, -alpha * nu * beta, 1.0,
                                           -alpha * (1.0 - nu * beta), zeros(d)));
        }
        throw std::runtime_error("unknown optimizer name: " + name);
    };

    try {
        EquivalenceReport rep =
            check_equivalence(make_named(a), make_named(b), problem, theta0, steps, alpha);
        print_kv("max_deviation", rep.max_abs_dev);
        if (b == "momentum-nubeta" || a == "momentum-nubeta") {
            const bool diverged = rep.max_abs_dev > 1e-3;
            std::cout << (diverged ? "FAIL (expected-fail: momentum with discount nu*beta "
                                     "does not track qhm)"
                                   : "UNEXPECTED PASS")
                      << "\n";
            return diverged ? kExitOk : kExitCheckFailed;
        }
        std::cout << (rep.pass ? "PASS" : "FAIL") << " (tolerance 1e-8)\n";
        return rep.pass ? kExitOk : kExitCheckFailed;
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible mapping: " << e.what() << "\n";
        return kExitInfeasible;
    }
}

} // namespace qh::cli
