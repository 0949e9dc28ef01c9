#include <benchmark/benchmark.h>

#include "qhkit/discounting.hpp"
#include "qhkit/harness.hpp"
#include "qhkit/optimizers.hpp"
#include "qhkit/rng.hpp"

namespace {

using namespace qh;

Vec make_vec(std::size_t dim, std::uint64_t seed) {
    SeededRng rng(seed);
    Vec v(dim);
    for (auto& x : v) x = rng.next_gaussian();
    return v;
}

void BM_QhmStep(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    Qhm opt(0.7, 0.999, dim);
    Vec theta = make_vec(dim, 1);
    const Vec grad = make_vec(dim, 2);
    for (auto _ : state) {
        theta = opt.step(theta, grad, 1e-3);
        benchmark::DoNotOptimize(theta.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dim));
}
BENCHMARK(BM_QhmStep)->Arg(64)->Arg(1024)->Arg(65536);

void BM_QhAdamStep(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    QhAdam opt(0.7, 0.995, 1.0, 0.999, 1e-8, dim);
    Vec theta = make_vec(dim, 1);
    const Vec grad = make_vec(dim, 2);
    for (auto _ : state) {
        theta = opt.step(theta, grad, 1e-3);
        benchmark::DoNotOptimize(theta.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dim));
}
BENCHMARK(BM_QhAdamStep)->Arg(64)->Arg(1024)->Arg(65536);

void BM_LogisticMinibatchGrad(benchmark::State& state) {
    const LogisticProblem problem(512, 8, 3, 1.0, 0.5, 0.5e-4, 16, 1234);
    const Vec theta = make_vec(problem.param_dim(), 3);
    SeededRng rng(7);
    for (auto _ : state) {
        auto out = problem.eval(theta, rng);
        benchmark::DoNotOptimize(out.second.data());
    }
}
BENCHMARK(BM_LogisticMinibatchGrad);

void BM_VarianceEstimator(benchmark::State& state) {
    const auto fn = DiscountFunction::quasi_hyperbolic(0.7, 0.999);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_variance_ratio(fn, 100000, SeededRng(5)));
    }
}
BENCHMARK(BM_VarianceEstimator);

void BM_SweepCell(benchmark::State& state) {
    SweepSpec spec;
    spec.problem = LogisticProblem(512, 8, 3, 1.0, 0.5, 0.5e-4, 16, 1234);
    spec.schedule = LRSchedule(1.0, 30, 900, 0.1);
    OptimizerConfig cfg;
    cfg.family = "qhm";
    cfg.nu = 0.7;
    cfg.beta = 0.999;
    for (auto _ : state) {
        auto res = run_single(make_stepper(cfg, 27), spec.problem, spec.schedule, 2700, 1, 0);
        benchmark::DoNotOptimize(res.final_loss);
    }
}
BENCHMARK(BM_SweepCell);

} // namespace

BENCHMARK_MAIN();
