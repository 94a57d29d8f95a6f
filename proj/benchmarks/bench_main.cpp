#include <benchmark/benchmark.h>

#include <vector>

#include "pollwait/analytic.hpp"
#include "pollwait/sim.hpp"
#include "pollwait/stats.hpp"

using namespace pollwait;

namespace {

SystemConfig symmetric(std::size_t n, double rho, ServiceDistribution s,
                       double alpha, PollingOrder order = PollingOrder::Circular) {
    SystemConfig c;
    c.alpha = alpha;
    c.order = order;
    const double lambda_each = rho / (double(n) * mean(s));
    for (std::size_t i = 0; i < n; ++i)
        c.queues.push_back({lambda_each, s, Discipline::Fcfs, Policy::Exhaustive});
    return c;
}

void BM_SimulateJobs(benchmark::State& state) {
    const SystemConfig c =
        symmetric(std::size_t(state.range(0)), 0.7, Exponential{1.0}, 0.25);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const SimReport r = run(c, seed++, 100'000, 10'000);
        benchmark::DoNotOptimize(r.mean_w);
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * 100'000);
}
BENCHMARK(BM_SimulateJobs)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SimulateNearEmpty(benchmark::State& state) {
    // Stresses the idle-scan shortcut: hops dominate jobs a thousandfold.
    const SystemConfig c = symmetric(4, 0.004, Exponential{1.0}, 0.25);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const SimReport r = run(c, seed++, 20'000, 2'000);
        benchmark::DoNotOptimize(r.mean_w);
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * 20'000);
}
BENCHMARK(BM_SimulateNearEmpty)->Unit(benchmark::kMillisecond);

void BM_AnalyzeCircular(benchmark::State& state) {
    const SystemConfig c =
        symmetric(std::size_t(state.range(0)), 0.7, Exponential{1.0}, 0.25);
    for (auto _ : state) {
        const AnalyticReport r = analyze(c);
        benchmark::DoNotOptimize(r.mean_w);
    }
}
BENCHMARK(BM_AnalyzeCircular)->Arg(4)->Arg(64)->Arg(512);

void BM_AnalyzeElevator(benchmark::State& state) {
    const SystemConfig c = symmetric(std::size_t(state.range(0)), 0.7,
                                     Exponential{1.0}, 0.25,
                                     PollingOrder::Elevator);
    for (auto _ : state) {
        const AnalyticReport r = analyze(c);
        benchmark::DoNotOptimize(r.mean_w);
    }
}
BENCHMARK(BM_AnalyzeElevator)->Arg(4)->Arg(64)->Arg(512);

void BM_ExponentialDraws(benchmark::State& state) {
    RandomStream rng(42);
    const ServiceDistribution d = Exponential{1.0};
    for (auto _ : state) benchmark::DoNotOptimize(sample(d, rng));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExponentialDraws);

void BM_BatchCI(benchmark::State& state) {
    RandomStream rng(7);
    std::vector<double> series(std::size_t(state.range(0)));
    for (double& x : series) x = rng.next_unit();
    for (auto _ : state) {
        const BatchMeansCI ci = batch_ci(series, 32);
        benchmark::DoNotOptimize(ci.half_width_95);
    }
}
BENCHMARK(BM_BatchCI)->Arg(100'000)->Arg(1'000'000);

} // namespace

BENCHMARK_MAIN();
