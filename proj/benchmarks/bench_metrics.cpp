#include <benchmark/benchmark.h>

#include "coopout/exact_metrics.hpp"
#include "coopout/mc_sim.hpp"
#include "coopout/numerics.hpp"

namespace {

using namespace coopout;

Scenario scenario(double db)
{
    Scenario s;
    s.gamma0 = db_to_linear(db);
    s.gains = {1.0, 2.0, 0.5};
    s.dopplers = {1.0, 0.3, 0.7};
    return s;
}

void BM_BesselK0(benchmark::State& state)
{
    double z = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerics::bessel_k0(z));
        z = z < 40.0 ? z * 1.01 : 1e-3;
    }
}
BENCHMARK(BM_BesselK0);

void BM_UpperGamma32(benchmark::State& state)
{
    double x = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerics::upper_inc_gamma_3_2(x));
        x = x < 60.0 ? x * 1.01 : 1e-3;
    }
}
BENCHMARK(BM_UpperGamma32);

void BM_ExactMetrics(benchmark::State& state)
{
    const auto p = static_cast<Protocol>(state.range(0));
    const auto s = scenario(static_cast<double>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact::metrics(s, p));
    }
    state.SetLabel(std::string(to_string(p)));
}
BENCHMARK(BM_ExactMetrics)
    ->ArgsProduct({{static_cast<int>(Protocol::SR), static_cast<int>(Protocol::AF), static_cast<int>(Protocol::DF),
                    static_cast<int>(Protocol::Direct)},
                   {0, 20, 40}})
    ->Unit(benchmark::kMicrosecond);

void BM_TraceGeneration(benchmark::State& state)
{
    mc::TraceConfig cfg;
    cfg.n_samples = static_cast<std::uint64_t>(state.range(0));
    cfg.n_realizations = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc::gen_m2m_rayleigh(1.0, 1.0, 0.5, cfg, {0, 0}).samples.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TraceGeneration)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state)
{
    mc::TraceConfig cfg;
    cfg.n_samples = 1 << 16;
    cfg.n_realizations = 1;
    const auto t = mc::gen_m2m_rayleigh(1.0, 1.0, 0.5, cfg, {0, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc::estimate(t, 0.3));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.samples.size()));
}
BENCHMARK(BM_Estimate)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
