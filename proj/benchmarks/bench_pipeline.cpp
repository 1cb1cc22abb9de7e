#include <benchmark/benchmark.h>

#include "fbiharm/hypersurface/residuals.hpp"
#include "fbiharm/oracle/oracle.hpp"
#include "fbiharm/scenarios/scenario.hpp"

using namespace fbiharm;

namespace {

Scenario scenario_for(int which)
{
    switch (which) {
    case 0: return build_scenario("cylinder", {{"m", 3}});
    case 1: return build_scenario("small_hypersphere", {{"m", 3}});
    case 2: return build_scenario("clifford_torus");
    default: return build_scenario("inversion");
    }
}

}  // namespace

static void BM_FBitension(benchmark::State& state)
{
    const Scenario s = scenario_for(static_cast<int>(state.range(0)));
    const auto p = sample_points(s, 1, 0)[0];
    for (auto _ : state) {
        const MapJetBundle b = map_jet_bundle(s.map, p, 4);
        benchmark::DoNotOptimize(f_bitension(b, *s.f).data());
    }
    state.SetLabel(s.name);
}
BENCHMARK(BM_FBitension)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

static void BM_FrameAndFbh2(benchmark::State& state)
{
    const Scenario s = scenario_for(static_cast<int>(state.range(0)));
    const auto p = sample_points(s, 1, 0)[0];
    for (auto _ : state) {
        const HypersurfaceFrame fr = frame_at(s.map, p, 4);
        benchmark::DoNotOptimize(residual_fbh2(fr, *s.f).normal);
    }
    state.SetLabel(s.name);
}
BENCHMARK(BM_FrameAndFbh2)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

static void BM_OracleRicci(benchmark::State& state)
{
    const MetricChart chart = charts::sphere(static_cast<std::size_t>(state.range(0)));
    std::vector<double> p(static_cast<std::size_t>(state.range(0)), 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::ricci(chart, p).data());
}
BENCHMARK(BM_OracleRicci)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);
