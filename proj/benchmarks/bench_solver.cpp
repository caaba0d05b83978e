#include <benchmark/benchmark.h>

#include <cmath>

#include "eitmem/oracle.hpp"
#include "eitmem/solver.hpp"

using namespace eitmem;

static void BM_transform_round_trip(benchmark::State& state)
{
    const GridSpec g{-10e-3, 10e-3, static_cast<std::size_t>(state.range(0))};
    const FieldGrid f = sample_pulse(g, PulseSpec{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(inverse_transform(forward_transform(f)));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_transform_round_trip)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

static void BM_exponent_switching(benchmark::State& state)
{
    const MediumParams p;
    const ControlSchedule s;
    for (auto _ : state) {
        benchmark::DoNotOptimize(accumulate_exponent(p, s, 0.0, 180e-6));
    }
}
BENCHMARK(BM_exponent_switching);

static void BM_simulate_default(benchmark::State& state)
{
    SimulationOptions o;
    o.force = true;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate(MediumParams{}, GridSpec{}, PulseSpec{}, ControlSchedule{}, 180e-6, 15e-6, o));
    }
}
BENCHMARK(BM_simulate_default)->Unit(benchmark::kMillisecond);

static void BM_oracle_steps(benchmark::State& state)
{
    MediumParams p;
    p.g = 1e4;
    p.gamma_ba = 1e5;
    p.gamma_bc = 1e3;
    const GridSpec g{-8e-3, 8e-3, static_cast<std::size_t>(state.range(0))};
    OracleState s0 = zero_oracle_state(g);
    s0.e_field = sample_pulse(g, PulseSpec{});
    OracleConfig cfg;
    cfg.dt = 1e-9;
    cfg.c_scale = 1e-6;
    const ControlSchedule sched = ControlSchedule::constant(1e8 / std::sqrt(3.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_reduced(p, g, s0, sched, 1e-6, cfg));
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_oracle_steps)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
