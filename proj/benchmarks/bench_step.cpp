#include "strpend/config.hpp"
#include "strpend/integrator.hpp"

#include <benchmark/benchmark.h>

using namespace strpend;

namespace {

struct Setup {
    RunConfig c;
    Configuration g;
    DiscreteMomentum mom;
    RelativeUpdate guess;

    explicit Setup(int n) : c(expand_preset(ScenarioPreset::Case3Retrieve)) {
        c.model.disc.n_elements = n;
        g = initial_configuration(c);
        const Velocities v = initial_velocities(c);
        mom = momentum_from_velocities(g, v, c.model);
        guess = initialize_update(g, v, c.model);
    }
};

void BM_Derivatives(benchmark::State& state) {
    const Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(derivatives_of_Ld(s.g, s.guess, s.c.model));
}
BENCHMARK(BM_Derivatives)->Arg(5)->Arg(20)->Arg(80);

void BM_Residual(benchmark::State& state) {
    const Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(residual_from_momentum(s.g, s.mom, s.guess, 2.09, s.c.model));
    }
}
BENCHMARK(BM_Residual)->Arg(5)->Arg(20)->Arg(80);

void BM_SolveStep(benchmark::State& state) {
    const Setup s(static_cast<int>(state.range(0)));
    NewtonSettings newton = s.c.newton;
    newton.jacobian_reuse = static_cast<int>(state.range(1));
    NewtonWorkspace ws;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_step(s.g, s.mom, s.guess, 2.09, newton, s.c.model, ReelMode::Free, &ws));
    }
}
BENCHMARK(BM_SolveStep)->Args({20, 1})->Args({20, 10})->Args({80, 1});

void BM_Simulate(benchmark::State& state) {
    const Setup s(20);
    const Velocities v = initial_velocities(s.c);
    const SimulationSpec spec{0.1, ReelMode::Free, s.c.control, s.c.newton};
    for (auto _ : state) benchmark::DoNotOptimize(simulate(s.c.model, s.g, v, spec).steps_completed);
    state.SetItemsProcessed(state.iterations() * 201);
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
