#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "jcopen/observables.hpp"
#include "jcopen/scenario.hpp"

using namespace jcopen;

namespace {

SystemParams thermal(double gamma, double nbar) {
    SystemParams p;
    p.gamma = gamma;
    p.nbar_at_omega = nbar;
    return p;
}

MasterEquation model_of(const benchmark::State& state) {
    return state.range(1) == 0 ? MasterEquation::microscopic : MasterEquation::phenomenological;
}

} // namespace

static void BM_BuildLiouvillian(benchmark::State& state) {
    const SpaceSpec spec(static_cast<int>(state.range(0)));
    const SystemParams p = thermal(0.1, 0.1);
    for (auto _ : state) {
        Liouvillian l = build_liouvillian(model_of(state), p, spec);
        benchmark::DoNotOptimize(l.sparse().nonZeros());
    }
}
BENCHMARK(BM_BuildLiouvillian)->ArgsProduct({{4, 12, 29}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_SpectralDecomposition(benchmark::State& state) {
    const SpaceSpec spec(static_cast<int>(state.range(0)));
    const Liouvillian l = build_liouvillian(model_of(state), thermal(0.1, 1.0), spec);
    for (auto _ : state) {
        SpectralPropagator prop(l);
        benchmark::DoNotOptimize(prop.max_condition_number());
    }
}
BENCHMARK(BM_SpectralDecomposition)->ArgsProduct({{4, 12, 29}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_Rk4UnitTime(benchmark::State& state) {
    const SpaceSpec spec(static_cast<int>(state.range(0)));
    const SystemParams p = thermal(0.1, 0.0);
    const Liouvillian l = build_liouvillian(model_of(state), p, spec);
    const Operator rho0 = projector(basis_state(spec, spec.n_max() / 2, Qubit::g));
    const std::vector<double> times{0.0, 1.0};
    for (auto _ : state) {
        Trajectory t = evolve_rk4(l, rho0, times, {0.0, p.omega});
        benchmark::DoNotOptimize(t.states.back()(0, 0));
    }
}
BENCHMARK(BM_Rk4UnitTime)->ArgsProduct({{4, 12, 29}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_HusimiGrid(benchmark::State& state) {
    const cplx alpha = std::sqrt(5.0);
    const SpaceSpec spec(default_coherent_truncation(alpha));
    const Operator rho = projector(coherent_state(spec, alpha, Qubit::g));
    const GridSpec grid = GridSpec::around(std::abs(alpha), static_cast<int>(state.range(0)));
    for (auto _ : state) {
        PhaseGrid q = husimi_q(rho, spec, grid);
        benchmark::DoNotOptimize(q.q(0, 0));
    }
}
BENCHMARK(BM_HusimiGrid)->Arg(41)->Arg(121)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
