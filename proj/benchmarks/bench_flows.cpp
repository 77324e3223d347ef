#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <span>

#include "gmalab/flows.hpp"
#include "gmalab/gma.hpp"
#include "gmalab/torus.hpp"

namespace {

using namespace gmalab;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PotentialField small_mode(const TorusGrid& g) {
    return make_potential(g, [](std::span<const double> x) {
        return 0.05 * std::cos(kTwoPi * x[0]);
    });
}

void BM_gma_rhs(benchmark::State& state) {
    const TorusGrid g(2, static_cast<int>(state.range(0)));
    const HermitianMatrix chi = HermitianMatrix::scaled_identity(2, 2.0);
    const HermitianMatrix omega = HermitianMatrix::identity(2);
    const GmaCoefficients coeffs(2, {1.0}, 2.0);
    const PotentialField phi = small_mode(g);
    for (auto _ : state) {
        PotentialField rhs = gma_rhs(phi, chi, omega, coeffs);
        benchmark::DoNotOptimize(rhs);
    }
}
BENCHMARK(BM_gma_rhs)->Arg(8)->Arg(12)->Arg(16);

void BM_dhym_rhs(benchmark::State& state) {
    const TorusGrid g(2, static_cast<int>(state.range(0)));
    const HermitianMatrix alpha = HermitianMatrix::identity(2);
    const HermitianMatrix omega = HermitianMatrix::identity(2);
    const PotentialField phi = small_mode(g);
    for (auto _ : state) {
        PotentialField rhs =
            dhym_rhs(phi, alpha, omega, std::numbers::pi / 2.0);
        benchmark::DoNotOptimize(rhs);
    }
}
BENCHMARK(BM_dhym_rhs)->Arg(8)->Arg(12)->Arg(16);

void BM_flow_step(benchmark::State& state) {
    const TorusGrid g(2, static_cast<int>(state.range(0)));
    const FlowProblem problem{FlowKind::gma,
                              HermitianMatrix::scaled_identity(2, 2.0),
                              HermitianMatrix::identity(2),
                              GmaCoefficients(2, {1.0}, 2.0),
                              0.0,
                              0.0,
                              small_mode(g),
                              std::nullopt};
    FlowTime time;
    time.dt0 = 1e-2;
    const FlowState initial{0.0, problem.initial, time.dt0};
    for (auto _ : state) {
        StepOutcome out = step(initial, problem, time);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_flow_step)->Arg(8)->Arg(12);

} // namespace

BENCHMARK_MAIN();
