#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <span>

#include "gmalab/torus.hpp"

namespace {

using namespace gmalab;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PotentialField test_mode(const TorusGrid& g) {
    return make_potential(g, [](std::span<const double> x) {
        double v = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a)
            v += 0.05 * std::cos(kTwoPi * x[a]) / static_cast<double>(a + 1);
        return v;
    });
}

void BM_chi_from_potential(benchmark::State& state) {
    const TorusGrid g(2, static_cast<int>(state.range(0)));
    const HermitianMatrix chi = HermitianMatrix::scaled_identity(2, 2.0);
    const PotentialField phi = test_mode(g);
    for (auto _ : state) {
        FormField f = chi_from_potential(chi, phi);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_chi_from_potential)->Arg(8)->Arg(12)->Arg(16);

void BM_metric_laplacian(benchmark::State& state) {
    const TorusGrid g(2, static_cast<int>(state.range(0)));
    const HermitianMatrix omega = HermitianMatrix::identity(2);
    const PotentialField phi = test_mode(g);
    for (auto _ : state) {
        PotentialField lap = metric_laplacian(phi, omega);
        benchmark::DoNotOptimize(lap);
    }
}
BENCHMARK(BM_metric_laplacian)->Arg(8)->Arg(12)->Arg(16);

void BM_poisson_solve(benchmark::State& state) {
    const TorusGrid g(2, static_cast<int>(state.range(0)));
    const HermitianMatrix omega = HermitianMatrix::identity(2);
    const PotentialField rhs = test_mode(g);
    for (auto _ : state) {
        PotentialField phi = poisson_solve(rhs, omega);
        benchmark::DoNotOptimize(phi);
    }
}
BENCHMARK(BM_poisson_solve)->Arg(8)->Arg(12)->Arg(16);

void BM_mollify(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const TorusGrid g(2, N);
    const PotentialField phi = test_mode(g);
    const MollifierSpec spec{2.0 / static_cast<double>(N)};
    for (auto _ : state) {
        PotentialField smooth = mollify(phi, spec);
        benchmark::DoNotOptimize(smooth);
    }
}
BENCHMARK(BM_mollify)->Arg(8)->Arg(16);

} // namespace

BENCHMARK_MAIN();
