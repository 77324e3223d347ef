#include <benchmark/benchmark.h>

#include <vector>

#include "gmalab/rng.hpp"
#include "gmalab/spectra.hpp"

namespace {

using namespace gmalab;

std::vector<double> sample_spectrum(int n, std::uint64_t seed) {
    RandomStream rng = RandomStream::for_sample(seed, 0);
    std::vector<double> lam(static_cast<std::size_t>(n));
    for (double& v : lam) v = rng.uniform(0.1, 4.0);
    return lam;
}

void BM_elementary_symmetric_all(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const std::vector<double> lam = sample_spectrum(n, 7);
    for (auto _ : state) {
        auto s = elementary_symmetric_all(std::span<const double>(lam), n);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_elementary_symmetric_all)->Arg(2)->Arg(3)->Arg(6);

void BM_restricted_symmetric(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const std::vector<double> lam = sample_spectrum(n, 8);
    const int excluded[] = {0};
    for (auto _ : state) {
        double s = restricted_symmetric(std::span<const double>(lam), n - 1,
                                        std::span<const int>(excluded));
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_restricted_symmetric)->Arg(3)->Arg(6);

void BM_relative_eigenvalues(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    RandomStream rng = RandomStream::for_sample(9, 0);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 2.0 + rng.uniform();
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = std::complex<double>(0.2 * rng.uniform(), 0.2 * rng.uniform());
            a(j, i) = std::conj(a(i, j));
        }
    }
    const HermitianMatrix chi = HermitianMatrix::from_matrix(a);
    const HermitianMatrix omega = HermitianMatrix::identity(n);
    for (auto _ : state) {
        Spectrum s = relative_eigenvalues(chi, omega);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_relative_eigenvalues)->Arg(2)->Arg(3);

} // namespace

BENCHMARK_MAIN();
