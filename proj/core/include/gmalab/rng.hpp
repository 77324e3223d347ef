#pragma once

#include <cmath>
#include <cstdint>

namespace gmalab {

// Deterministic, platform-stable pseudo-random stream (SplitMix64 core).
//
// All sampling campaigns in the library derive one independent stream per
// sample from (seed, sample index), so results do not depend on evaluation
// order and identical (seed, samples) always reproduce bit-identical runs.
// The standard <random> distributions are deliberately avoided because their
// output is implementation-defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    // Stream for sample `index` of a campaign rooted at `seed`.  Mixes the
    // index through the output function so neighbouring indices decorrelate.
    static RandomStream for_sample(std::uint64_t seed, std::uint64_t index) {
        RandomStream mixer(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        mixer.next_u64();
        return mixer;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).  53 mantissa bits, so the grid is dense enough for
    // every sampling purpose here.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (deterministic, no cached spare).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

} // namespace gmalab
