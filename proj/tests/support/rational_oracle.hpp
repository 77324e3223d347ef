#pragma once

// Test-only reference implementations.  These recompute quantities the
// library obtains via recurrences, using direct subset enumeration in exact
// rational arithmetic, and exist solely so the test suites have an
// independent cross-check.  Nothing in the library may include this header.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gmalab::testing {

using Rational = boost::multiprecision::cpp_rational;

// e_k(lambda) summed literally over all k-element subsets, for k = 0..up_to.
inline std::vector<Rational> oracle_elementary_all(
    const std::vector<Rational>& lambda, int up_to) {
    const int n = static_cast<int>(lambda.size());
    std::vector<Rational> out(static_cast<std::size_t>(up_to) + 1, Rational(0));
    out[0] = 1;
    const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1u);
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        int bits = 0;
        Rational prod = 1;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                ++bits;
                prod *= lambda[static_cast<std::size_t>(i)];
            }
        }
        if (bits <= up_to) out[static_cast<std::size_t>(bits)] += prod;
    }
    return out;
}

inline Rational oracle_elementary(const std::vector<Rational>& lambda, int k) {
    if (k < 0) return Rational(0);
    return oracle_elementary_all(lambda, k)[static_cast<std::size_t>(k)];
}

} // namespace gmalab::testing
