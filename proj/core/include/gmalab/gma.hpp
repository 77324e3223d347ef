#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gmalab/cone_report.hpp"
#include "gmalab/errors.hpp"
#include "gmalab/spectra.hpp"

namespace gmalab {

// Coefficient data for the scalar equation
//
//   sum_{k=1}^{n-1} c_k * S_k(lambda) / binom(n,k) + c_0 = S_n(lambda).
//
// The lower-order coefficients c_1..c_{n-1} must be nonnegative.  Two
// regimes are admitted:
//   * all c_k == 0 (k >= 1) and c_0 > 0   -- the pure top-degree case;
//   * some c_k > 0 and c_0 >= -c0_floor   -- the general case, where
//     c0_floor >= 0 widens the admissible range of the constant term.
class GmaCoefficients {
  public:
    GmaCoefficients(int n, std::vector<double> lower, double c0,
                    double c0_floor = 0.0);

    int n() const { return n_; }
    double c0() const { return c0_; }
    double c0_floor() const { return c0_floor_; }

    // c_k for 1 <= k <= n-1.
    double c(int k) const { return lower_.at(static_cast<std::size_t>(k) - 1); }
    const std::vector<double>& lower() const { return lower_; }

    // True when every c_k (k >= 1) vanishes, i.e. the equation degenerates
    // to det = const.
    bool pure_top_degree() const { return pure_top_; }

    // Copy with the constant term replaced (used when c_0 varies in space or
    // along a deformation schedule).  Validation is re-run.
    GmaCoefficients with_c0(double c0) const {
        return GmaCoefficients(n_, lower_, c0, c0_floor_);
    }

  private:
    int n_;
    std::vector<double> lower_;
    double c0_;
    double c0_floor_;
    bool pure_top_;
};

namespace detail {

// Runs fn(mask) for every subset of {0,..,n-1} with exactly `size` elements,
// masks visited in increasing numeric order.
template <class Fn>
void for_each_subset(int n, int size, Fn&& fn) {
    const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1u);
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        if (std::popcount(mask) == size) fn(mask);
    }
}

// Entries of `values` whose index bit is *clear* in `mask`.
template <class T>
std::vector<T> complement_entries(std::span<const T> values, std::uint32_t mask) {
    std::vector<T> rest;
    rest.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(mask & (1u << i))) rest.push_back(values[i]);
    }
    return rest;
}

} // namespace detail

// P^ell(lambda): the largest value, over all ell-element index sets E, of
//
//   sum_{k=1}^{n-1} c_k / binom(n,k) * S_{k-ell}(lambda restricted off E)
//                                    / S_{n-ell}(lambda restricted off E),
//
// with the convention S_j = 0 for j < 0.  A term with zero denominator
// contributes +infinity unless its numerator also vanishes, in which case
// that index set is skipped.  In the pure top-degree regime P is
// identically zero.  Throws DegenerateSpectrum when every index set has a
// vanishing denominator.
double gma_p(const Spectrum& lambda, const GmaCoefficients& coeffs, int ell);

// Q(lambda) = (sum_{k>=1} c_k S_k / binom(n,k) + c_0) / S_n, the ratio whose
// unit level set is the equation itself.  Throws DegenerateSpectrum when
// S_n <= 0.  The second overload substitutes a pointwise constant term.
double gma_q(const Spectrum& lambda, const GmaCoefficients& coeffs);
double gma_q(const Spectrum& lambda, const GmaCoefficients& coeffs,
             double c0_at_point);

// Membership test for the closed admissible cone
//   { lambda >= 0 and P^1(lambda) <= 1 },
// reported with margin = min(min_i lambda_i, 1 - P^1(lambda)) and the
// closure tolerance 1e-12.  Spectra for which P^1 is undefined (all
// denominators zero) are reported as non-members with margin -infinity.
ConeReport gamma_bar_membership(const Spectrum& lambda,
                                const GmaCoefficients& coeffs);

// One positivity coefficient per p-element index set S (encoded as a bit
// mask over {0,..,n-1}):
//
//   n! * e_p(lambda|_S)
//     - sum_{k=n-p}^{n-1} c_k * k! * (n-k)! * e_{k-n+p}(lambda|_S),
//
// where e_j is the degree-j elementary symmetric polynomial of the entries
// selected by S and c_0 enters the k = 0 term (present only when p = n).
struct SubsetValue {
    std::uint32_t mask = 0;
    double value = 0.0;
};
std::vector<SubsetValue> tp_subset_coefficients(const Spectrum& lambda,
                                                const GmaCoefficients& coeffs,
                                                int p);

// True when every coefficient returned by tp_subset_coefficients is
// >= -tol.
bool tp_positive(const Spectrum& lambda, const GmaCoefficients& coeffs, int p,
                 double tol = 1e-10);

// 1 - P^1(lambda): positive exactly on the interior of the admissible cone
// in the direction relevant for subsolutions.
double c_subsolution_margin(const Spectrum& lambda,
                            const GmaCoefficients& coeffs);

// Lower bound for S_n on solutions, obtained from the fixed point x* of
//   g(x) = sum_{k>=1} c_k x^{(k-1)/(n-1)} / binom(n,k)
// (solved by bisection to 1e-12):  bound = (x*)^{n/(n-1)} / n.  In the pure
// top-degree regime the equation pins S_n = c_0 and that value is returned.
double mass_lower_bound(const GmaCoefficients& coeffs);

// Which ratio a sampling probe evaluates: the level-ell obstruction P^ell
// or the full equation ratio Q.
enum class GmaProbeOperator { p_ell, q };

// Randomized structural check for the cone analysis behind the operator:
// draws `samples` pairs of Hermitian matrices B <= A (ordered by adding a
// positive-semidefinite increment) against a fixed well-conditioned metric
// derived from `seed`, evaluates the chosen ratio f on their relative
// eigenvalues, and verifies, with slack 1e-9, that
//
//   (i)   f(A) <= f(B)                    (f does not increase upward),
//   (ii)  f((A+B)/2) <= (f(A)+f(B))/2     (midpoint convexity),
//   (iii) f((A+B)/2) <= max(f(A), f(B))   (sublevel sets are midpoint
//                                          stable).
//
// For P^ell the endpoints range over all positive-semidefinite pairs; for
// Q they are rescaled into the closed admissible cone, where the ratio is
// defined and these facts hold.  `ell` selects the level for P^ell
// (1 <= ell <= n-1) and is ignored for Q.  The returned margin is the
// smallest slack observed (>= 0 exactly when no check failed); on failure
// the witness concatenates the relative eigenvalues of A and B for the
// first offending pair and remaining samples are skipped.
ConeReport convexity_monotonicity_probe(GmaProbeOperator op, int ell,
                                        const GmaCoefficients& coeffs,
                                        int samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Exact-arithmetic variants.  These templates run the same index-set
// enumeration as the double-precision routines above but over a caller
// supplied scalar type (e.g. an arbitrary-precision rational), so that
// floating-point results can be cross-checked without shared rounding.
// Entries of `lambda` must be nonnegative; `c` holds c_1..c_{n-1}.
// ---------------------------------------------------------------------------

// Decides P^ell(lambda) <= 1 exactly.  A zero denominator with nonzero
// numerator forces P = +infinity (returns false); index sets that are 0/0
// are skipped.  Throws DegenerateSpectrum when every denominator vanishes.
template <class T>
bool gma_p_le_one(std::span<const T> lambda, std::span<const T> c, int ell) {
    const int n = static_cast<int>(lambda.size());
    if (ell < 1 || ell > n - 1)
        throw std::domain_error("gma_p_le_one: ell out of range");
    bool pure_top = true;
    for (const T& ck : c)
        if (!(ck == T(0))) pure_top = false;
    if (pure_top) return true;

    bool any_nonzero_denominator = false;
    bool ok = true;
    detail::for_each_subset(n, ell, [&](std::uint32_t mask) {
        const std::vector<T> rest = detail::complement_entries(lambda, mask);
        const std::vector<T> table =
            elementary_symmetric_all(std::span<const T>(rest), n - ell);
        const T& denom = table[static_cast<std::size_t>(n - ell)];
        T numer(0);
        for (int k = std::max(1, ell); k <= n - 1; ++k) {
            numer += c[static_cast<std::size_t>(k - 1)] *
                     table[static_cast<std::size_t>(k - ell)] /
                     T(binomial(n, k));
        }
        if (denom == T(0)) {
            if (!(numer == T(0))) ok = false; // value is +infinity
        } else {
            any_nonzero_denominator = true;
            if (numer > denom) ok = false;
        }
    });
    if (!any_nonzero_denominator)
        throw DegenerateSpectrum("gma_p_le_one: all denominators vanish");
    return ok;
}

// Exact counterpart of tp_subset_coefficients.
template <class T>
std::vector<std::pair<std::uint32_t, T>>
tp_subset_values(std::span<const T> lambda, std::span<const T> c, const T& c0,
                 int p) {
    const int n = static_cast<int>(lambda.size());
    if (p < 1 || p > n) throw std::domain_error("tp_subset_values: p out of range");
    std::vector<std::pair<std::uint32_t, T>> out;
    detail::for_each_subset(n, p, [&](std::uint32_t mask) {
        std::vector<T> sel;
        sel.reserve(static_cast<std::size_t>(p));
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) sel.push_back(lambda[static_cast<std::size_t>(i)]);
        const std::vector<T> table =
            elementary_symmetric_all(std::span<const T>(sel), p);
        T value = T(factorial(n)) * table[static_cast<std::size_t>(p)];
        for (int k = n - p; k <= n - 1; ++k) {
            const T& ck = (k == 0) ? c0 : c[static_cast<std::size_t>(k - 1)];
            value -= ck * T(factorial(k)) * T(factorial(n - k)) *
                     table[static_cast<std::size_t>(k - n + p)];
        }
        out.emplace_back(mask, value);
    });
    return out;
}

// Exact counterpart of gma_q; the caller must ensure S_n(lambda) != 0.
template <class T>
T gma_q_exact(std::span<const T> lambda, std::span<const T> c, const T& c0) {
    const int n = static_cast<int>(lambda.size());
    const std::vector<T> table = elementary_symmetric_all(lambda, n);
    T numer = c0;
    for (int k = 1; k <= n - 1; ++k) {
        numer += c[static_cast<std::size_t>(k - 1)] *
                 table[static_cast<std::size_t>(k)] / T(binomial(n, k));
    }
    return numer / table[static_cast<std::size_t>(n)];
}

} // namespace gmalab
