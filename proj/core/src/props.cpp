#include "gmalab/props.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "gmalab/dhym.hpp"
#include "gmalab/energy.hpp"
#include "gmalab/errors.hpp"
#include "gmalab/gma.hpp"
#include "gmalab/rng.hpp"
#include "gmalab/spectra.hpp"
#include "gmalab/torus.hpp"

namespace gmalab {
namespace {

constexpr double kSlack = 1e-9;
constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Campaign bookkeeping.
// ---------------------------------------------------------------------------

struct Campaign {
    PropertyReport report;

    explicit Campaign(std::string suite, int samples) {
        report.suite = std::move(suite);
        report.samples = samples;
        report.worst_margin = std::numeric_limits<double>::infinity();
    }

    // Records one observed slack; when it is negative the campaign stores the
    // (lazily built) witness and signals the caller to stop.
    template <class Describe>
    bool check(double slack, Describe&& describe) {
        report.worst_margin = std::min(report.worst_margin, slack);
        if (slack < 0.0 && report.violations == 0) {
            report.violations = 1;
            report.witness = describe();
        }
        return report.violations == 0;
    }
};

std::string fmt_values(const char* label, std::span<const double> v) {
    std::ostringstream os;
    os.precision(12);
    os << label << "=[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    os << "]";
    return os.str();
}

std::string fmt_num(const char* label, double x) {
    std::ostringstream os;
    os.precision(12);
    os << label << "=" << x;
    return os.str();
}

// ---------------------------------------------------------------------------
// Random matrix helpers (deterministic through RandomStream).
// ---------------------------------------------------------------------------

Eigen::MatrixXcd random_gaussian(RandomStream& rng, int n) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    return g;
}

Eigen::MatrixXcd random_psd(RandomStream& rng, int n, double scale) {
    const Eigen::MatrixXcd g = random_gaussian(rng, n);
    return (g.adjoint() * g) * (scale / static_cast<double>(n));
}

Eigen::MatrixXcd random_hermitian(RandomStream& rng, int n, double scale) {
    const Eigen::MatrixXcd g = random_gaussian(rng, n);
    return (g + g.adjoint()) * (0.5 * scale);
}

Eigen::MatrixXcd random_unitary(RandomStream& rng, int n) {
    const Eigen::MatrixXcd g = random_gaussian(rng, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

// Hermitian matrix with prescribed eigenvalues relative to `omega`:
// L U diag(lambda) U* L* with omega = L L* and U a random unitary.
Eigen::MatrixXcd matrix_with_relative_spectrum(RandomStream& rng,
                                               const Spectrum& lambda,
                                               const Eigen::MatrixXcd& chol_l) {
    const int n = lambda.n();
    Eigen::VectorXcd d(n);
    for (int i = 0; i < n; ++i) d(i) = lambda.values()[static_cast<std::size_t>(i)];
    const Eigen::MatrixXcd u = random_unitary(rng, n);
    Eigen::MatrixXcd m = chol_l * u * d.asDiagonal() * u.adjoint() * chol_l.adjoint();
    return 0.5 * (m + m.adjoint().eval());
}

Spectrum rel_spec(const Eigen::MatrixXcd& m, const HermitianMatrix& omega) {
    return relative_eigenvalues(
        HermitianMatrix::from_matrix(0.5 * (m + m.adjoint().eval())), omega);
}

// ---------------------------------------------------------------------------
// gMA ratio campaigns: one shared sampler, three assertions.  Every sample
// draws its own dimension, level, coefficient set (c_0 >= 0), background
// metric, a positive-semidefinite ordered pair for P^ell and a pair pushed
// into the closed admissible cone for Q.
// ---------------------------------------------------------------------------

enum class PairCheck { monotone, midpoint_convex, sublevel };

PropertyReport run_gma_pair_campaign(const char* name, PairCheck mode,
                                     int samples, std::uint64_t seed) {
    Campaign camp(name, samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 2 + static_cast<int>(rng.below(4));
        const int ell = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
        std::vector<double> lower(static_cast<std::size_t>(n - 1));
        for (double& c : lower) c = 2.0 * rng.uniform();
        const GmaCoefficients coeffs(n, lower, 2.0 * rng.uniform(), 0.0);
        const HermitianMatrix omega = HermitianMatrix::from_matrix(
            Eigen::MatrixXcd::Identity(n, n) + random_psd(rng, n, 0.5));

        const auto evaluate_pair = [&](bool use_q, double& fa, double& fb,
                                       double& fm, Spectrum& la, Spectrum& lb) {
            Eigen::MatrixXcd b = random_psd(rng, n, 1.0);
            if (use_q && !coeffs.pure_top_degree()) {
                // Scale the lower endpoint into the closed admissible cone:
                // every term of P^1 decays at least as fast as 1/t, so
                // multiplying by 1.01 * P^1 pushes the value below one, and
                // the cone is upward closed so b + psd stays inside.
                const double p1 = gma_p(rel_spec(b, omega), coeffs, 1);
                if (p1 > 1.0) b *= 1.01 * p1;
            }
            const Eigen::MatrixXcd a = b + random_psd(rng, n, 0.5);
            const Eigen::MatrixXcd mid = 0.5 * (a + b);
            la = rel_spec(a, omega);
            lb = rel_spec(b, omega);
            const Spectrum lm = rel_spec(mid, omega);
            if (use_q) {
                fa = gma_q(la, coeffs);
                fb = gma_q(lb, coeffs);
                fm = gma_q(lm, coeffs);
            } else {
                fa = gma_p(la, coeffs, ell);
                fb = gma_p(lb, coeffs, ell);
                fm = gma_p(lm, coeffs, ell);
            }
        };

        for (int use_q = 0; use_q <= 1; ++use_q) {
            double fa = 0.0, fb = 0.0, fm = 0.0;
            Spectrum la({0.0}), lb({0.0});
            evaluate_pair(use_q != 0, fa, fb, fm, la, lb);
            double slack = 0.0;
            switch (mode) {
            case PairCheck::monotone: slack = fb + kSlack - fa; break;
            case PairCheck::midpoint_convex: slack = 0.5 * (fa + fb) + kSlack - fm; break;
            case PairCheck::sublevel: slack = std::max(fa, fb) + kSlack - fm; break;
            }
            const bool ok = camp.check(slack, [&] {
                std::ostringstream os;
                os << "sample=" << i << " op=" << (use_q ? "Q" : "P") << " n=" << n
                   << " ell=" << ell << " " << fmt_values("lambdaA", la.values())
                   << " " << fmt_values("lambdaB", lb.values()) << " "
                   << fmt_num("fA", fa) << " " << fmt_num("fB", fb) << " "
                   << fmt_num("fMid", fm);
                return os.str();
            });
            if (!ok) return camp.report;
        }
    }
    return camp.report;
}

PropertyReport suite_gma_monotonicity(int samples, std::uint64_t seed) {
    return run_gma_pair_campaign("gma-monotonicity", PairCheck::monotone, samples, seed);
}
PropertyReport suite_gma_convexity(int samples, std::uint64_t seed) {
    return run_gma_pair_campaign("gma-convexity", PairCheck::midpoint_convex, samples, seed);
}
PropertyReport suite_gma_sublevel(int samples, std::uint64_t seed) {
    return run_gma_pair_campaign("gma-sublevel", PairCheck::sublevel, samples, seed);
}

// ---------------------------------------------------------------------------
// Nesting of the P^ell sublevel sets: once P^{ell0} <= 1, every higher
// level must satisfy P^{ell'} <= 1 as well.  Spectra are drawn positive and
// rescaled so the anchor level sits strictly inside its sublevel set.
// ---------------------------------------------------------------------------

PropertyReport suite_p_level_nesting(int samples, std::uint64_t seed) {
    Campaign camp("p-level-nesting", samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 3 + static_cast<int>(rng.below(3));
        std::vector<double> lower(static_cast<std::size_t>(n - 1));
        for (double& c : lower) c = 2.0 * rng.uniform();
        if (*std::max_element(lower.begin(), lower.end()) < 1e-3) lower[0] = 1.0;
        const GmaCoefficients coeffs(n, lower, 2.0 * rng.uniform(), 0.0);

        std::vector<double> lam(static_cast<std::size_t>(n));
        for (double& x : lam) x = std::exp(rng.uniform(-1.5, 1.5));
        const int ell0 = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
        const double target = 0.5 + 0.5 * rng.uniform();
        // P^{ell0}(t * lambda) decreases strictly in t (every term carries a
        // negative power of t), so bisect the scale onto the anchor value,
        // keeping the certified side P <= target.
        const auto p_at = [&](double t) {
            std::vector<double> scaled = lam;
            for (double& x : scaled) x *= t;
            return gma_p(Spectrum(scaled), coeffs, ell0);
        };
        double lo = 1.0, hi = 1.0;
        while (p_at(hi) > target) hi *= 2.0;
        while (p_at(lo) < target) lo *= 0.5;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (p_at(mid) > target ? lo : hi) = mid;
        }
        for (double& x : lam) x *= hi;
        const Spectrum anchored(lam);

        for (int ellp = ell0; ellp <= n - 1; ++ellp) {
            const double val = gma_p(anchored, coeffs, ellp);
            const bool ok = camp.check(1.0 + kSlack - val, [&] {
                std::ostringstream os;
                os << "sample=" << i << " n=" << n << " ell0=" << ell0
                   << " ellPrime=" << ellp << " "
                   << fmt_values("lambda", anchored.values()) << " "
                   << fmt_num("anchorValue", target) << " " << fmt_num("value", val);
                return os.str();
            });
            if (!ok) return camp.report;
        }
    }
    return camp.report;
}

// ---------------------------------------------------------------------------
// Exact rational equivalence: the subtorus positivity coefficients are all
// nonnegative exactly when P^{n-p} <= 1, decided in exact arithmetic on
// dyadic spectra (which double arithmetic also represents exactly).  The
// recorded margin is an agreement indicator (+1 per agreeing sample).
// ---------------------------------------------------------------------------

PropertyReport suite_tp_equivalence(int samples, std::uint64_t seed) {
    using Rational = boost::multiprecision::cpp_rational;
    Campaign camp("tp-equivalence", samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 2 + static_cast<int>(rng.below(4));

        std::vector<double> lam_d(static_cast<std::size_t>(n));
        std::vector<Rational> lam_r(static_cast<std::size_t>(n));
        int zeros = 0;
        for (int j = 0; j < n; ++j) {
            std::uint64_t num = rng.below(33);
            if (num == 0 && ++zeros > 1) num = 1 + rng.below(32); // keep at most one zero
            lam_d[static_cast<std::size_t>(j)] = static_cast<double>(num) / 8.0;
            lam_r[static_cast<std::size_t>(j)] = Rational(num, 8);
        }
        std::vector<double> c_d(static_cast<std::size_t>(n - 1));
        std::vector<Rational> c_r(static_cast<std::size_t>(n - 1));
        bool any_lower = false;
        for (int k = 0; k < n - 1; ++k) {
            const std::uint64_t num = rng.below(17);
            if (num != 0) any_lower = true;
            c_d[static_cast<std::size_t>(k)] = static_cast<double>(num) / 8.0;
            c_r[static_cast<std::size_t>(k)] = Rational(num, 8);
        }
        std::uint64_t c0_num = rng.below(17);
        if (!any_lower && c0_num == 0) c0_num = 1; // degenerate equation otherwise
        const GmaCoefficients coeffs(n, c_d, static_cast<double>(c0_num) / 8.0, 0.0);
        const Spectrum lam(lam_d);

        for (int p = 1; p <= n - 1; ++p) {
            const bool via_subtori = tp_positive(lam, coeffs, p);
            const bool via_ratio = gma_p_le_one<Rational>(
                std::span<const Rational>(lam_r), std::span<const Rational>(c_r),
                n - p);
            const double slack = (via_subtori == via_ratio) ? 1.0 : -1.0;
            const bool ok = camp.check(slack, [&] {
                std::ostringstream os;
                os << "sample=" << i << " n=" << n << " p=" << p << " "
                   << fmt_values("lambda", lam.values()) << " "
                   << fmt_values("c", coeffs.lower()) << " subtorusPositive="
                   << via_subtori << " ratioLeOne=" << via_ratio;
                return os.str();
            });
            if (!ok) return camp.report;
        }
    }
    return camp.report;
}

// ---------------------------------------------------------------------------
// Phase campaigns.
// ---------------------------------------------------------------------------

PropertyReport suite_dhym_monotonicity(int samples, std::uint64_t seed) {
    Campaign camp("dhym-monotonicity", samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 2 + static_cast<int>(rng.below(4));
        const HermitianMatrix omega = HermitianMatrix::from_matrix(
            Eigen::MatrixXcd::Identity(n, n) + random_psd(rng, n, 0.5));
        const Eigen::MatrixXcd b = random_hermitian(rng, n, 1.0);
        const Eigen::MatrixXcd a = b + random_psd(rng, n, 0.7);
        const Spectrum la = rel_spec(a, omega);
        const Spectrum lb = rel_spec(b, omega);
        const int ell = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));

        const double slack_total =
            lagrangian_phase(lb) - lagrangian_phase(la) + kSlack;
        const double slack_trunc =
            truncated_phase(lb, ell) - truncated_phase(la, ell) + kSlack;
        const bool ok = camp.check(std::min(slack_total, slack_trunc), [&] {
            std::ostringstream os;
            os << "sample=" << i << " n=" << n << " ell=" << ell << " "
               << fmt_values("lambdaA", la.values()) << " "
               << fmt_values("lambdaB", lb.values()) << " "
               << fmt_num("thetaA", lagrangian_phase(la)) << " "
               << fmt_num("thetaB", lagrangian_phase(lb)) << " "
               << fmt_num("truncA", truncated_phase(la, ell)) << " "
               << fmt_num("truncB", truncated_phase(lb, ell));
            return os.str();
        });
        if (!ok) return camp.report;
    }
    return camp.report;
}

PropertyReport suite_dhym_convexity(int samples, std::uint64_t seed) {
    Campaign camp("dhym-convexity", samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 2 + static_cast<int>(rng.below(4));
        const double big = kPi * rng.uniform(0.4, 0.9);
        const DhymPhaseSpec spec(big, big);
        const HermitianMatrix omega = HermitianMatrix::from_matrix(
            Eigen::MatrixXcd::Identity(n, n) + random_psd(rng, n, 0.5));
        const Eigen::MatrixXcd chol_l =
            Eigen::LLT<Eigen::MatrixXcd>(omega.mat()).matrixL();

        const Spectrum seed_a = sample_gamma_theta(spec, n, rng);
        const Spectrum seed_b = sample_gamma_theta(spec, n, rng);
        const Eigen::MatrixXcd a = matrix_with_relative_spectrum(rng, seed_a, chol_l);
        const Eigen::MatrixXcd b = matrix_with_relative_spectrum(rng, seed_b, chol_l);
        const Eigen::MatrixXcd mid = 0.5 * (a + b);
        const int ell = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));

        const Spectrum la = rel_spec(a, omega);
        const Spectrum lb = rel_spec(b, omega);
        const Spectrum lm = rel_spec(mid, omega);
        double slack;
        std::string note;
        try {
            const double fa = dhym_p(la, ell);
            const double fb = dhym_p(lb, ell);
            const double fm = dhym_p(lm, ell);
            slack = 0.5 * (fa + fb) + kSlack - fm;
            std::ostringstream os;
            os.precision(12);
            os << "fA=" << fa << " fB=" << fb << " fMid=" << fm;
            note = os.str();
        } catch (const PhaseSingularity& e) {
            slack = -1.0;
            note = std::string("phase singularity: ") + e.what();
        }
        const bool ok = camp.check(slack, [&] {
            std::ostringstream os;
            os << "sample=" << i << " n=" << n << " ell=" << ell << " "
               << fmt_num("window", big) << " "
               << fmt_values("lambdaA", la.values()) << " "
               << fmt_values("lambdaB", lb.values()) << " "
               << fmt_values("lambdaMid", lm.values()) << " " << note;
            return os.str();
        });
        if (!ok) return camp.report;
    }
    return camp.report;
}

PropertyReport suite_dhym_closure(int samples, std::uint64_t seed) {
    Campaign camp("dhym-closure", samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 2 + static_cast<int>(rng.below(4));
        const double big = kPi * rng.uniform(0.5, 0.9);
        const double small = rng.uniform(0.25 * kPi, big);
        const DhymPhaseSpec spec(small, big);
        const HermitianMatrix omega = HermitianMatrix::from_matrix(
            Eigen::MatrixXcd::Identity(n, n) + random_psd(rng, n, 0.5));
        const Eigen::MatrixXcd chol_l =
            Eigen::LLT<Eigen::MatrixXcd>(omega.mat()).matrixL();

        const Spectrum seed_a = sample_gamma_theta(spec, n, rng);
        const Spectrum seed_b = sample_gamma_theta(spec, n, rng);
        const Eigen::MatrixXcd a = matrix_with_relative_spectrum(rng, seed_a, chol_l);
        const Eigen::MatrixXcd b = matrix_with_relative_spectrum(rng, seed_b, chol_l);
        const Spectrum lm = rel_spec(0.5 * (a + b), omega);
        const ConeReport membership = gamma_theta_membership(lm, spec, true);

        const bool ok = camp.check(membership.margin + kSlack, [&] {
            std::ostringstream os;
            os << "sample=" << i << " n=" << n << " " << fmt_num("theta", small)
               << " " << fmt_num("Theta", big) << " "
               << fmt_values("lambdaMid", lm.values()) << " "
               << fmt_num("margin", membership.margin);
            return os.str();
        });
        if (!ok) return camp.report;
    }
    return camp.report;
}

// Eigenvalues of a sum are majorized by the sum of sorted eigenvalues:
// descending partial sums dominate with equal totals.
PropertyReport suite_ky_fan(int samples, std::uint64_t seed) {
    Campaign camp("ky-fan", samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 2 + static_cast<int>(rng.below(5));
        const HermitianMatrix id = HermitianMatrix::identity(n);
        const Eigen::MatrixXcd a = random_hermitian(rng, n, 1.0);
        const Eigen::MatrixXcd b = random_hermitian(rng, n, 1.0);
        const Spectrum la = rel_spec(a, id);
        const Spectrum lb = rel_spec(b, id);
        const Spectrum lc = rel_spec(a + b, id);

        // Values come back ascending; walk from the top.
        double sum_ab = 0.0, sum_c = 0.0, slack = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= n; ++k) {
            const std::size_t idx = static_cast<std::size_t>(n - k);
            sum_ab += la.values()[idx] + lb.values()[idx];
            sum_c += lc.values()[idx];
            if (k < n)
                slack = std::min(slack, sum_ab - sum_c + kSlack);
            else
                slack = std::min(slack, kSlack - std::abs(sum_ab - sum_c));
        }
        const bool ok = camp.check(slack, [&] {
            std::ostringstream os;
            os << "sample=" << i << " n=" << n << " "
               << fmt_values("lambdaA", la.values()) << " "
               << fmt_values("lambdaB", lb.values()) << " "
               << fmt_values("lambdaSum", lc.values());
            return os.str();
        });
        if (!ok) return camp.report;
    }
    return camp.report;
}

// Re Prod(lambda_j + i) = cot(theta) * Im Prod(lambda_j + i), checked in
// relative terms on draws whose imaginary part stays away from zero.
PropertyReport suite_phase_slope(int samples, std::uint64_t seed) {
    Campaign camp("phase-slope", samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 1 + static_cast<int>(rng.below(5));
        std::vector<double> lam(static_cast<std::size_t>(n));
        ComplexSlope slope{};
        double norm = 0.0;
        for (int attempt = 0; attempt < 256; ++attempt) {
            for (double& x : lam) x = rng.uniform(-3.0, 3.0);
            slope = complex_slope(Spectrum(lam));
            norm = std::hypot(slope.re, slope.im);
            if (std::abs(slope.im) >= 0.01 * norm) break;
        }
        const Spectrum spectrum(lam);
        const double theta = lagrangian_phase(spectrum);
        const double resid =
            std::abs(slope.re - (std::cos(theta) / std::sin(theta)) * slope.im);
        const bool ok = camp.check(kSlack - resid / norm, [&] {
            std::ostringstream os;
            os << "sample=" << i << " n=" << n << " "
               << fmt_values("lambda", spectrum.values()) << " "
               << fmt_num("re", slope.re) << " " << fmt_num("im", slope.im)
               << " " << fmt_num("theta", theta) << " "
               << fmt_num("relResidual", resid / norm);
            return os.str();
        });
        if (!ok) return camp.report;
    }
    return camp.report;
}

// ---------------------------------------------------------------------------
// Scalar inequality campaigns.
// ---------------------------------------------------------------------------

PropertyReport suite_newton_maclaurin(int samples, std::uint64_t seed) {
    constexpr double kTol = 1e-10;
    Campaign camp("newton-maclaurin", samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 2 + static_cast<int>(rng.below(5));
        std::vector<double> lam(static_cast<std::size_t>(n));
        for (double& x : lam) x = std::exp(rng.uniform(-3.0, 2.0));
        const Spectrum spectrum(lam);
        const std::vector<double> margins = newton_maclaurin_margin(spectrum);
        const double worst = *std::min_element(margins.begin(), margins.end());
        const bool ok = camp.check(worst + kTol, [&] {
            std::ostringstream os;
            os << "sample=" << i << " n=" << n << " "
               << fmt_values("lambda", spectrum.values()) << " "
               << fmt_values("margins", margins);
            return os.str();
        });
        if (!ok) return camp.report;
    }
    return camp.report;
}

// The fixed-point mass bound never exceeds the top symmetric function on
// sampled points of the solution locus Q = 1.
PropertyReport suite_mass_bound(int samples, std::uint64_t seed) {
    constexpr double kTol = 1e-10;
    Campaign camp("mass-bound", samples);
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const int n = 2 + static_cast<int>(rng.below(4));
        std::vector<double> lower(static_cast<std::size_t>(n - 1));
        if (i % 5 != 0)
            for (double& c : lower) c = 2.0 * rng.uniform();
        const GmaCoefficients coeffs(n, lower, rng.uniform(0.1, 2.0), 0.0);
        const double bound = mass_lower_bound(coeffs);

        std::vector<double> dir(static_cast<std::size_t>(n));
        for (double& x : dir) x = std::exp(rng.uniform(-1.0, 1.0));
        const auto q_at = [&](double t) {
            std::vector<double> scaled = dir;
            for (double& x : scaled) x *= t;
            return gma_q(Spectrum(scaled), coeffs);
        };
        // Q(t * dir) decreases strictly from +inf to 0: bracket then bisect.
        double lo = 1.0, hi = 1.0;
        while (q_at(lo) < 1.0) lo *= 0.5;
        while (q_at(hi) > 1.0) hi *= 2.0;
        for (int it = 0; it < 100 && hi - lo > 1e-13 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (q_at(mid) >= 1.0 ? lo : hi) = mid;
        }
        std::vector<double> onloc = dir;
        for (double& x : onloc) x *= 0.5 * (lo + hi);
        const Spectrum point(onloc);
        const double sn = elementary_symmetric(point, n);
        const bool ok = camp.check(sn - bound + kTol, [&] {
            std::ostringstream os;
            os << "sample=" << i << " n=" << n << " "
               << fmt_values("c", coeffs.lower()) << " "
               << fmt_num("c0", coeffs.c0()) << " "
               << fmt_values("lambda", point.values()) << " "
               << fmt_num("Sn", sn) << " " << fmt_num("bound", bound);
            return os.str();
        });
        if (!ok) return camp.report;
    }
    return camp.report;
}

// ---------------------------------------------------------------------------
// Grid campaigns.
// ---------------------------------------------------------------------------

PotentialField random_trig_potential(const TorusGrid& g, RandomStream& rng,
                                     double amplitude) {
    struct Mode {
        std::array<double, 4> freq;
        double phase;
        double amp;
    };
    std::vector<Mode> modes(4);
    for (Mode& m : modes) {
        bool nonzero = false;
        for (int t = 0; t < g.axes(); ++t) {
            m.freq[static_cast<std::size_t>(t)] =
                static_cast<double>(static_cast<int>(rng.below(5))) - 2.0;
            if (m.freq[static_cast<std::size_t>(t)] != 0.0) nonzero = true;
        }
        if (!nonzero) m.freq[0] = 1.0;
        m.phase = 2.0 * kPi * rng.uniform();
        m.amp = amplitude * (0.5 + rng.uniform());
    }
    return make_potential(g, [&](std::span<const double> x) {
        double s = 0.0;
        for (const Mode& m : modes) {
            double arg = m.phase;
            for (std::size_t t = 0; t < x.size(); ++t)
                arg += 2.0 * kPi * m.freq[t] * x[t];
            s += m.amp * std::cos(arg);
        }
        return s;
    });
}

// Pointwise subsolution fields stay in their cone after bump mollification
// at radii of two and four grid spacings (constant background metric).
PropertyReport suite_mollifier_stability(int samples, std::uint64_t seed) {
    Campaign camp("mollifier-stability", samples);
    const TorusGrid g(2, 12);
    const double h = 1.0 / 12.0;
    const HermitianMatrix id = HermitianMatrix::identity(2);

    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const bool phase_cone = (i % 2 == 1);

        const double c1 = 2.0 * rng.uniform();
        const GmaCoefficients coeffs(2, {c1}, 2.0 * rng.uniform(), 0.0);
        const DhymPhaseSpec spec(0.6 * kPi, 0.8 * kPi);
        const HermitianMatrix background =
            phase_cone ? HermitianMatrix::identity(2)
                       : HermitianMatrix::scaled_identity(2, rng.uniform(1.5, 3.0));

        const auto min_margin = [&](const PotentialField& phi) {
            const RelativeSpectrumField rsf =
                relative_spectrum_field(chi_from_potential(background, phi), id);
            double worst = std::numeric_limits<double>::infinity();
            std::size_t worst_point = 0;
            for (std::size_t p = 0; p < rsf.npoints(); ++p) {
                const std::span<const double> v = rsf.at(p);
                const Spectrum lam(std::vector<double>(v.begin(), v.end()));
                const ConeReport r = phase_cone
                                         ? gamma_theta_membership(lam, spec, true)
                                         : gamma_bar_membership(lam, coeffs);
                if (r.margin < worst) {
                    worst = r.margin;
                    worst_point = p;
                }
            }
            return std::pair<double, std::size_t>(worst, worst_point);
        };

        PotentialField phi = random_trig_potential(g, rng, 0.02);
        double base_margin = min_margin(phi).first;
        for (int tries = 0; tries < 12 && base_margin < 0.05; ++tries) {
            for (std::size_t p = 0; p < phi.size(); ++p) phi[p] *= 0.5;
            base_margin = min_margin(phi).first;
        }

        for (const double delta : {2.0 * h, 4.0 * h}) {
            const PotentialField smoothed = mollify(phi, MollifierSpec{delta});
            const auto [margin, point] = min_margin(smoothed);
            const bool ok = camp.check(margin + kSlack, [&, m = margin, pt = point] {
                std::ostringstream os;
                os << "sample=" << i << " cone=" << (phase_cone ? "phase" : "gma")
                   << " delta=" << delta << " point=" << pt << " "
                   << fmt_num("marginBefore", base_margin) << " "
                   << fmt_num("marginAfter", m);
                return os.str();
            });
            if (!ok) return camp.report;
        }
    }
    return camp.report;
}

// Directional derivatives of the three energies against central finite
// differences, in relative terms, on random potential/direction pairs.
PropertyReport suite_energy_derivatives(int samples, std::uint64_t seed) {
    constexpr double kRelTol = 1e-4;
    Campaign camp("energy-derivatives", samples);
    const TorusGrid g(2, 12);
    const HermitianMatrix id = HermitianMatrix::identity(2);

    const auto axpy = [](const PotentialField& x, double a, const PotentialField& y) {
        PotentialField out = x;
        for (std::size_t p = 0; p < out.size(); ++p) out[p] += a * y[p];
        return out;
    };
    const auto rel_gap = [&](double analytic, double fd) {
        const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-6});
        return kRelTol - std::abs(analytic - fd) / denom;
    };

    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const double cbg = rng.uniform(1.6, 2.4);
        const HermitianMatrix chi = HermitianMatrix::scaled_identity(2, cbg);
        const GmaCoefficients coeffs(2, {1.5 * rng.uniform()}, 1.5 * rng.uniform(), 0.0);
        const double theta_target = kPi * rng.uniform(0.35, 0.65);
        PotentialField phi = random_trig_potential(g, rng, 0.01);
        // The spectral Hessian amplifies each mode by pi^2 |freq|^2, so halve
        // the potential until even the unit background stays safely positive
        // (which keeps chi_phi positive and the pointwise phases in (0, pi)).
        for (int tries = 0; tries < 12; ++tries) {
            const RelativeSpectrumField probe =
                relative_spectrum_field(chi_from_potential(id, phi), id);
            const double low =
                *std::min_element(probe.data.begin(), probe.data.end());
            if (low >= 0.3) break;
            for (std::size_t p = 0; p < phi.size(); ++p) phi[p] *= 0.5;
        }
        const PotentialField psi = random_trig_potential(g, rng, 0.05);
        const double step = 1e-3;

        // Monge-Ampere primitive: derivative pairs psi with the top density.
        const FormField chi_phi = chi_from_potential(chi, phi);
        const PotentialField top = wedge_ratio(chi_phi, id, 2);
        const double d_i = integrate(psi, top);
        const double fd_i = (ma_energy(chi, axpy(phi, step, psi)) -
                             ma_energy(chi, axpy(phi, -step, psi))) /
                            (2.0 * step);

        // Path energy of the gMA flow: derivative pairs psi with the
        // residual density  c_1 S_1 / binom + c_0 - S_n.
        PotentialField residual = wedge_ratio(chi_phi, id, 1);
        {
            const PotentialField sn = wedge_ratio(chi_phi, id, 2);
            for (std::size_t p = 0; p < residual.size(); ++p)
                residual[p] = coeffs.c(1) * residual[p] + coeffs.c0() - sn[p];
        }
        const double d_j = integrate(psi, residual);
        const double fd_j =
            (gma_j_energy(chi, id, coeffs, axpy(phi, step, psi)) -
             gma_j_energy(chi, id, coeffs, axpy(phi, -step, psi))) /
            (2.0 * step);

        // Phase path energy: derivative pairs psi with Im(e^{-i theta} Prod).
        const FormField alpha_phi = chi_from_potential(id, phi);
        const RelativeSpectrumField rsf = relative_spectrum_field(alpha_phi, id);
        PotentialField phase_density(g);
        for (std::size_t p = 0; p < phase_density.size(); ++p) {
            const std::span<const double> v = rsf.at(p);
            const ComplexSlope s =
                complex_slope(Spectrum(std::vector<double>(v.begin(), v.end())));
            phase_density[p] =
                s.im * std::cos(theta_target) - s.re * std::sin(theta_target);
        }
        const double d_h = integrate(psi, phase_density);
        const double fd_h =
            (dhym_j_energy(id, id, theta_target, axpy(phi, step, psi)) -
             dhym_j_energy(id, id, theta_target, axpy(phi, -step, psi))) /
            (2.0 * step);

        const struct {
            const char* name;
            double analytic;
            double fd;
        } rows[] = {{"ma-primitive", d_i, fd_i},
                    {"gma-path", d_j, fd_j},
                    {"phase-path", d_h, fd_h}};
        for (const auto& row : rows) {
            const bool ok = camp.check(rel_gap(row.analytic, row.fd), [&] {
                std::ostringstream os;
                os << "sample=" << i << " energy=" << row.name << " "
                   << fmt_num("analytic", row.analytic) << " "
                   << fmt_num("centralDifference", row.fd);
                return os.str();
            });
            if (!ok) return camp.report;
        }
    }
    return camp.report;
}

// ---------------------------------------------------------------------------
// Deliberately broken fixture: a negative lower-order coefficient reverses
// the monotonicity of the ratio, so the campaign must report a violation.
// Exercises the witness serialization and the violation exit path end to
// end.  The raw enumeration is used directly because the validated
// coefficient type (correctly) refuses negative entries.
// ---------------------------------------------------------------------------

PropertyReport suite_fixture_negative_c1(int /*samples*/, std::uint64_t /*seed*/) {
    Campaign camp("fixture-negative-c1", 1);
    const double c1 = -1.0;
    const auto raw_p1 = [&](std::span<const double> lam) {
        double best = -std::numeric_limits<double>::infinity();
        detail::for_each_subset(2, 1, [&](std::uint32_t mask) {
            const std::vector<double> rest = detail::complement_entries(lam, mask);
            best = std::max(best, c1 / (static_cast<double>(binomial(2, 1)) * rest[0]));
        });
        return best;
    };
    const std::vector<double> la{2.0, 2.0};
    const std::vector<double> lb{1.0, 1.0};
    const double fa = raw_p1(la);
    const double fb = raw_p1(lb);
    camp.check(fb + kSlack - fa, [&] {
        std::ostringstream os;
        os << "ordered pair with c1=-1: " << fmt_values("lambdaA", la) << " "
           << fmt_values("lambdaB", lb) << " " << fmt_num("fA", fa) << " "
           << fmt_num("fB", fb) << " (monotonicity reversed)";
        return os.str();
    });
    return camp.report;
}

// ---------------------------------------------------------------------------
// Registry.
// ---------------------------------------------------------------------------

using SuiteFn = PropertyReport (*)(int, std::uint64_t);

const std::map<std::string, SuiteFn>& registry() {
    static const std::map<std::string, SuiteFn> table = {
        {"gma-monotonicity", suite_gma_monotonicity},
        {"gma-convexity", suite_gma_convexity},
        {"gma-sublevel", suite_gma_sublevel},
        {"p-level-nesting", suite_p_level_nesting},
        {"tp-equivalence", suite_tp_equivalence},
        {"dhym-monotonicity", suite_dhym_monotonicity},
        {"dhym-convexity", suite_dhym_convexity},
        {"dhym-closure", suite_dhym_closure},
        {"ky-fan", suite_ky_fan},
        {"phase-slope", suite_phase_slope},
        {"newton-maclaurin", suite_newton_maclaurin},
        {"mass-bound", suite_mass_bound},
        {"mollifier-stability", suite_mollifier_stability},
        {"energy-derivatives", suite_energy_derivatives},
        {"fixture-negative-c1", suite_fixture_negative_c1},
    };
    return table;
}

} // namespace

std::vector<std::string> property_suite_names() {
    std::vector<std::string> names;
    names.reserve(registry().size());
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

bool has_property_suite(const std::string& name) {
    return registry().count(name) != 0;
}

PropertyReport run_property_suite(const std::string& name, int samples,
                                  std::uint64_t seed) {
    const auto it = registry().find(name);
    if (it == registry().end())
        throw std::out_of_range("run_property_suite: unknown suite id: " + name);
    if (samples < 1)
        throw std::domain_error("run_property_suite: samples must be >= 1");
    return it->second(samples, seed);
}

} // namespace gmalab
