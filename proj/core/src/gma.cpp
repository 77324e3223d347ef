#include "gmalab/gma.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "gmalab/rng.hpp"

namespace gmalab {

namespace {

constexpr double kClosureTol = 1e-12;

} // namespace

GmaCoefficients::GmaCoefficients(int n, std::vector<double> lower, double c0,
                                 double c0_floor)
    : n_(n), lower_(std::move(lower)), c0_(c0), c0_floor_(c0_floor) {
    if (n_ < 1) throw std::domain_error("GmaCoefficients: n must be >= 1");
    if (static_cast<int>(lower_.size()) != n_ - 1)
        throw std::domain_error(
            "GmaCoefficients: expected n-1 lower-order coefficients");
    if (c0_floor_ < 0.0)
        throw std::domain_error("GmaCoefficients: c0_floor must be >= 0");
    pure_top_ = true;
    for (double ck : lower_) {
        if (!std::isfinite(ck) || ck < 0.0)
            throw std::domain_error(
                "GmaCoefficients: lower-order coefficients must be finite and >= 0");
        if (ck > 0.0) pure_top_ = false;
    }
    if (!std::isfinite(c0_))
        throw std::domain_error("GmaCoefficients: c0 must be finite");
    if (pure_top_) {
        if (c0_ <= 0.0)
            throw std::domain_error(
                "GmaCoefficients: c0 must be > 0 when all lower coefficients vanish");
    } else if (c0_ < -c0_floor_) {
        throw std::domain_error("GmaCoefficients: c0 below admissible floor");
    }
}

double gma_p(const Spectrum& lambda, const GmaCoefficients& coeffs, int ell) {
    const int n = lambda.n();
    if (coeffs.n() != n)
        throw std::domain_error("gma_p: coefficient/spectrum dimension mismatch");
    if (ell < 1 || ell > n - 1) throw std::domain_error("gma_p: ell out of range");
    if (coeffs.pure_top_degree()) return 0.0;

    const std::span<const double> values = lambda.values();
    bool any_nonzero_denominator = false;
    double best = -std::numeric_limits<double>::infinity();
    detail::for_each_subset(n, ell, [&](std::uint32_t mask) {
        const std::vector<double> rest =
            detail::complement_entries(values, mask);
        const std::vector<double> table =
            elementary_symmetric_all(std::span<const double>(rest), n - ell);
        const double denom = table[static_cast<std::size_t>(n - ell)];
        double numer = 0.0;
        for (int k = std::max(1, ell); k <= n - 1; ++k) {
            numer += coeffs.c(k) * table[static_cast<std::size_t>(k - ell)] /
                     static_cast<double>(binomial(n, k));
        }
        if (denom == 0.0) {
            if (numer != 0.0)
                best = std::numeric_limits<double>::infinity();
        } else {
            any_nonzero_denominator = true;
            best = std::max(best, numer / denom);
        }
    });
    if (!any_nonzero_denominator)
        throw DegenerateSpectrum("gma_p: all denominators vanish");
    return best;
}

double gma_q(const Spectrum& lambda, const GmaCoefficients& coeffs,
             double c0_at_point) {
    const int n = lambda.n();
    if (coeffs.n() != n)
        throw std::domain_error("gma_q: coefficient/spectrum dimension mismatch");
    const std::vector<double> table =
        elementary_symmetric_all(std::span<const double>(lambda.values()), n);
    const double sn = table[static_cast<std::size_t>(n)];
    if (sn <= 0.0)
        throw DegenerateSpectrum("gma_q: top symmetric function is not positive");
    double numer = c0_at_point;
    for (int k = 1; k <= n - 1; ++k) {
        numer += coeffs.c(k) * table[static_cast<std::size_t>(k)] /
                 static_cast<double>(binomial(n, k));
    }
    return numer / sn;
}

double gma_q(const Spectrum& lambda, const GmaCoefficients& coeffs) {
    return gma_q(lambda, coeffs, coeffs.c0());
}

ConeReport gamma_bar_membership(const Spectrum& lambda,
                                const GmaCoefficients& coeffs) {
    double p1;
    if (coeffs.n() == 1) {
        p1 = 0.0; // no lower-order terms exist in one variable
    } else {
        try {
            p1 = gma_p(lambda, coeffs, 1);
        } catch (const DegenerateSpectrum&) {
            return ConeReport{false, -std::numeric_limits<double>::infinity(),
                              lambda.values()};
        }
    }
    const double margin = std::min(lambda.min(), 1.0 - p1);
    const bool member = margin >= -kClosureTol;
    ConeReport report{member, margin, std::nullopt};
    if (!member) report.witness = lambda.values();
    return report;
}

std::vector<SubsetValue> tp_subset_coefficients(const Spectrum& lambda,
                                                const GmaCoefficients& coeffs,
                                                int p) {
    const int n = lambda.n();
    if (coeffs.n() != n)
        throw std::domain_error(
            "tp_subset_coefficients: coefficient/spectrum dimension mismatch");
    const auto raw = tp_subset_values(
        std::span<const double>(lambda.values()),
        std::span<const double>(coeffs.lower()), coeffs.c0(), p);
    std::vector<SubsetValue> out;
    out.reserve(raw.size());
    for (const auto& [mask, value] : raw) out.push_back(SubsetValue{mask, value});
    return out;
}

bool tp_positive(const Spectrum& lambda, const GmaCoefficients& coeffs, int p,
                 double tol) {
    for (const SubsetValue& sv : tp_subset_coefficients(lambda, coeffs, p)) {
        if (sv.value < -tol) return false;
    }
    return true;
}

double c_subsolution_margin(const Spectrum& lambda,
                            const GmaCoefficients& coeffs) {
    if (coeffs.pure_top_degree() || coeffs.n() == 1) return 1.0;
    return 1.0 - gma_p(lambda, coeffs, 1);
}

double mass_lower_bound(const GmaCoefficients& coeffs) {
    const int n = coeffs.n();
    if (coeffs.pure_top_degree()) return coeffs.c0();

    // Fixed point of g(x) = sum_k c_k x^{(k-1)/(n-1)} / binom(n,k).  g is
    // concave increasing with g(0) >= 0, so g(x) - x has a unique positive
    // root; bracket it and bisect.
    const auto g = [&](double x) {
        double acc = 0.0;
        for (int k = 1; k <= n - 1; ++k) {
            const double expo =
                static_cast<double>(k - 1) / static_cast<double>(n - 1);
            acc += coeffs.c(k) * std::pow(x, expo) /
                   static_cast<double>(binomial(n, k));
        }
        return acc;
    };
    // g(0) = c_1/n; when c_1 = 0 the origin itself is a (spurious) fixed
    // point, so start the bracket just above it.
    double lo = (coeffs.c(1) > 0.0) ? 0.0 : 1e-30;
    double hi = 1.0;
    while (g(hi) >= hi) {
        hi *= 2.0;
        if (!std::isfinite(hi))
            throw std::domain_error("mass_lower_bound: fixed point diverged");
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= mid)
            lo = mid;
        else
            hi = mid;
    }
    const double xstar = 0.5 * (lo + hi);
    return std::pow(xstar, static_cast<double>(n) / static_cast<double>(n - 1)) /
           static_cast<double>(n);
}

namespace {

// Random positive-semidefinite matrix G* G with N(0,1) complex entries,
// scaled so the expected eigenvalue size is O(scale).
Eigen::MatrixXcd random_psd(RandomStream& rng, int n, double scale) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    return (g.adjoint() * g) * (scale / static_cast<double>(n));
}

} // namespace

ConeReport convexity_monotonicity_probe(GmaProbeOperator op, int ell,
                                        const GmaCoefficients& coeffs,
                                        int samples, std::uint64_t seed) {
    const int n = coeffs.n();
    if (op == GmaProbeOperator::p_ell && (ell < 1 || ell > n - 1))
        throw std::domain_error(
            "convexity_monotonicity_probe: ell out of range for P^ell");
    if (samples < 1)
        throw std::domain_error("convexity_monotonicity_probe: samples must be >= 1");
    constexpr double kSlack = 1e-9;

    // One well-conditioned background metric per campaign, drawn from the
    // seed so the whole run is reproducible.
    RandomStream metric_stream = RandomStream::for_sample(seed, 0);
    const HermitianMatrix omega = HermitianMatrix::from_matrix(
        Eigen::MatrixXcd::Identity(n, n) + random_psd(metric_stream, n, 0.5));

    const auto evaluate = [&](const Eigen::MatrixXcd& m) {
        const Spectrum lam =
            relative_eigenvalues(HermitianMatrix::from_matrix(m), omega);
        return (op == GmaProbeOperator::q) ? gma_q(lam, coeffs)
                                           : gma_p(lam, coeffs, ell);
    };

    ConeReport report{true, std::numeric_limits<double>::infinity(),
                      std::nullopt};
    for (int i = 0; i < samples; ++i) {
        RandomStream rng = RandomStream::for_sample(seed, static_cast<std::uint64_t>(i) + 1);
        Eigen::MatrixXcd b = random_psd(rng, n, 1.0);
        if (op == GmaProbeOperator::q && !coeffs.pure_top_degree() && n >= 2) {
            // Push the lower endpoint into the closed admissible cone:
            // every term of P^1 decays at least as fast as 1/t under
            // lambda -> t*lambda (t >= 1), so scaling by a factor above
            // P^1 lands inside, and the cone is upward closed so the
            // larger endpoint follows automatically.
            const Spectrum lam =
                relative_eigenvalues(HermitianMatrix::from_matrix(b), omega);
            const double p1 = gma_p(lam, coeffs, 1);
            if (p1 > 1.0) b *= 1.01 * p1;
        }
        const Eigen::MatrixXcd a = b + random_psd(rng, n, 0.5);
        const Eigen::MatrixXcd mid = 0.5 * (a + b);

        const double fa = evaluate(a);
        const double fb = evaluate(b);
        const double fm = evaluate(mid);

        const double slack = std::min({fb + kSlack - fa,
                                       0.5 * (fa + fb) + kSlack - fm,
                                       std::max(fa, fb) + kSlack - fm});
        report.margin = std::min(report.margin, slack);
        if (slack < 0.0) {
            report.is_member = false;
            std::vector<double> witness =
                relative_eigenvalues(HermitianMatrix::from_matrix(a), omega)
                    .values();
            const std::vector<double> wb =
                relative_eigenvalues(HermitianMatrix::from_matrix(b), omega)
                    .values();
            witness.insert(witness.end(), wb.begin(), wb.end());
            report.witness = std::move(witness);
            break;
        }
    }
    return report;
}

} // namespace gmalab
