#include "gmalab/dhym.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace gmalab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPhaseGuard = 1e-12; // no cotangent this close to a pole
constexpr double kClosureTol = 1e-12;

// cot(phase) as cos/sin, refusing to evaluate within kPhaseGuard of a
// multiple of pi where the value is unbounded.
double cot_checked(double phase) {
    if (std::abs(std::remainder(phase, kPi)) < kPhaseGuard)
        throw PhaseSingularity("cotangent evaluated at a phase pole");
    return std::cos(phase) / std::sin(phase);
}

} // namespace

DhymPhaseSpec::DhymPhaseSpec(double theta_, double Theta_, double c0_floor_)
    : theta(theta_), Theta(Theta_), c0_floor(c0_floor_) {
    if (!(theta > 0.0) || !(theta <= Theta) || !(Theta < kPi))
        throw std::domain_error(
            "DhymPhaseSpec: need 0 < theta <= Theta < pi");
    if (c0_floor < 0.0)
        throw std::domain_error("DhymPhaseSpec: c0_floor must be >= 0");
}

double arccot(double x) { return kPi / 2.0 - std::atan(x); }

double lagrangian_phase(const Spectrum& lambda) {
    double acc = 0.0;
    for (double x : lambda.values()) acc += arccot(x);
    return acc;
}

double truncated_phase(const Spectrum& lambda, int ell) {
    const int n = lambda.n();
    if (ell < 1 || ell > n - 1)
        throw std::domain_error("truncated_phase: ell out of range");
    // Entries are stored ascending and arccot is decreasing, so the maximal
    // remaining sum keeps the first n - ell entries.
    double acc = 0.0;
    for (int i = 0; i < n - ell; ++i) acc += arccot(lambda[i]);
    return acc;
}

ComplexSlope complex_slope(const Spectrum& lambda) {
    std::complex<double> prod(1.0, 0.0);
    for (double x : lambda.values()) prod *= std::complex<double>(x, 1.0);
    return ComplexSlope{prod.real(), prod.imag()};
}

double dhym_p(const Spectrum& lambda, int ell) {
    return -cot_checked(truncated_phase(lambda, ell));
}

double dhym_q(const Spectrum& lambda, double c0_value) {
    const ComplexSlope slope = complex_slope(lambda);
    if (std::abs(slope.im) < 1e-14)
        throw PhaseSingularity("dhym_q: slope product has vanishing imaginary part");
    return -cot_checked(lagrangian_phase(lambda)) + c0_value / slope.im;
}

ConeReport gamma_theta_membership(const Spectrum& lambda,
                                  const DhymPhaseSpec& spec, bool closed) {
    const double total = lagrangian_phase(lambda);
    double margin = std::min(spec.Theta - total, total);
    if (lambda.n() > 1) {
        const double truncated = truncated_phase(lambda, 1);
        margin = std::min({margin, spec.theta - truncated, truncated});
    }
    const bool member = closed ? (margin >= -kClosureTol) : (margin > 0.0);
    ConeReport report{member, margin, std::nullopt};
    if (!member) report.witness = lambda.values();
    return report;
}

Spectrum sample_gamma_theta(const DhymPhaseSpec& spec, int n,
                            RandomStream& rng) {
    if (n < 1) throw std::domain_error("sample_gamma_theta: n must be >= 1");
    // Draw candidate phases phi_i ~ U(0, Theta); the image point
    // lambda_i = cot(phi_i) has theta(lambda) = sum phi_i and truncated
    // phase sum phi_i - min phi_i, so both cone conditions are linear in
    // the phases and cheap to test before mapping back.
    constexpr long kMaxAttempts = 100000000L;
    std::vector<double> phi(static_cast<std::size_t>(n));
    for (long attempt = 0; attempt < kMaxAttempts; ++attempt) {
        double total = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        for (double& p : phi) {
            p = rng.uniform(1e-9, spec.Theta);
            total += p;
            lo = std::min(lo, p);
        }
        if (total > spec.Theta) continue;
        if (n > 1 && total - lo > spec.theta) continue;
        std::vector<double> lambda(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i)
            lambda[i] = std::cos(phi[i]) / std::sin(phi[i]);
        return Spectrum(std::move(lambda));
    }
    throw std::runtime_error(
        "sample_gamma_theta: acceptance rate too low for the requested window");
}

double im_lower_bound_probe(const DhymPhaseSpec& spec, int n, int samples,
                            std::uint64_t seed) {
    if (samples < 1)
        throw std::domain_error("im_lower_bound_probe: samples must be >= 1");
    double lowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        RandomStream rng =
            RandomStream::for_sample(seed, static_cast<std::uint64_t>(i));
        const Spectrum lambda = sample_gamma_theta(spec, n, rng);
        lowest = std::min(lowest, complex_slope(lambda).im);
    }
    return lowest;
}

} // namespace gmalab
