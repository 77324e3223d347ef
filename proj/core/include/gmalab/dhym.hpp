#pragma once

#include <cstdint>
#include <stdexcept>

#include "gmalab/cone_report.hpp"
#include "gmalab/errors.hpp"
#include "gmalab/rng.hpp"
#include "gmalab/spectra.hpp"

namespace gmalab {

// Target phase window for the supercritical deformed equation.  The window
// must sit strictly inside (0, pi); c0_floor widens the admissible range of
// the constant term in sublevel-set probes (default 0: nonnegative only).
struct DhymPhaseSpec {
    double theta;
    double Theta;
    double c0_floor = 0.0;

    DhymPhaseSpec(double theta_, double Theta_, double c0_floor_ = 0.0);
};

// Real and imaginary parts of the slope product Prod_j (lambda_j + i).
struct ComplexSlope {
    double re = 0.0;
    double im = 0.0;
};

// arccot on the branch (0, pi), i.e. pi/2 - arctan.
double arccot(double x);

// theta(lambda) = sum_i arccot(lambda_i), valued in (0, n*pi).
double lagrangian_phase(const Spectrum& lambda);

// Largest arccot sum over all (n - ell)-element index sets; since arccot is
// decreasing this is the arccot sum of the n - ell smallest eigenvalues.
// Requires 1 <= ell <= n-1.
double truncated_phase(const Spectrum& lambda, int ell);

// Prod_j (lambda_j + i), accumulated by complex multiplication.  Its
// argument agrees with lagrangian_phase modulo 2*pi.
ComplexSlope complex_slope(const Spectrum& lambda);

// -cot(truncated_phase(lambda, ell)).  Throws PhaseSingularity when the
// truncated phase is within 1e-12 of 0 or pi, where the cotangent blows up.
double dhym_p(const Spectrum& lambda, int ell);

// -cot(theta(lambda)) + c0 / Im Prod(lambda_j + i).  Throws PhaseSingularity
// when theta(lambda) is within 1e-12 of a multiple of pi or |Im| < 1e-14.
double dhym_q(const Spectrum& lambda, double c0_value);

// Membership in the phase cone
//   { 0 < truncated_phase < theta,  0 < theta(lambda) < Theta }
// (strict for the open cone; tolerance 1e-12 on the closure), with
//   margin = min(theta - truncated, Theta - theta(lambda), truncated,
//                theta(lambda)).
// In one variable there is no truncation and only the total-phase
// constraints remain.
ConeReport gamma_theta_membership(const Spectrum& lambda,
                                  const DhymPhaseSpec& spec, bool closed);

// One rejection-sampled member of the closed phase cone: phases phi_i are
// drawn uniformly and accepted when both cone conditions hold, then mapped
// back through lambda_i = cot(phi_i).  Throws std::runtime_error if the
// acceptance rate collapses (phase window too tight).
Spectrum sample_gamma_theta(const DhymPhaseSpec& spec, int n,
                            RandomStream& rng);

// Empirical minimum of Im Prod(lambda_j + i) over `samples` seeded draws
// from the closed phase cone.  Strictly positive in exact arithmetic; the
// returned value is an estimate of the cone-wide lower bound, not a
// certificate.
double im_lower_bound_probe(const DhymPhaseSpec& spec, int n, int samples,
                            std::uint64_t seed);

} // namespace gmalab
