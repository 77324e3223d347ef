#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gmalab {

// Outcome of one seeded sampling campaign over a structural property of the
// operators (monotonicity, convexity, cone closure, majorization, exact
// equivalences, energy derivatives, ...).
struct PropertyReport {
    std::string suite;         // registered campaign id
    int samples = 0;           // draws actually performed
    int violations = 0;        // campaigns stop at the first failure, so 0 or 1
    double worst_margin = 0.0; // smallest slack observed; >= 0 iff clean
    std::string witness;       // serialized first violation, empty when clean
};

// Sorted ids of every registered campaign.
//
// The campaigns cover: the order/convexity/sublevel structure of the gMA
// ratios P^ell and Q, the nesting of the P^ell sublevel sets, the exact
// rational equivalence between subtorus positivity and P^{n-p} <= 1, phase
// monotonicity, convexity and closure of the phase cones, the Ky-Fan
// eigenvalue majorization, the slope/phase cotangent identity, the
// Newton-Maclaurin chain, the solution mass lower bound, stability of
// pointwise subsolutions under mollification, directional derivatives of
// the energy functionals, and one deliberately broken fixture (a negative
// lower-order coefficient) that exercises the violation-reporting path.
std::vector<std::string> property_suite_names();

// True when `name` names a registered campaign.
bool has_property_suite(const std::string& name);

// Runs campaign `name` with `samples` draws rooted at `seed`.  Results are
// deterministic in (name, samples, seed) and independent of evaluation
// order.  Throws std::out_of_range for an unknown id and std::domain_error
// for samples < 1.
PropertyReport run_property_suite(const std::string& name, int samples,
                                  std::uint64_t seed);

} // namespace gmalab
