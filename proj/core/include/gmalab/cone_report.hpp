#pragma once

#include <optional>
#include <vector>

namespace gmalab {

// Result of a cone membership query or a sampling probe.  `margin` is the
// signed distance-like quantity defined by each cone (minimum of the
// defining inequalities); membership means margin >= 0 up to the closure
// tolerance used by the individual cone tests (1e-12).  On failure,
// `witness` carries the eigenvalue vector at which the violation occurred
// (for probes, the first violating sample).
struct ConeReport {
    bool is_member = false;
    double margin = 0.0;
    std::optional<std::vector<double>> witness;
};

} // namespace gmalab
