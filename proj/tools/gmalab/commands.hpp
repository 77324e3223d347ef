#pragma once

#include <cstdint>
#include <string>

namespace gmalab::cli {

// Exit codes shared by every subcommand:
//   0  success (and, for props, zero violations)
//   1  a property violation was found; the first witness is serialized
//   2  malformed input: bad flag values, schema failure, unknown suite
//   3  a flow stopped at t_max without reaching the residual target
//   4  a flow diverged or left the admissible region
//   5  a sweep index failed the feasibility check
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitTMax = 3;
inline constexpr int kExitDiverged = 4;
inline constexpr int kExitInfeasible = 5;

// `op`: evaluate every operator value attached to one eigenvalue list.
struct OpArgs {
    std::string lambda;        // comma-separated eigenvalues (required)
    bool sym = false;          // emit the elementary symmetric values S_0..S_n
    bool gma = false;          // emit P^l, Q, cone data (needs --c for n >= 2)
    bool dhym = false;         // emit phases, slope, window data
    std::string c;             // comma-separated c_1..c_{n-1}
    double c0 = 0.0;
    double c0_floor = 0.0;
    double theta = 0.0;        // phase window (0 < theta <= Theta < pi);
    double Theta = 0.0;        // both zero = no window requested
};
int cmd_op(const OpArgs& args);

// `cone`: membership queries against the closed positivity cone or the
// phase window cone, plus the randomized monotonicity/convexity probe.
struct ConeArgs {
    bool gma = false;
    bool dhym = false;
    std::string lambda;        // membership mode: point to test
    std::string c;             // gMA coefficients c_1..c_{n-1}
    double c0 = 0.0;
    double c0_floor = 0.0;
    double theta = 0.0;        // dHYM window bounds
    double Theta = 0.0;
    bool open_cone = false;    // test the open window instead of its closure
    std::string probe;         // "P" or "Q": run the randomized probe instead
    int dimension = 2;         // probe: spectrum size
    int ell = 1;               // probe: level of P^l
    int samples = 1000;        // probe: sample count
    std::uint64_t seed = 0;    // probe: RNG seed
};
int cmd_cone(const ConeArgs& args);

// `flow`: run one configured flow; `sweep`: run a deformation schedule.
int cmd_flow(const std::string& config_path);
int cmd_sweep(const std::string& config_path);

// `props`: run one registered property suite.
int cmd_props(const std::string& suite, int samples, std::uint64_t seed);

// `intersect`: constant-background feasibility report.  Matrices are typed
// inline: rows split on ';', entries on ',', complex entries as "re:im".
struct IntersectArgs {
    std::string chi;           // required
    std::string omega;         // empty = identity of matching size
    std::string c;             // c_1..c_{n-1}
    double c0_floor = 0.0;
    bool pencil = false;       // allow non-commuting backgrounds
};
int cmd_intersect(const IntersectArgs& args);

} // namespace gmalab::cli
