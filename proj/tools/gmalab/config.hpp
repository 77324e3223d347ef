#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gmalab/flows.hpp"

namespace gmalab::cli {

// Raised for any structural problem in a run configuration file: parse
// failure, unknown key, wrong type, missing section, or a value outside its
// documented range.  The driver maps it to exit code 2.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A fully validated run configuration.
//
// File layout (strict: unknown keys are rejected at every level):
//
//   {
//     "problem":    "gMA" | "dHYM",
//     "dimension":  1 | 2 | 3,
//     "grid_N":     even integer >= 8,
//     "backgrounds": {
//       "chi":   [[...]],   // gMA;  n x n, entries are numbers or [re, im]
//       "alpha": [[...]],   // dHYM; same shape
//       "omega": [[...]]
//     },
//     "coefficients": {                    // gMA only
//       "lower":    [c_1, ..., c_{n-1}],
//       "c0":       number,               // optional, default 0
//       "c0_floor": number >= 0,          // optional, default 0
//       "force_c0": bool,                 // optional: use the mass-forced value
//       "c0_field": field-spec            // optional spatially varying term
//     },
//     "phases": { "theta_star": number in (0, pi) },   // dHYM only
//     "flow": {                            // optional, defaults shown in --help
//       "epsilon":  number >= 0,           // gMA only; > 0 selects the
//                                          // perturbed flow
//       "dt0": ..., "dt_min": ..., "t_max": ..., "residual_target": ...,
//       "sample_stride": ..., "step_tol": ..., "delta_pos": ...,
//       "phase_margin": ...
//     },
//     "initial": field-spec,               // optional, default zero
//     "schedule": {                        // sweep command only
//       "chi_shift": [...], "coeff_shift": [...], "omega_shift": [...]
//     },
//     "seed": unsigned integer,            // optional, default 0
//     "output": {                          // optional
//       "csv": path, "summary": path, "final_field": path,   // flow
//       "directory": path                                    // sweep
//     }
//   }
//
// A field-spec is either {"file": "snapshot.gmlf"} (binary snapshot on the
// run's grid) or {"mean": m, "modes": [{"freq": [2n integers],
// "cos": a, "sin": b}, ...]} describing
//   m + sum_j (a_j cos(2 pi f_j . x) + b_j sin(2 pi f_j . x)).
struct RunConfig {
    nlohmann::json echo; // the parsed document, for the summary

    FlowProblem problem;
    FlowTime time;
    FlowGuards guards;
    std::uint64_t seed = 0;

    std::optional<SweepSchedule> schedule;

    std::optional<std::filesystem::path> out_csv;
    std::optional<std::filesystem::path> out_summary;
    std::optional<std::filesystem::path> out_final_field;
    std::optional<std::filesystem::path> out_directory;
};

// Parses and validates `path`.  Throws SchemaError on any malformed input.
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace gmalab::cli
