#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gmalab/energy.hpp"
#include "gmalab/gma.hpp"
#include "gmalab/spectra.hpp"
#include "gmalab/torus.hpp"

namespace gmalab {

enum class FlowKind { gma, perturbed_gma, dhym };

// Time-discretization parameters.  Samples are taken on the uniform grid
// t_k = k * sample_stride * dt0; the adaptive dt stays within
// [dt_min, dt0] and is clipped so accepted steps land exactly on sample
// times.
struct FlowTime {
    double dt0 = 1e-3;
    double dt_min = 1e-9;
    double t_max = 1.0;
    double residual_target = 1e-6;
    int sample_stride = 10;
    double step_tol = 1e-8; // step-doubling local error tolerance
};

// Safety rails checked on every right-hand-side evaluation inside a step:
// the minimum relative eigenvalue must stay above delta_pos (positivity
// flows) and the pointwise phase inside (phase_margin, pi - phase_margin)
// (phase flow).  A violation halves dt and retries instead of propagating.
struct FlowGuards {
    double delta_pos = 1e-6;
    double phase_margin = 1e-4;
};

// The full problem statement for one flow run.
struct FlowProblem {
    FlowKind kind = FlowKind::gma;
    HermitianMatrix background; // chi (positivity flows) or alpha (phase flow)
    HermitianMatrix omega;
    std::optional<GmaCoefficients> coeffs; // required for the gma kinds
    double epsilon = 0.0;                  // perturbed flow strength
    double theta_star = 0.0;               // phase flow target
    PotentialField initial;
    // Optional spatially varying constant term replacing coeffs.c0() in the
    // positivity-flow right-hand sides.  For n = 1 the fixed-point equation
    // chi + i_ddbar(phi) = c0(x) * omega is linear, which the tests use to
    // cross-validate the flow against the direct spectral solve.
    std::optional<PotentialField> c0_field;
};

struct FlowState {
    double t = 0.0;
    PotentialField phi;
    double dt = 0.0;
};

// One sampled diagnostics row; columns match the CSV export.
struct SampleRow {
    double t = 0.0;
    double res_l2 = 0.0;
    double res_inf = 0.0;
    double sup_abs_phidot = 0.0;
    double energy_I = 0.0;
    double energy_J = 0.0;
    double min_eig = 0.0;
    double theta_min = 0.0;
    double theta_max = 0.0;
    double dt = 0.0;
};

enum class StopReason { converged, t_max_reached, diverged };

struct RunRecord {
    std::vector<SampleRow> rows;
    StopReason status = StopReason::t_max_reached;
    PotentialField final_phi;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    // True when the configured c0 does not match the value forced by the
    // total-mass constraint; energy_I conservation is not expected then.
    bool mass_mismatched = false;
};

// Right-hand sides (the time derivative of the potential), pointwise over
// the grid.  All three throw DegenerateField / PhaseSingularity when the
// state has left the admissible region outright.
//
//   gma:        1 - (sum_k c_k S_k(lambda)/binom + c_0) / S_n(lambda)
//   perturbed:  1 + a_eps - same ratio - eps / S_n(lambda),
//               a_eps = eps * vol(omega)/vol(chi) recomputed from the
//               backgrounds; eps = 0 reproduces the gma values bitwise
//   dhym:       cot(theta(lambda)) - cot(theta_star)
PotentialField gma_rhs(const PotentialField& phi, const HermitianMatrix& chi,
                       const HermitianMatrix& omega,
                       const GmaCoefficients& coeffs);
PotentialField perturbed_gma_rhs(const PotentialField& phi,
                                 const HermitianMatrix& chi,
                                 const HermitianMatrix& omega,
                                 const GmaCoefficients& coeffs, double epsilon);
PotentialField dhym_rhs(const PotentialField& phi, const HermitianMatrix& alpha,
                        const HermitianMatrix& omega, double theta_star);

// One adaptive step: classical RK4 advanced by two half steps, with the
// full-step result used only for the step-doubling error estimate.  Guard
// violations halve dt and retry; when dt would fall below dt_min the
// returned state is unchanged and `diverged` is set.
struct StepOutcome {
    FlowState state;
    bool diverged = false;
};
StepOutcome step(const FlowState& state, const FlowProblem& problem,
                 const FlowTime& time, const FlowGuards& guards = {});

// Integrates the flow until the sampled residual stays at or below
// residual_target for five consecutive samples (converged), t reaches t_max,
// or the stepper gives up (diverged).  Rows are sampled on the uniform grid
// described by FlowTime, starting at t = 0.
RunRecord run(const FlowProblem& problem, const FlowTime& time,
              const FlowGuards& guards = {}, std::uint64_t seed = 0);

// Deformation schedule for the boundary emulation: index i runs the flow for
//   chi_i = chi + chi_shift[i] * omega,
//   omega_i = omega + omega_shift[i] * identity,
//   c_{k,i} = c_k + coeff_shift[i]  (k >= 1),
// with c_{0,i} forced by the total-mass constraint.  All three sequences
// must be nonnegative and nonincreasing.
struct SweepSchedule {
    std::vector<double> chi_shift;
    std::vector<double> coeff_shift;
    std::vector<double> omega_shift;
};

// First subtorus positivity failure in a schedule: index i, dimension p and
// eigenvalue subset mask of the offending margin.  p = 0 flags an
// inadmissible forced constant term instead.
struct ScheduleViolation {
    int index = 0;
    int p = 0;
    std::uint32_t mask = 0;
    double margin = 0.0;
};

struct SweepIndexResult {
    int index = 0;
    double chi_shift = 0.0;
    double coeff_shift = 0.0;
    double omega_shift = 0.0;
    double forced_c0 = 0.0;
    double min_proper_margin = 0.0;
    RunRecord record;
    PotentialField psi; // sup-normalized limit
};

struct SweepReport {
    std::vector<SweepIndexResult> indices;
    std::vector<double> l1_gaps; // d_i = |psi_{i+1} - psi_i|_{L1}
    std::optional<ScheduleViolation> violation;
};

// Runs the deformation schedule with warm starts: each index checks the
// forced constant term and the strict subtorus positivity margins first
// (stopping with `violation` on failure), then integrates the flow from the
// previous index's normalized limit over the same fixed time window.
SweepReport boundary_sweep(const FlowProblem& base, const FlowTime& time,
                           const SweepSchedule& schedule,
                           const FlowGuards& guards = {},
                           std::uint64_t seed = 0);

} // namespace gmalab
