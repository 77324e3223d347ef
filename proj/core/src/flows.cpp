#include "gmalab/flows.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "gmalab/dhym.hpp"
#include "gmalab/errors.hpp"

namespace gmalab {

namespace {

constexpr double kPi = std::numbers::pi;

// Per-run constants: reduced backgrounds and the scalars entering the
// right-hand sides.
struct FlowContext {
    const FlowProblem* problem = nullptr;
    int n = 0;
    std::size_t npts = 0;
    Eigen::MatrixXcd linv; // omega = L L^*, linv = L^{-1}
    Eigen::MatrixXcd a0;   // reduced background
    double a_eps = 0.0;
    double cot_theta_star = 0.0;
    double forced_c0 = 0.0; // value matching the total-mass constraint
};

bool is_gma(FlowKind kind) {
    return kind == FlowKind::gma || kind == FlowKind::perturbed_gma;
}

FlowContext make_context(const FlowProblem& problem) {
    const TorusGrid& g = problem.initial.grid();
    const int n = g.n;
    if (problem.background.n() != n || problem.omega.n() != n)
        throw std::invalid_argument("flow: background dimension does not match grid");
    FlowContext ctx;
    ctx.problem = &problem;
    ctx.n = n;
    ctx.npts = g.npoints();
    ctx.linv = pencil_reduction_factor(problem.omega);
    ctx.a0 = ctx.linv * problem.background.mat() * ctx.linv.adjoint();

    if (is_gma(problem.kind)) {
        if (!problem.coeffs.has_value())
            throw std::invalid_argument("flow: gma kinds require coefficients");
        if (problem.coeffs->n() != n)
            throw std::invalid_argument("flow: coefficient dimension mismatch");
        if (problem.epsilon < 0.0)
            throw std::invalid_argument("flow: epsilon must be >= 0");
        if (problem.c0_field.has_value() && !(problem.c0_field->grid() == g))
            throw std::invalid_argument("flow: c0 field grid mismatch");
        const Spectrum bg = relative_eigenvalues(problem.background, problem.omega);
        const std::vector<double> table = elementary_symmetric_all(
            std::span<const double>(bg.values()), n);
        const double sn = table[static_cast<std::size_t>(n)];
        if (!(sn > 0.0))
            throw std::invalid_argument("flow: background class volume is not positive");
        const double eps =
            (problem.kind == FlowKind::perturbed_gma) ? problem.epsilon : 0.0;
        ctx.a_eps = eps / sn;
        ctx.forced_c0 = sn;
        for (int k = 1; k <= n - 1; ++k)
            ctx.forced_c0 -= problem.coeffs->c(k) *
                             table[static_cast<std::size_t>(k)] /
                             static_cast<double>(binomial(n, k));
    } else {
        if (!(problem.theta_star > 0.0) || !(problem.theta_star < kPi))
            throw std::invalid_argument("flow: theta_star must lie in (0, pi)");
        if (problem.c0_field.has_value())
            throw std::invalid_argument("flow: c0 field applies to the positivity flows only");
        ctx.cot_theta_star =
            std::cos(problem.theta_star) / std::sin(problem.theta_star);
    }
    return ctx;
}

// One right-hand-side evaluation with the diagnostics the stepper and the
// sampler both need.  `admissible` is false when the state has left the
// domain of the operator outright (nonpositive eigenvalue for the
// positivity flows, phase outside (0, pi) for the phase flow); the rhs
// values are then meaningless.
struct EvalResult {
    bool admissible = true;
    double min_eig = std::numeric_limits<double>::infinity();
    double theta_min = std::numeric_limits<double>::infinity();
    double theta_max = -std::numeric_limits<double>::infinity();
};

EvalResult evaluate_rhs(const FlowContext& ctx, const std::vector<double>& phi,
                        std::vector<double>& rhs) {
    const FlowProblem& pb = *ctx.problem;
    const TorusGrid& g = pb.initial.grid();
    const int n = ctx.n;
    rhs.resize(ctx.npts);

    const FormField hess = i_ddbar(PotentialField(g, phi));
    EvalResult ev;
    Eigen::MatrixXcd h(n, n), tmp(n, n), scratch(n, n);
    double lambda[4];
    double ek[4]; // elementary symmetric prefix, n <= 3
    const double eps =
        (pb.kind == FlowKind::perturbed_gma) ? pb.epsilon : 0.0;
    for (std::size_t p = 0; p < ctx.npts; ++p) {
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) h(j, k) = hess.hess(p, j, k);
        tmp.noalias() = ctx.linv * h;
        scratch.noalias() = tmp * ctx.linv.adjoint();
        scratch += ctx.a0;
        relative_eigenvalues_inplace(scratch, lambda);
        ev.min_eig = std::min(ev.min_eig, lambda[0]);

        double phase = 0.0;
        for (int j = 0; j < n; ++j) phase += arccot(lambda[j]);
        ev.theta_min = std::min(ev.theta_min, phase);
        ev.theta_max = std::max(ev.theta_max, phase);

        if (is_gma(pb.kind)) {
            if (!(lambda[0] > 0.0)) {
                ev.admissible = false;
                return ev;
            }
            ek[0] = 1.0;
            for (int k = 1; k <= n; ++k) ek[k] = 0.0;
            for (int i = 0; i < n; ++i)
                for (int k = std::min(i + 1, n); k >= 1; --k)
                    ek[k] += lambda[i] * ek[k - 1];
            const double sn = ek[n];
            double numer =
                pb.c0_field.has_value() ? (*pb.c0_field)[p] : pb.coeffs->c0();
            for (int k = 1; k <= n - 1; ++k)
                numer += pb.coeffs->c(k) * ek[k] /
                         static_cast<double>(binomial(n, k));
            rhs[p] = 1.0 + ctx.a_eps - numer / sn - eps / sn;
        } else {
            if (!(phase > 0.0) || !(phase < kPi)) {
                ev.admissible = false;
                return ev;
            }
            rhs[p] = std::cos(phase) / std::sin(phase) - ctx.cot_theta_star;
        }
    }
    return ev;
}

bool guard_ok(const FlowContext& ctx, const EvalResult& ev,
              const FlowGuards& guards) {
    if (!ev.admissible) return false;
    if (is_gma(ctx.problem->kind)) return ev.min_eig > guards.delta_pos;
    return ev.theta_min > guards.phase_margin &&
           ev.theta_max < kPi - guards.phase_margin;
}

// Classical RK4 over dt from y into out with a precomputed first stage;
// false when a later stage leaves the guarded region.
bool rk4_attempt(const FlowContext& ctx, const FlowGuards& guards,
                 const std::vector<double>& y, double dt,
                 const std::vector<double>& k1, std::vector<double>& out) {
    const std::size_t m = y.size();
    std::vector<double> k2(m), k3(m), k4(m), stage(m);
    for (std::size_t i = 0; i < m; ++i) stage[i] = y[i] + 0.5 * dt * k1[i];
    if (!guard_ok(ctx, evaluate_rhs(ctx, stage, k2), guards)) return false;
    for (std::size_t i = 0; i < m; ++i) stage[i] = y[i] + 0.5 * dt * k2[i];
    if (!guard_ok(ctx, evaluate_rhs(ctx, stage, k3), guards)) return false;
    for (std::size_t i = 0; i < m; ++i) stage[i] = y[i] + dt * k3[i];
    if (!guard_ok(ctx, evaluate_rhs(ctx, stage, k4), guards)) return false;
    out.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return true;
}

StepOutcome step_with_context(const FlowContext& ctx, const FlowState& state,
                              const FlowTime& time, const FlowGuards& guards) {
    const double dt_cap = time.dt0;
    double dt = state.dt > 0.0 ? std::min(state.dt, dt_cap) : time.dt0;

    // The first stage depends only on the current state, so it is shared by
    // the full and the first half step and survives dt retries.  A guard
    // violation at the state itself cannot be stepped around.
    std::vector<double> k1;
    if (!guard_ok(ctx, evaluate_rhs(ctx, state.phi.values(), k1), guards))
        return StepOutcome{state, true};

    std::vector<double> full(state.phi.size()), half(state.phi.size()),
        fine(state.phi.size()), k1_half(state.phi.size());
    while (dt >= time.dt_min) {
        // Guard trip anywhere: halve and retry.
        if (!rk4_attempt(ctx, guards, state.phi.values(), dt, k1, full) ||
            !rk4_attempt(ctx, guards, state.phi.values(), 0.5 * dt, k1, half) ||
            !guard_ok(ctx, evaluate_rhs(ctx, half, k1_half), guards) ||
            !rk4_attempt(ctx, guards, half, 0.5 * dt, k1_half, fine)) {
            dt *= 0.5;
            continue;
        }
        double err = 0.0;
        for (std::size_t i = 0; i < full.size(); ++i)
            err = std::max(err, std::abs(full[i] - fine[i]));
        err /= 15.0; // one-order-down estimate for a 4th-order pair
        const double safe = std::max(err, 1e-300);
        const double dt_next = std::min(
            {dt_cap, 5.0 * dt,
             std::max(time.dt_min,
                      0.9 * dt * std::pow(time.step_tol / safe, 0.2))});
        if (err > time.step_tol) {
            dt = dt_next < dt ? dt_next : 0.5 * dt;
            continue;
        }
        FlowState next{state.t + dt,
                       PotentialField(state.phi.grid(), std::move(fine)),
                       dt_next};
        return StepOutcome{std::move(next), false};
    }
    return StepOutcome{state, true};
}

} // namespace

PotentialField gma_rhs(const PotentialField& phi, const HermitianMatrix& chi,
                       const HermitianMatrix& omega,
                       const GmaCoefficients& coeffs) {
    FlowProblem pb{FlowKind::gma, chi, omega, coeffs, 0.0, 0.0, phi, std::nullopt};
    const FlowContext ctx = make_context(pb);
    std::vector<double> rhs;
    if (!evaluate_rhs(ctx, phi.values(), rhs).admissible)
        throw DegenerateField("gma_rhs: pointwise positivity lost");
    return PotentialField(phi.grid(), std::move(rhs));
}

PotentialField perturbed_gma_rhs(const PotentialField& phi,
                                 const HermitianMatrix& chi,
                                 const HermitianMatrix& omega,
                                 const GmaCoefficients& coeffs, double epsilon) {
    FlowProblem pb{FlowKind::perturbed_gma, chi, omega, coeffs, epsilon, 0.0, phi, std::nullopt};
    const FlowContext ctx = make_context(pb);
    std::vector<double> rhs;
    if (!evaluate_rhs(ctx, phi.values(), rhs).admissible)
        throw DegenerateField("perturbed_gma_rhs: pointwise positivity lost");
    return PotentialField(phi.grid(), std::move(rhs));
}

PotentialField dhym_rhs(const PotentialField& phi, const HermitianMatrix& alpha,
                        const HermitianMatrix& omega, double theta_star) {
    FlowProblem pb{FlowKind::dhym, alpha, omega, std::nullopt, 0.0, theta_star, phi, std::nullopt};
    const FlowContext ctx = make_context(pb);
    std::vector<double> rhs;
    if (!evaluate_rhs(ctx, phi.values(), rhs).admissible)
        throw PhaseSingularity("dhym_rhs: pointwise phase left (0, pi)");
    return PotentialField(phi.grid(), std::move(rhs));
}

StepOutcome step(const FlowState& state, const FlowProblem& problem,
                 const FlowTime& time, const FlowGuards& guards) {
    const FlowContext ctx = make_context(problem);
    return step_with_context(ctx, state, time, guards);
}

RunRecord run(const FlowProblem& problem, const FlowTime& time,
              const FlowGuards& guards, std::uint64_t seed) {
    const auto wall_start = std::chrono::steady_clock::now();
    const FlowContext ctx = make_context(problem);
    if (!(time.dt0 > 0.0) || !(time.dt_min > 0.0) || time.sample_stride < 1 ||
        !(time.t_max > 0.0))
        throw std::invalid_argument("run: invalid time discretization");

    RunRecord record{{}, StopReason::t_max_reached, problem.initial, 0.0, seed, false};
    if (is_gma(problem.kind)) {
        const double c0 = problem.c0_field.has_value() ? problem.c0_field->mean()
                                                       : problem.coeffs->c0();
        record.mass_mismatched =
            std::abs(c0 - ctx.forced_c0) > 1e-9 * std::max(1.0, std::abs(ctx.forced_c0));
    }

    const double sample_dt = time.sample_stride * time.dt0;
    FlowState state{0.0, problem.initial, time.dt0};
    std::vector<double> rhs;
    int consecutive_hits = 0;

    const auto emit_row = [&](const FlowState& s) -> bool {
        const EvalResult ev = evaluate_rhs(ctx, s.phi.values(), rhs);
        if (!ev.admissible) {
            if (is_gma(problem.kind))
                throw DegenerateField("run: state left the positivity region");
            throw PhaseSingularity("run: state left the supercritical window");
        }
        SampleRow row;
        row.t = s.t;
        double l2 = 0.0, linf = 0.0;
        for (double v : rhs) {
            l2 += v * v;
            linf = std::max(linf, std::abs(v));
        }
        row.res_l2 = std::sqrt(l2 / static_cast<double>(rhs.size()));
        row.res_inf = linf;
        row.sup_abs_phidot = linf;
        row.min_eig = ev.min_eig;
        row.theta_min = ev.theta_min;
        row.theta_max = ev.theta_max;
        row.dt = s.dt;
        row.energy_I = ma_energy_primitive(problem.background, s.phi);
        row.energy_J =
            is_gma(problem.kind)
                ? gma_j_energy(problem.background, problem.omega,
                               *problem.coeffs, s.phi)
                : dhym_j_energy(problem.background, problem.omega,
                                problem.theta_star, s.phi);
        record.rows.push_back(row);
        return row.res_l2 <= time.residual_target;
    };

    consecutive_hits = emit_row(state) ? 1 : 0;
    bool done = (consecutive_hits >= 5);
    while (!done) {
        const double next_sample =
            static_cast<double>(record.rows.size()) * sample_dt;
        const double target_t = std::min(next_sample, time.t_max);
        bool diverged = false;
        while (state.t < target_t - 1e-12) {
            FlowState clipped = state;
            clipped.dt = std::min(state.dt > 0.0 ? state.dt : time.dt0,
                                  target_t - state.t);
            const StepOutcome out = step_with_context(ctx, clipped, time, guards);
            if (out.diverged) {
                diverged = true;
                break;
            }
            state = out.state;
        }
        if (diverged) {
            record.status = StopReason::diverged;
            break;
        }
        consecutive_hits = emit_row(state) ? consecutive_hits + 1 : 0;
        if (consecutive_hits >= 5) {
            record.status = StopReason::converged;
            done = true;
        } else if (state.t >= time.t_max - 1e-12) {
            record.status = StopReason::t_max_reached;
            done = true;
        }
    }

    record.final_phi = state.phi;
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      wall_start)
            .count();
    return record;
}

SweepReport boundary_sweep(const FlowProblem& base, const FlowTime& time,
                           const SweepSchedule& schedule,
                           const FlowGuards& guards, std::uint64_t seed) {
    if (!is_gma(base.kind))
        throw std::invalid_argument("boundary_sweep: only the positivity flows deform");
    if (!base.coeffs.has_value())
        throw std::invalid_argument("boundary_sweep: base coefficients required");
    if (base.c0_field.has_value())
        throw std::invalid_argument("boundary_sweep: the schedule forces scalar c0 values");
    const std::size_t m = schedule.chi_shift.size();
    if (m == 0 || schedule.coeff_shift.size() != m ||
        schedule.omega_shift.size() != m)
        throw std::invalid_argument("boundary_sweep: schedule sequences must share a nonzero length");
    const auto check_monotone = [](const std::vector<double>& v, const char* name) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 0.0)
                throw std::invalid_argument(std::string("boundary_sweep: ") + name +
                                            " must be nonnegative");
            if (i > 0 && v[i] > v[i - 1])
                throw std::invalid_argument(std::string("boundary_sweep: ") + name +
                                            " must be nonincreasing");
        }
    };
    check_monotone(schedule.chi_shift, "chi_shift");
    check_monotone(schedule.coeff_shift, "coeff_shift");
    check_monotone(schedule.omega_shift, "omega_shift");

    const int n = base.background.n();
    SweepReport report;
    PotentialField warm = base.initial;
    for (std::size_t i = 0; i < m; ++i) {
        const double s = schedule.chi_shift[i];
        const double tshift = schedule.coeff_shift[i];
        const double u = schedule.omega_shift[i];
        const HermitianMatrix chi_i = HermitianMatrix::from_matrix(
            base.background.mat() + s * base.omega.mat());
        const HermitianMatrix omega_i = HermitianMatrix::from_matrix(
            base.omega.mat() + u * Eigen::MatrixXcd::Identity(n, n));
        std::vector<double> lower = base.coeffs->lower();
        for (double& c : lower) c += tshift;

        // Probe coefficients carry a placeholder constant term; the forced
        // value replaces it below.
        const GmaCoefficients probe(n, lower, 1.0, base.coeffs->c0_floor());
        const IntersectionReport inter =
            intersection_numbers(chi_i, omega_i, probe, true);
        for (const IntersectionEntry& e : inter.entries) {
            if (e.p < n && !(e.margin > 0.0)) {
                report.violation = ScheduleViolation{static_cast<int>(i), e.p,
                                                     e.mask, e.margin};
                return report;
            }
        }
        std::optional<GmaCoefficients> coeffs_i;
        try {
            coeffs_i.emplace(n, lower, inter.forced_c0, base.coeffs->c0_floor());
        } catch (const std::domain_error&) {
            report.violation = ScheduleViolation{static_cast<int>(i), 0, 0,
                                                 inter.forced_c0};
            return report;
        }

        FlowProblem problem = base;
        problem.background = chi_i;
        problem.omega = omega_i;
        problem.coeffs = coeffs_i;
        problem.initial = warm;
        RunRecord rec = run(problem, time, guards, seed);
        PotentialField psi = normalize_sup(rec.final_phi);
        warm = psi;
        report.indices.push_back(SweepIndexResult{
            static_cast<int>(i), s, tshift, u, inter.forced_c0,
            inter.min_proper_margin, std::move(rec), std::move(psi)});
    }
    for (std::size_t i = 0; i + 1 < report.indices.size(); ++i)
        report.l1_gaps.push_back(
            l1_distance(report.indices[i + 1].psi, report.indices[i].psi));
    return report;
}

} // namespace gmalab
