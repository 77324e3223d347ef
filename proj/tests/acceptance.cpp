// Acceptance gate: one self-contained check per release criterion, each
// printing a single [PASS]/[FAIL] line.  Run with no arguments for the full
// battery or pass criterion numbers (1-13) to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gmalab/energy.hpp"
#include "gmalab/flows.hpp"
#include "gmalab/gma.hpp"
#include "gmalab/props.hpp"
#include "gmalab/rng.hpp"
#include "gmalab/spectra.hpp"
#include "gmalab/torus.hpp"
#include "support/rational_oracle.hpp"

using namespace gmalab;
using gmalab::testing::oracle_elementary_all;
using gmalab::testing::Rational;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

Outcome suites_all_clean(const std::vector<std::string>& suites, int samples,
                         std::uint64_t seed) {
    double worst = 1e300;
    for (const std::string& s : suites) {
        const PropertyReport r = run_property_suite(s, samples, seed);
        if (r.violations != 0)
            return {false, s + " violated: margin " + fmt(r.worst_margin) +
                               " witness " + r.witness};
        worst = std::min(worst, r.worst_margin);
    }
    return {true, std::to_string(samples) + " samples/suite, worst margin " +
                      fmt(worst)};
}

// --- 1: the S_k prefix recurrence against literal subset enumeration -------

Outcome criterion_01() {
    RandomStream rng = RandomStream::for_sample(101, 0);
    for (int i = 0; i < 1000; ++i) {
        const int n = 1 + static_cast<int>(rng.below(6));
        std::vector<Rational> lam;
        lam.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const long num = static_cast<long>(rng.below(41)) - 20;
            const long den = 1 + static_cast<long>(rng.below(8));
            lam.emplace_back(num, den);
        }
        const auto fast =
            elementary_symmetric_all(std::span<const Rational>(lam), n);
        const auto slow = oracle_elementary_all(lam, n);
        for (int k = 0; k <= n; ++k) {
            if (fast[static_cast<std::size_t>(k)] !=
                slow[static_cast<std::size_t>(k)])
                return {false, "exact mismatch at sample " + std::to_string(i) +
                                   ", order " + std::to_string(k)};
        }
    }
    return {true, "1000 rational spectra, n <= 6, exact equality"};
}

// --- 2-7, 12: property-suite batteries -------------------------------------

Outcome criterion_02() {
    return suites_all_clean({"gma-monotonicity", "gma-convexity", "gma-sublevel"},
                            10000, 202601);
}

Outcome criterion_03() {
    return suites_all_clean({"tp-equivalence"}, 10000, 202602);
}

Outcome criterion_04() {
    return suites_all_clean(
        {"dhym-monotonicity", "dhym-convexity", "dhym-closure", "ky-fan"},
        10000, 202603);
}

Outcome criterion_05() {
    return suites_all_clean({"phase-slope"}, 100000, 202604);
}

Outcome criterion_06() {
    const Outcome nm = suites_all_clean({"newton-maclaurin"}, 10000, 202605);
    if (!nm.pass) return nm;
    const double bound = mass_lower_bound(GmaCoefficients(2, {1.0}, 1.0));
    if (std::abs(bound - 0.125) > 1e-10)
        return {false, "quadratic mass bound " + fmt(bound) + " != 1/8"};
    const Outcome mb = suites_all_clean({"mass-bound"}, 100000, 202606);
    if (!mb.pass) return mb;
    return {true, "margins >= -1e-10; bound(n=2, c1=1) = " + fmt(bound) +
                      "; 1e5 constrained samples clean"};
}

Outcome criterion_07() {
    return suites_all_clean({"energy-derivatives"}, 20, 202607);
}

Outcome criterion_12() {
    return suites_all_clean({"mollifier-stability"}, 100, 202612);
}

// --- 8: quadratic-coefficient scenario run ---------------------------------

PotentialField cosine_mode(const TorusGrid& g, double amp, int axis) {
    return make_potential(g, [&](std::span<const double> x) {
        return amp * std::cos(kTwoPi * x[static_cast<std::size_t>(axis)]);
    });
}

Outcome check_second_differences(const std::vector<SampleRow>& rows,
                                 double slack, std::string& err) {
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double dd = rows[i].energy_J - 2.0 * rows[i - 1].energy_J +
                          rows[i - 2].energy_J;
        if (dd < -slack) {
            err = "second difference of J dips to " + fmt(dd) + " at t = " +
                  fmt(rows[i - 1].t);
            return {false, err};
        }
    }
    return {true, ""};
}

Outcome criterion_08() {
    const TorusGrid g(2, 12);
    const HermitianMatrix chi = HermitianMatrix::scaled_identity(2, 2.0);
    const HermitianMatrix omega = HermitianMatrix::identity(2);
    const IntersectionReport rep =
        intersection_numbers(chi, omega, GmaCoefficients(2, {1.0}, 1.0));
    if (rep.forced_c0 != 2.0)
        return {false, "forced constant " + fmt(rep.forced_c0) + " != 2"};
    const FlowProblem problem{FlowKind::gma,
                              chi,
                              omega,
                              GmaCoefficients(2, {1.0}, rep.forced_c0),
                              0.0,
                              0.0,
                              cosine_mode(g, 0.05, 0),
                              std::nullopt};
    FlowTime time;
    time.dt0 = 1e-2;
    time.sample_stride = 1;
    time.t_max = 50.0;
    time.residual_target = 1e-5;
    const RunRecord rec = run(problem, time);
    if (rec.status != StopReason::converged || rec.rows.back().t > 50.0 ||
        !(rec.rows.back().res_l2 < 1e-5))
        return {false, "no convergence below 1e-5 by t <= 50 (final res " +
                           fmt(rec.rows.back().res_l2) + ")"};
    if (rec.mass_mismatched) return {false, "mass constraint flagged"};
    const double sup0 = rec.rows.front().sup_abs_phidot;
    for (const SampleRow& row : rec.rows)
        if (row.sup_abs_phidot > sup0 + 1e-8)
            return {false, "sup |phidot| grew from " + fmt(sup0) + " to " +
                               fmt(row.sup_abs_phidot) + " at t = " +
                               fmt(row.t)};
    const double i0 = rec.rows.front().energy_I;
    double drift = 0.0;
    for (const SampleRow& row : rec.rows)
        drift = std::max(drift, std::abs(row.energy_I - i0));
    if (drift > 1e-6)
        return {false, "volume-normalized energy drifted by " + fmt(drift)};
    std::string err;
    const Outcome dd = check_second_differences(rec.rows, 1e-6, err);
    if (!dd.pass) return dd;
    return {true, "converged at t = " + fmt(rec.rows.back().t) +
                      ", res " + fmt(rec.rows.back().res_l2) +
                      ", I drift " + fmt(drift) + ", wall " +
                      fmt(rec.wall_seconds) + " s"};
}

// --- 9: phase scenario run -------------------------------------------------

Outcome criterion_09() {
    const TorusGrid g(2, 12);
    const FlowProblem problem{FlowKind::dhym,
                              HermitianMatrix::identity(2),
                              HermitianMatrix::identity(2),
                              std::nullopt,
                              0.0,
                              kPi / 2.0,
                              cosine_mode(g, 0.02, 0),
                              std::nullopt};
    FlowTime time;
    time.dt0 = 1e-2;
    time.sample_stride = 1;
    time.t_max = 50.0;
    time.residual_target = 1e-5;
    const RunRecord rec = run(problem, time);
    if (rec.status != StopReason::converged || rec.rows.back().t > 50.0 ||
        !(rec.rows.back().res_l2 < 1e-5))
        return {false, "no convergence below 1e-5 by t <= 50 (final res " +
                           fmt(rec.rows.back().res_l2) + ")"};
    const double lo = rec.rows.front().theta_min;
    const double hi = rec.rows.front().theta_max;
    for (const SampleRow& row : rec.rows) {
        if (row.theta_min < lo - 1e-8 || row.theta_max > hi + 1e-8)
            return {false, "phase extrema escaped [" + fmt(lo) + ", " +
                               fmt(hi) + "] at t = " + fmt(row.t)};
    }
    std::string err;
    const Outcome dd = check_second_differences(rec.rows, 1e-6, err);
    if (!dd.pass) return dd;
    return {true, "converged at t = " + fmt(rec.rows.back().t) + ", phases in [" +
                      fmt(lo) + ", " + fmt(hi) + "], wall " +
                      fmt(rec.wall_seconds) + " s"};
}

// --- 10: independence of the limit from the initial state ------------------

Outcome criterion_10() {
    const TorusGrid g(2, 12);
    const HermitianMatrix chi = HermitianMatrix::scaled_identity(2, 2.0);
    const HermitianMatrix omega = HermitianMatrix::identity(2);
    const GmaCoefficients coeffs(2, {1.0}, 2.0);
    FlowTime time;
    time.dt0 = 1e-2;
    time.sample_stride = 5;
    time.t_max = 60.0;
    time.residual_target = 1e-6;
    const PotentialField first = cosine_mode(g, 0.05, 0);
    const PotentialField second = make_potential(g, [](std::span<const double> x) {
        return 0.04 * std::sin(kTwoPi * x[2]) +
               0.02 * std::cos(kTwoPi * (x[0] + x[1]));
    });
    double walls = 0.0;
    std::vector<PotentialField> limits;
    for (const PotentialField* init : {&first, &second}) {
        const FlowProblem problem{FlowKind::gma, chi,  omega, coeffs,
                                  0.0,           0.0,  *init, std::nullopt};
        const RunRecord rec = run(problem, time);
        if (rec.status != StopReason::converged)
            return {false, "a run failed to converge"};
        walls += rec.wall_seconds;
        limits.push_back(normalize_sup(rec.final_phi));
    }
    double linf = 0.0;
    for (std::size_t p = 0; p < limits[0].size(); ++p)
        linf = std::max(linf, std::abs(limits[0][p] - limits[1][p]));
    if (linf > 1e-4)
        return {false, "normalized limits differ by " + fmt(linf)};
    return {true, "normalized limits agree to " + fmt(linf) + " (wall " +
                      fmt(walls) + " s)"};
}

// --- 11: deformation schedule toward the degenerate class ------------------

Outcome criterion_11() {
    const TorusGrid g(2, 12);
    const HermitianMatrix chi = HermitianMatrix::scaled_identity(2, 2.0);
    const HermitianMatrix omega = HermitianMatrix::identity(2);
    const FlowProblem base{FlowKind::gma,
                           chi,
                           omega,
                           GmaCoefficients(2, {1.0}, 2.0),
                           0.0,
                           0.0,
                           cosine_mode(g, 0.05, 0),
                           std::nullopt};
    FlowTime time;
    time.dt0 = 1e-2;
    time.sample_stride = 5;
    time.t_max = 60.0;
    time.residual_target = 1e-6;
    SweepSchedule schedule;
    for (int i = 1; i <= 6; ++i) {
        schedule.chi_shift.push_back(1.0 / i);
        schedule.coeff_shift.push_back(0.0);
        schedule.omega_shift.push_back(0.0);
    }
    const SweepReport rep = boundary_sweep(base, time, schedule);
    if (rep.violation)
        return {false, "schedule index " + std::to_string(rep.violation->index) +
                           " infeasible (p = " + std::to_string(rep.violation->p) +
                           ", margin " + fmt(rep.violation->margin) + ")"};
    if (rep.indices.size() != 6) return {false, "expected six indices"};
    double walls = 0.0;
    for (const SweepIndexResult& r : rep.indices) {
        walls += r.record.wall_seconds;
        if (!(r.min_proper_margin > 0.0))
            return {false, "index " + std::to_string(r.index) +
                               " margin not strictly positive"};
        if (r.record.status != StopReason::converged)
            return {false, "index " + std::to_string(r.index) +
                               " did not converge"};
    }
    for (std::size_t i = 0; i + 1 < rep.indices.size(); ++i) {
        if (!(rep.indices[i].forced_c0 > rep.indices[i + 1].forced_c0))
            return {false, "forced constants not strictly decreasing"};
    }
    if (!(rep.indices.back().forced_c0 > 2.0))
        return {false, "forced constants fell below the limit value 2"};
    for (std::size_t i = 0; i + 1 < rep.l1_gaps.size(); ++i) {
        if (!(rep.l1_gaps[i] > rep.l1_gaps[i + 1]))
            return {false, "L1 gaps not strictly decreasing: d" +
                               std::to_string(i) + " = " + fmt(rep.l1_gaps[i]) +
                               ", d" + std::to_string(i + 1) + " = " +
                               fmt(rep.l1_gaps[i + 1])};
    }
    return {true, "six indices feasible; forced constants decrease " +
                      fmt(rep.indices.front().forced_c0) + " -> " +
                      fmt(rep.indices.back().forced_c0) +
                      "; gaps shrink to " + fmt(rep.l1_gaps.back()) +
                      " (wall " + fmt(walls) + " s)"};
}

// --- 13: linear cross-validation in one dimension --------------------------

Outcome criterion_13() {
    const TorusGrid g(1, 16);
    const HermitianMatrix chi = HermitianMatrix::scaled_identity(1, 2.0);
    const HermitianMatrix omega = HermitianMatrix::identity(1);
    const PotentialField deviation =
        make_potential(g, [](std::span<const double> x) {
            return 0.25 * std::cos(kTwoPi * x[0]) -
                   0.15 * std::sin(kTwoPi * x[1]);
        });
    PotentialField c0_field(g);
    for (std::size_t p = 0; p < g.npoints(); ++p)
        c0_field[p] = 2.0 + deviation[p];
    const FlowProblem problem{FlowKind::gma,
                              chi,
                              omega,
                              GmaCoefficients(1, {}, 2.0),
                              0.0,
                              0.0,
                              PotentialField(g),
                              c0_field};
    FlowTime time;
    time.dt0 = 1e-2;
    time.sample_stride = 20;
    time.t_max = 30.0;
    time.residual_target = 1e-6;
    const RunRecord rec = run(problem, time);
    if (rec.status != StopReason::converged)
        return {false, "flow did not converge"};
    // Fixed point: the correction solves the flat linear problem with the
    // zero-mean deviation as right-hand side.
    const PotentialField direct = poisson_solve(deviation, omega);
    const double mean = integrate(rec.final_phi);
    double linf = 0.0;
    for (std::size_t p = 0; p < g.npoints(); ++p)
        linf = std::max(linf,
                        std::abs((rec.final_phi[p] - mean) - direct[p]));
    if (linf > 1e-8)
        return {false, "flow limit differs from the spectral solve by " +
                           fmt(linf)};
    return {true, "limit matches the direct spectral solution to " + fmt(linf)};
}

struct Criterion {
    int id;
    const char* label;
    Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "symmetric recurrence vs exact enumeration", criterion_01},
    {2, "positivity-operator monotonicity/convexity suites", criterion_02},
    {3, "subset-positivity equivalence (exact arithmetic)", criterion_03},
    {4, "phase-operator structure and majorization suites", criterion_04},
    {5, "phase-slope compatibility identity", criterion_05},
    {6, "symmetric-mean margins and the quadratic mass bound", criterion_06},
    {7, "energy first variations vs finite differences", criterion_07},
    {8, "quadratic-coefficient scenario flow", criterion_08},
    {9, "phase scenario flow", criterion_09},
    {10, "limit independent of the initial state", criterion_10},
    {11, "boundary deformation schedule", criterion_11},
    {12, "mollified subsolution stability", criterion_12},
    {13, "one-dimensional linear cross-validation", criterion_13},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    bool all_pass = true;
    for (const Criterion& c : kCriteria) {
        if (!wanted.empty() &&
            std::find(wanted.begin(), wanted.end(), c.id) == wanted.end())
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.fn();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        std::printf("[%s] criterion %02d (%s): %s [%.1f s]\n",
                    outcome.pass ? "PASS" : "FAIL", c.id, c.label,
                    outcome.detail.c_str(), secs);
        std::fflush(stdout);
        all_pass = all_pass && outcome.pass;
    }
    return all_pass ? 0 : 1;
}
