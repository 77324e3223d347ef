#include "config.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <initializer_list>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gmalab/energy.hpp"
#include "gmalab/field_io.hpp"

namespace gmalab::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw SchemaError(message); }

void check_object(const json& v, const std::string& ctx) {
    if (!v.is_object()) fail(ctx + ": expected an object");
}

void check_allowed_keys(const json& obj,
                        std::initializer_list<std::string_view> allowed,
                        const std::string& ctx) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const std::string_view a : allowed)
            if (key == a) known = true;
        if (!known) fail(ctx + ": unknown key \"" + key + "\"");
    }
}

const json& member(const json& obj, const char* key, const std::string& ctx) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(ctx + ": missing required key \"" + key + "\"");
    return *it;
}

const json* opt_member(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& ctx) {
    if (!v.is_number()) fail(ctx + ": expected a number");
    return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& ctx) {
    if (!v.is_number_integer()) fail(ctx + ": expected an integer");
    return v.get<std::int64_t>();
}

bool as_boolean(const json& v, const std::string& ctx) {
    if (!v.is_boolean()) fail(ctx + ": expected a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& ctx) {
    if (!v.is_string()) fail(ctx + ": expected a string");
    return v.get<std::string>();
}

std::vector<double> as_number_array(const json& v, const std::string& ctx) {
    if (!v.is_array()) fail(ctx + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_number(v[i], ctx + "[" + std::to_string(i) + "]"));
    return out;
}

// Matrix entries are real numbers or [re, im] pairs.
HermitianMatrix parse_matrix(const json& v, int n, const std::string& ctx) {
    if (!v.is_array() || v.size() != static_cast<std::size_t>(n))
        fail(ctx + ": expected " + std::to_string(n) + " rows");
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
            fail(ctx + ": row " + std::to_string(i) + " must hold " +
                 std::to_string(n) + " entries");
        for (int j = 0; j < n; ++j) {
            const json& e = row[static_cast<std::size_t>(j)];
            const std::string ectx =
                ctx + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            if (e.is_number()) {
                m(i, j) = std::complex<double>(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2) {
                m(i, j) = std::complex<double>(as_number(e[0], ectx),
                                               as_number(e[1], ectx));
            } else {
                fail(ectx + ": expected a number or [re, im]");
            }
        }
    }
    try {
        return HermitianMatrix::from_matrix(m);
    } catch (const std::exception& e) {
        fail(ctx + ": " + e.what());
    }
}

PotentialField parse_field(const json& v, const TorusGrid& g,
                           const std::string& ctx) {
    check_object(v, ctx);
    if (opt_member(v, "file") != nullptr) {
        check_allowed_keys(v, {"file"}, ctx);
        const std::string file = as_string(member(v, "file", ctx), ctx + ".file");
        PotentialField field = [&] {
            try {
                return read_potential(file);
            } catch (const std::exception& e) {
                fail(ctx + ".file: " + e.what());
            }
        }();
        if (!(field.grid() == g))
            fail(ctx + ".file: snapshot grid does not match the run grid");
        return field;
    }
    check_allowed_keys(v, {"mean", "modes"}, ctx);
    const double mean =
        opt_member(v, "mean") ? as_number(*opt_member(v, "mean"), ctx + ".mean") : 0.0;
    struct Mode {
        std::vector<double> freq;
        double cos_amp = 0.0;
        double sin_amp = 0.0;
    };
    std::vector<Mode> modes;
    if (const json* marr = opt_member(v, "modes")) {
        if (!marr->is_array()) fail(ctx + ".modes: expected an array");
        for (std::size_t i = 0; i < marr->size(); ++i) {
            const json& mv = (*marr)[i];
            const std::string mctx = ctx + ".modes[" + std::to_string(i) + "]";
            check_object(mv, mctx);
            check_allowed_keys(mv, {"freq", "cos", "sin"}, mctx);
            Mode mode;
            const json& fv = member(mv, "freq", mctx);
            if (!fv.is_array() || fv.size() != static_cast<std::size_t>(g.axes()))
                fail(mctx + ".freq: expected " + std::to_string(g.axes()) +
                     " integer frequencies");
            for (std::size_t t = 0; t < fv.size(); ++t)
                mode.freq.push_back(static_cast<double>(
                    as_integer(fv[t], mctx + ".freq[" + std::to_string(t) + "]")));
            if (const json* c = opt_member(mv, "cos"))
                mode.cos_amp = as_number(*c, mctx + ".cos");
            if (const json* s = opt_member(mv, "sin"))
                mode.sin_amp = as_number(*s, mctx + ".sin");
            modes.push_back(std::move(mode));
        }
    }
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return make_potential(g, [&](std::span<const double> x) {
        double value = mean;
        for (const Mode& m : modes) {
            double arg = 0.0;
            for (std::size_t t = 0; t < x.size(); ++t) arg += m.freq[t] * x[t];
            arg *= kTwoPi;
            value += m.cos_amp * std::cos(arg) + m.sin_amp * std::sin(arg);
        }
        return value;
    });
}

} // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    check_object(doc, "config");
    check_allowed_keys(doc,
                       {"problem", "dimension", "grid_N", "backgrounds",
                        "coefficients", "phases", "flow", "initial", "schedule",
                        "seed", "output"},
                       "config");

    const std::string problem_name =
        as_string(member(doc, "problem", "config"), "config.problem");
    const bool is_gma = (problem_name == "gMA");
    if (!is_gma && problem_name != "dHYM")
        fail("config.problem: expected \"gMA\" or \"dHYM\"");

    const int dimension = static_cast<int>(
        as_integer(member(doc, "dimension", "config"), "config.dimension"));
    const int grid_n = static_cast<int>(
        as_integer(member(doc, "grid_N", "config"), "config.grid_N"));
    const TorusGrid grid = [&] {
        try {
            return TorusGrid(dimension, grid_n);
        } catch (const std::exception& e) {
            fail(std::string("config: ") + e.what());
        }
    }();

    const json& bgs = member(doc, "backgrounds", "config");
    check_object(bgs, "config.backgrounds");
    check_allowed_keys(bgs, {"chi", "alpha", "omega"}, "config.backgrounds");
    const HermitianMatrix omega = parse_matrix(
        member(bgs, "omega", "config.backgrounds"), dimension,
        "config.backgrounds.omega");
    if (is_gma && opt_member(bgs, "alpha"))
        fail("config.backgrounds: \"alpha\" applies to dHYM runs only");
    if (!is_gma && opt_member(bgs, "chi"))
        fail("config.backgrounds: \"chi\" applies to gMA runs only");
    const HermitianMatrix background =
        is_gma ? parse_matrix(member(bgs, "chi", "config.backgrounds"), dimension,
                              "config.backgrounds.chi")
               : parse_matrix(member(bgs, "alpha", "config.backgrounds"),
                              dimension, "config.backgrounds.alpha");

    // Flow parameters and guards.
    FlowTime time;
    FlowGuards guards;
    double epsilon = 0.0;
    if (const json* fv = opt_member(doc, "flow")) {
        check_object(*fv, "config.flow");
        check_allowed_keys(*fv,
                           {"epsilon", "dt0", "dt_min", "t_max",
                            "residual_target", "sample_stride", "step_tol",
                            "delta_pos", "phase_margin"},
                           "config.flow");
        const auto set = [&](const char* key, double& target) {
            if (const json* v = opt_member(*fv, key))
                target = as_number(*v, std::string("config.flow.") + key);
        };
        set("dt0", time.dt0);
        set("dt_min", time.dt_min);
        set("t_max", time.t_max);
        set("residual_target", time.residual_target);
        set("step_tol", time.step_tol);
        set("delta_pos", guards.delta_pos);
        set("phase_margin", guards.phase_margin);
        if (const json* v = opt_member(*fv, "sample_stride"))
            time.sample_stride = static_cast<int>(
                as_integer(*v, "config.flow.sample_stride"));
        if (const json* v = opt_member(*fv, "epsilon")) {
            if (!is_gma) fail("config.flow.epsilon: applies to gMA runs only");
            epsilon = as_number(*v, "config.flow.epsilon");
            if (!(epsilon >= 0.0)) fail("config.flow.epsilon: must be >= 0");
        }
    }

    // Problem-specific sections.
    std::optional<GmaCoefficients> coeffs;
    std::optional<PotentialField> c0_field;
    double theta_star = 0.0;
    if (is_gma) {
        if (opt_member(doc, "phases"))
            fail("config.phases: applies to dHYM runs only");
        const json& cv = member(doc, "coefficients", "config");
        check_object(cv, "config.coefficients");
        check_allowed_keys(cv, {"lower", "c0", "c0_floor", "force_c0", "c0_field"},
                           "config.coefficients");
        const std::vector<double> lower = as_number_array(
            member(cv, "lower", "config.coefficients"), "config.coefficients.lower");
        if (lower.size() != static_cast<std::size_t>(dimension - 1))
            fail("config.coefficients.lower: expected " +
                 std::to_string(dimension - 1) + " entries (c_1 .. c_{n-1})");
        double c0 = 0.0;
        const double c0_floor =
            opt_member(cv, "c0_floor")
                ? as_number(*opt_member(cv, "c0_floor"), "config.coefficients.c0_floor")
                : 0.0;
        const bool force_c0 =
            opt_member(cv, "force_c0")
                ? as_boolean(*opt_member(cv, "force_c0"), "config.coefficients.force_c0")
                : false;
        if (opt_member(cv, "c0_field") &&
            (opt_member(cv, "c0") || force_c0))
            fail("config.coefficients: \"c0_field\" excludes \"c0\" and \"force_c0\"");
        if (const json* v = opt_member(cv, "c0"))
            c0 = as_number(*v, "config.coefficients.c0");
        try {
            if (force_c0) {
                const GmaCoefficients probe(dimension, lower, 1.0, c0_floor);
                c0 = intersection_numbers(background, omega, probe, true).forced_c0;
            }
            coeffs.emplace(dimension, lower, c0, c0_floor);
        } catch (const std::exception& e) {
            fail(std::string("config.coefficients: ") + e.what());
        }
        if (const json* v = opt_member(cv, "c0_field"))
            c0_field = parse_field(*v, grid, "config.coefficients.c0_field");
    } else {
        if (opt_member(doc, "coefficients"))
            fail("config.coefficients: applies to gMA runs only");
        const json& pv = member(doc, "phases", "config");
        check_object(pv, "config.phases");
        check_allowed_keys(pv, {"theta_star"}, "config.phases");
        theta_star = as_number(member(pv, "theta_star", "config.phases"),
                               "config.phases.theta_star");
        if (!(theta_star > 0.0 && theta_star < 3.14159265358979323846))
            fail("config.phases.theta_star: must lie strictly inside (0, pi)");
    }

    PotentialField initial =
        opt_member(doc, "initial")
            ? parse_field(*opt_member(doc, "initial"), grid, "config.initial")
            : PotentialField(grid);

    std::optional<SweepSchedule> schedule;
    if (const json* sv = opt_member(doc, "schedule")) {
        check_object(*sv, "config.schedule");
        check_allowed_keys(*sv, {"chi_shift", "coeff_shift", "omega_shift"},
                           "config.schedule");
        SweepSchedule s;
        s.chi_shift = as_number_array(member(*sv, "chi_shift", "config.schedule"),
                                      "config.schedule.chi_shift");
        s.coeff_shift = as_number_array(
            member(*sv, "coeff_shift", "config.schedule"),
            "config.schedule.coeff_shift");
        s.omega_shift = as_number_array(
            member(*sv, "omega_shift", "config.schedule"),
            "config.schedule.omega_shift");
        schedule = std::move(s);
    }

    std::uint64_t seed = 0;
    if (const json* v = opt_member(doc, "seed")) {
        if (!v->is_number_unsigned() && !v->is_number_integer())
            fail("config.seed: expected a nonnegative integer");
        const std::int64_t s = v->get<std::int64_t>();
        if (s < 0) fail("config.seed: expected a nonnegative integer");
        seed = static_cast<std::uint64_t>(s);
    }

    std::optional<std::filesystem::path> out_csv, out_summary, out_final, out_dir;
    if (const json* ov = opt_member(doc, "output")) {
        check_object(*ov, "config.output");
        check_allowed_keys(*ov, {"csv", "summary", "final_field", "directory"},
                           "config.output");
        if (const json* v = opt_member(*ov, "csv"))
            out_csv = as_string(*v, "config.output.csv");
        if (const json* v = opt_member(*ov, "summary"))
            out_summary = as_string(*v, "config.output.summary");
        if (const json* v = opt_member(*ov, "final_field"))
            out_final = as_string(*v, "config.output.final_field");
        if (const json* v = opt_member(*ov, "directory"))
            out_dir = as_string(*v, "config.output.directory");
    }

    const FlowKind kind = is_gma
                              ? (epsilon > 0.0 ? FlowKind::perturbed_gma
                                               : FlowKind::gma)
                              : FlowKind::dhym;
    return RunConfig{
        std::move(doc),
        FlowProblem{kind, background, omega, std::move(coeffs), epsilon,
                    theta_star, std::move(initial), std::move(c0_field)},
        time,
        guards,
        seed,
        std::move(schedule),
        std::move(out_csv),
        std::move(out_summary),
        std::move(out_final),
        std::move(out_dir)};
}

} // namespace gmalab::cli
