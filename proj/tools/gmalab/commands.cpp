#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "gmalab/dhym.hpp"
#include "gmalab/energy.hpp"
#include "gmalab/errors.hpp"
#include "gmalab/field_io.hpp"
#include "gmalab/flows.hpp"
#include "gmalab/gma.hpp"
#include "gmalab/props.hpp"
#include "gmalab/spectra.hpp"

namespace gmalab::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& message) { throw SchemaError(message); }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int report_bad_input(const char* command, const std::exception& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kExitBadInput;
}

// "1,2.5,-3" -> {1.0, 2.5, -3.0}; empty text -> {}.
std::vector<double> parse_list(const std::string& text, const std::string& ctx) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string piece = text.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(piece, &used);
            if (used != piece.size()) throw std::invalid_argument(piece);
            out.push_back(v);
        } catch (const std::exception&) {
            bad(ctx + ": cannot parse \"" + piece + "\" as a number");
        }
        pos = comma + 1;
    }
    return out;
}

// Rows split on ';', entries on ',', complex entries as "re:im".
HermitianMatrix parse_inline_matrix(const std::string& text,
                                    const std::string& ctx) {
    std::vector<std::vector<std::complex<double>>> rows;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t semi = text.find(';', pos);
        if (semi == std::string::npos) semi = text.size();
        const std::string row_text = text.substr(pos, semi - pos);
        std::vector<std::complex<double>> row;
        std::size_t rpos = 0;
        while (rpos <= row_text.size()) {
            std::size_t comma = row_text.find(',', rpos);
            if (comma == std::string::npos) comma = row_text.size();
            std::string piece = row_text.substr(rpos, comma - rpos);
            double re = 0.0, im = 0.0;
            const std::size_t colon = piece.find(':');
            try {
                std::size_t used = 0;
                if (colon == std::string::npos) {
                    re = std::stod(piece, &used);
                    if (used != piece.size()) throw std::invalid_argument(piece);
                } else {
                    const std::string re_text = piece.substr(0, colon);
                    const std::string im_text = piece.substr(colon + 1);
                    re = std::stod(re_text, &used);
                    if (used != re_text.size()) throw std::invalid_argument(piece);
                    im = std::stod(im_text, &used);
                    if (used != im_text.size()) throw std::invalid_argument(piece);
                }
            } catch (const std::exception&) {
                bad(ctx + ": cannot parse entry \"" + piece + "\"");
            }
            row.emplace_back(re, im);
            if (comma == row_text.size()) break;
            rpos = comma + 1;
        }
        rows.push_back(std::move(row));
        if (semi == text.size()) break;
        pos = semi + 1;
    }
    const int n = static_cast<int>(rows.size());
    if (n == 0) bad(ctx + ": empty matrix");
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
            bad(ctx + ": row " + std::to_string(i) + " must hold " +
                std::to_string(n) + " entries");
        for (int j = 0; j < n; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    try {
        return HermitianMatrix::from_matrix(m);
    } catch (const std::exception& e) {
        bad(ctx + ": " + e.what());
    }
}

GmaCoefficients build_coeffs(int n, const std::string& c_text, double c0,
                             double c0_floor) {
    const std::vector<double> lower = parse_list(c_text, "--c");
    if (static_cast<int>(lower.size()) != n - 1)
        bad("--c: expected " + std::to_string(n - 1) +
            " coefficients (c_1..c_{n-1}) for dimension " + std::to_string(n));
    return GmaCoefficients(n, lower, c0, c0_floor);
}

json cone_report_json(const ConeReport& r) {
    json out;
    out["member"] = r.is_member;
    out["margin"] = r.margin; // non-finite values serialize as null
    if (r.witness) out["witness"] = *r.witness;
    return out;
}

const char* status_name(StopReason status) {
    switch (status) {
    case StopReason::converged: return "converged";
    case StopReason::t_max_reached: return "t_max_reached";
    case StopReason::diverged: return "diverged";
    }
    return "unknown";
}

int status_exit_code(StopReason status) {
    switch (status) {
    case StopReason::converged: return kExitOk;
    case StopReason::t_max_reached: return kExitTMax;
    case StopReason::diverged: return kExitDiverged;
    }
    return kExitDiverged;
}

json row_json(const SampleRow& r) {
    return json{{"t", r.t},
                {"res_l2", r.res_l2},
                {"res_inf", r.res_inf},
                {"sup_abs_phidot", r.sup_abs_phidot},
                {"energy_I", r.energy_I},
                {"energy_J", r.energy_J},
                {"min_eig", r.min_eig},
                {"theta_min", r.theta_min},
                {"theta_max", r.theta_max},
                {"dt", r.dt}};
}

// The CSV is the bit-exact artifact: %.17g round-trips doubles.
void write_rows_csv(const std::filesystem::path& path,
                    const std::vector<SampleRow>& rows) {
    std::string text =
        "t,res_l2,res_inf,sup_abs_phidot,energy_I,energy_J,min_eig,"
        "theta_min,theta_max,dt\n";
    char buf[512];
    for (const SampleRow& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g\n",
                      r.t, r.res_l2, r.res_inf, r.sup_abs_phidot, r.energy_I,
                      r.energy_J, r.min_eig, r.theta_min, r.theta_max, r.dt);
        text += buf;
    }
    atomic_write_text(path, text);
}

} // namespace

int cmd_op(const OpArgs& a) {
    try {
        const std::vector<double> lam = parse_list(a.lambda, "--lambda");
        if (lam.empty()) bad("--lambda: needs at least one eigenvalue");
        if (!a.sym && !a.gma && !a.dhym)
            bad("pick at least one of --sym, --gma, --dhym");
        const Spectrum spectrum(lam);
        const int n = spectrum.n();
        json out;
        out["lambda"] = lam;
        if (a.sym)
            out["S"] =
                elementary_symmetric_all(std::span<const double>(lam), n);
        if (a.gma) {
            const GmaCoefficients coeffs =
                build_coeffs(n, a.c, a.c0, a.c0_floor);
            for (int ell = 1; ell <= n - 1; ++ell) {
                try {
                    out["P" + std::to_string(ell)] = gma_p(spectrum, coeffs, ell);
                } catch (const DegenerateSpectrum&) {
                    out["P" + std::to_string(ell)] = nullptr;
                }
            }
            try {
                out["Q"] = gma_q(spectrum, coeffs);
            } catch (const DegenerateSpectrum&) {
                out["Q"] = nullptr;
            }
            out["gammaBar"] = cone_report_json(gamma_bar_membership(spectrum, coeffs));
            if (n >= 2) {
                json tp;
                for (int p = 1; p <= n - 1; ++p)
                    tp["p" + std::to_string(p)] = tp_positive(spectrum, coeffs, p);
                out["tpPositive"] = tp;
            }
            out["subsolutionMargin"] = c_subsolution_margin(spectrum, coeffs);
            out["massLowerBound"] = mass_lower_bound(coeffs);
        }
        if (a.dhym) {
            out["theta"] = lagrangian_phase(spectrum);
            json trunc = json::array();
            for (int ell = 1; ell <= n - 1; ++ell)
                trunc.push_back(truncated_phase(spectrum, ell));
            out["thetaTrunc"] = trunc;
            const ComplexSlope s = complex_slope(spectrum);
            out["slope"] = json::array({s.re, s.im});
            json pvals = json::array();
            for (int ell = 1; ell <= n - 1; ++ell) {
                try {
                    pvals.push_back(dhym_p(spectrum, ell));
                } catch (const PhaseSingularity&) {
                    pvals.push_back(nullptr);
                }
            }
            out["dhymP"] = pvals;
            try {
                out["dhymQ"] = dhym_q(spectrum, a.c0);
            } catch (const PhaseSingularity&) {
                out["dhymQ"] = nullptr;
            }
            if (a.theta != 0.0 || a.Theta != 0.0) {
                const DhymPhaseSpec spec(a.theta, a.Theta, a.c0_floor);
                out["gammaTheta"] = cone_report_json(
                    gamma_theta_membership(spectrum, spec, /*closed=*/true));
            }
        }
        emit(out);
        return kExitOk;
    } catch (const std::exception& e) {
        return report_bad_input("op", e);
    }
}

int cmd_cone(const ConeArgs& a) {
    try {
        if (!a.probe.empty()) {
            GmaProbeOperator op;
            if (a.probe == "P") {
                op = GmaProbeOperator::p_ell;
            } else if (a.probe == "Q") {
                op = GmaProbeOperator::q;
            } else {
                bad("--probe: expected P or Q");
            }
            const GmaCoefficients coeffs =
                build_coeffs(a.dimension, a.c, a.c0, a.c0_floor);
            const ConeReport r = convexity_monotonicity_probe(
                op, a.ell, coeffs, a.samples, a.seed);
            json out{{"probe", a.probe},
                     {"dimension", a.dimension},
                     {"samples", a.samples},
                     {"seed", a.seed},
                     {"clean", r.is_member},
                     {"margin", r.margin}};
            if (a.probe == "P") out["ell"] = a.ell;
            if (r.witness) out["witness"] = *r.witness;
            emit(out);
            return r.is_member ? kExitOk : kExitViolation;
        }
        if (a.gma == a.dhym) bad("cone: pick exactly one of --gma, --dhym");
        const std::vector<double> lam = parse_list(a.lambda, "--lambda");
        if (lam.empty()) bad("--lambda: needs at least one eigenvalue");
        const Spectrum spectrum(lam);
        json out;
        out["lambda"] = lam;
        if (a.gma) {
            const GmaCoefficients coeffs =
                build_coeffs(spectrum.n(), a.c, a.c0, a.c0_floor);
            out["cone"] = "gammaBar";
            out.update(cone_report_json(gamma_bar_membership(spectrum, coeffs)));
        } else {
            const DhymPhaseSpec spec(a.theta, a.Theta, a.c0_floor);
            out["cone"] = a.open_cone ? "gammaTheta" : "gammaThetaBar";
            out.update(cone_report_json(
                gamma_theta_membership(spectrum, spec, !a.open_cone)));
        }
        emit(out);
        return kExitOk; // non-membership is an answer, not a failure
    } catch (const std::exception& e) {
        return report_bad_input("cone", e);
    }
}

int cmd_flow(const std::string& config_path) {
    std::optional<RunConfig> cfg;
    try {
        cfg = load_run_config(config_path);
        if (cfg->schedule)
            bad("config.schedule: only the sweep command accepts a schedule");
    } catch (const std::exception& e) {
        return report_bad_input("flow", e);
    }
    json summary;
    summary["config"] = cfg->echo;
    summary["seed"] = cfg->seed;
    int code = kExitDiverged;
    try {
        const RunRecord rec = run(cfg->problem, cfg->time, cfg->guards, cfg->seed);
        if (cfg->out_csv) write_rows_csv(*cfg->out_csv, rec.rows);
        if (cfg->out_final_field) write_potential(*cfg->out_final_field, rec.final_phi);
        summary["status"] = status_name(rec.status);
        summary["wall_seconds"] = rec.wall_seconds;
        summary["mass_mismatched"] = rec.mass_mismatched;
        summary["samples"] = rec.rows.size();
        if (!rec.rows.empty()) summary["final"] = row_json(rec.rows.back());
        code = status_exit_code(rec.status);
    } catch (const DegenerateField& e) {
        summary["status"] = "diverged";
        summary["error"] = e.what();
    } catch (const PhaseSingularity& e) {
        summary["status"] = "diverged";
        summary["error"] = e.what();
    } catch (const std::exception& e) {
        return report_bad_input("flow", e);
    }
    if (cfg->out_summary)
        atomic_write_text(*cfg->out_summary, summary.dump(2) + "\n");
    emit(summary);
    return code;
}

int cmd_sweep(const std::string& config_path) {
    std::optional<RunConfig> cfg;
    std::filesystem::path dir;
    try {
        cfg = load_run_config(config_path);
        if (!cfg->schedule)
            bad("config.schedule: the sweep command needs a schedule");
        dir = cfg->out_directory.value_or(".");
        std::filesystem::create_directories(dir);
    } catch (const std::exception& e) {
        return report_bad_input("sweep", e);
    }
    json out;
    out["config"] = cfg->echo;
    out["seed"] = cfg->seed;
    int code = kExitOk;
    try {
        const SweepReport rep = boundary_sweep(cfg->problem, cfg->time,
                                               *cfg->schedule, cfg->guards,
                                               cfg->seed);
        json indices = json::array();
        for (const SweepIndexResult& r : rep.indices) {
            write_rows_csv(dir / ("index_" + std::to_string(r.index) + ".csv"),
                           r.record.rows);
            write_potential(dir / ("psi_" + std::to_string(r.index) + ".gmlf"),
                            r.psi);
            json entry{{"index", r.index},
                       {"chi_shift", r.chi_shift},
                       {"coeff_shift", r.coeff_shift},
                       {"omega_shift", r.omega_shift},
                       {"forced_c0", r.forced_c0},
                       {"min_proper_margin", r.min_proper_margin},
                       {"status", status_name(r.record.status)},
                       {"wall_seconds", r.record.wall_seconds}};
            if (!r.record.rows.empty())
                entry["final"] = row_json(r.record.rows.back());
            indices.push_back(std::move(entry));
        }
        out["indices"] = std::move(indices);
        out["l1_gaps"] = rep.l1_gaps;
        if (rep.violation) {
            out["violation"] = json{{"index", rep.violation->index},
                                    {"p", rep.violation->p},
                                    {"mask", rep.violation->mask},
                                    {"margin", rep.violation->margin}};
            code = kExitInfeasible;
        } else {
            out["violation"] = nullptr;
        }
    } catch (const DegenerateField& e) {
        out["status"] = "diverged";
        out["error"] = e.what();
        code = kExitDiverged;
    } catch (const PhaseSingularity& e) {
        out["status"] = "diverged";
        out["error"] = e.what();
        code = kExitDiverged;
    } catch (const std::exception& e) {
        return report_bad_input("sweep", e);
    }
    atomic_write_text(dir / "sweep.json", out.dump(2) + "\n");
    emit(out);
    return code;
}

int cmd_props(const std::string& suite, int samples, std::uint64_t seed) {
    if (!has_property_suite(suite)) {
        std::cerr << "props: unknown suite \"" << suite << "\"; known suites:\n";
        for (const std::string& name : property_suite_names())
            std::cerr << "  " << name << "\n";
        return kExitBadInput;
    }
    try {
        const PropertyReport r = run_property_suite(suite, samples, seed);
        json out{{"suite", r.suite},
                 {"samples", r.samples},
                 {"violations", r.violations},
                 {"worst_margin", r.worst_margin}};
        if (!r.witness.empty()) out["witness"] = r.witness;
        emit(out);
        return r.violations == 0 ? kExitOk : kExitViolation;
    } catch (const std::exception& e) {
        return report_bad_input("props", e);
    }
}

int cmd_intersect(const IntersectArgs& a) {
    try {
        const HermitianMatrix chi = parse_inline_matrix(a.chi, "--chi");
        const int n = chi.n();
        const HermitianMatrix omega =
            a.omega.empty() ? HermitianMatrix::identity(n)
                            : parse_inline_matrix(a.omega, "--omega");
        const std::vector<double> lower = parse_list(a.c, "--c");
        if (static_cast<int>(lower.size()) != n - 1)
            bad("--c: expected " + std::to_string(n - 1) +
                " coefficients (c_1..c_{n-1}) for dimension " + std::to_string(n));
        // The stored c0 is ignored in favor of the forced value; any value
        // clearing the constructor checks will do.
        const GmaCoefficients coeffs(n, lower, a.c0_floor + 1.0, a.c0_floor);
        const IntersectionReport rep =
            intersection_numbers(chi, omega, coeffs, a.pencil);
        json entries = json::array();
        for (const IntersectionEntry& e : rep.entries)
            entries.push_back(
                json{{"p", e.p}, {"mask", e.mask}, {"margin", e.margin}});
        emit(json{{"forced_c0", rep.forced_c0},
                  {"min_proper_margin", rep.min_proper_margin},
                  {"entries", std::move(entries)}});
        return kExitOk;
    } catch (const std::exception& e) {
        return report_bad_input("intersect", e);
    }
}

} // namespace gmalab::cli
