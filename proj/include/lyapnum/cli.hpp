#pragma once

#include <exception>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "lyapnum/estimator.hpp"
#include "lyapnum/report_io.hpp"
#include "lyapnum/shift_oracle.hpp"
#include "lyapnum/theorems.hpp"
#include "lyapnum/zoo.hpp"

namespace lyapnum {

// Command bodies live here (not in the binary) so tests can drive them
// directly and assert on exit codes and streams.
//
// Exit codes: 0 ok; 1 verification found a failing applicable check;
// 2 bad configuration or usage; 3 runtime failure.

struct RunManifest {
    std::string system_id;
    std::string preset;  // "desk", "smoke", or "" for fully custom
    EstimatorConfig cfg;
    std::string out_dir;     // empty: write no files
    bool emit_json = false;  // machine-readable stdout instead of prose
    std::string schema_version = "1.0";
};

inline EstimatorConfig desk_config() {
    EstimatorConfig cfg;  // struct defaults are the desk preset
    cfg.preset = "desk";
    return cfg;
}

inline EstimatorConfig smoke_config() {
    EstimatorConfig cfg;
    cfg.base_count = 20;
    cfg.nbhd_count = 40;
    cfg.pair_count = 40;
    cfg.horizon = 100;
    cfg.preset = "smoke";
    return cfg;
}

namespace detail {

inline void print_summary(std::ostream& out, const LyapunovReport& r,
                          const std::vector<TheoremCheckResult>& theorems) {
    out << "system " << r.system_name;
    if (!r.system_params.empty()) out << " (" << r.system_params << ")";
    out << "\n";
    out << "preset " << (r.config.preset.empty() ? "custom" : r.config.preset)
        << "  seed " << r.config.rng_seed << "  horizon " << r.config.horizon
        << "  levels " << r.config.delta_levels << "  delta0 "
        << format12(r.config.delta0) << "\n";
    out << "diameter " << format12(r.diameter) << "\n";
    for (int i = 0; i < 4; ++i)
        out << "L" << (i + 1) << " = " << format12(r.L[static_cast<size_t>(i)])
            << (i == 3 ? "\n" : "  ");
    size_t ok = 0;
    for (const auto& v : r.inequalities) ok += v.pass ? 1u : 0u;
    out << "inequalities " << ok << "/" << r.inequalities.size() << " pass\n";
    for (const auto& t : theorems)
        out << "  " << t.id << ": " << verdict_name(t.verdict) << " (lhs "
            << format12(t.lhs) << ", rhs " << format12(t.rhs) << ", slack "
            << format12(t.slack) << ")\n";
}

inline int write_outputs(const RunManifest& man, const LyapunovReport& rep,
                         const std::vector<TheoremCheckResult>& theorems,
                         std::ostream& out, std::ostream& err) {
    if (!man.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(man.out_dir, ec);
        if (ec) {
            err << "error: cannot create output directory '" << man.out_dir
                << "': " << ec.message() << "\n";
            return 3;
        }
        const auto base = std::filesystem::path(man.out_dir);
        write_report_json((base / "report.json").string(), rep, theorems);
        write_curves_csv((base / "curves.csv").string(), rep);
    }
    if (man.emit_json)
        out << render_report_json(rep, theorems);
    else {
        print_summary(out, rep, theorems);
        if (!man.out_dir.empty())
            out << "wrote " << man.out_dir << "/report.json and " << man.out_dir
                << "/curves.csv\n";
    }
    return 0;
}

}  // namespace detail

inline int cmd_estimate(const RunManifest& man, std::ostream& out, std::ostream& err) {
    try {
        SystemSpec spec = parse_system(man.system_id);
        EstimatorConfig cfg = man.cfg;
        cfg.preset = man.preset;
        LyapunovReport rep = estimate_all(spec, cfg);
        const auto theorems =
            run_theorem_checks(spec, rep, 0.05 * rep.diameter);
        return detail::write_outputs(man, rep, theorems, out, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

// Estimate, then fail (exit 1) if any inequality row or any applicable
// structural check does not hold within slack.
inline int cmd_verify(const RunManifest& man, std::ostream& out, std::ostream& err) {
    try {
        SystemSpec spec = parse_system(man.system_id);
        EstimatorConfig cfg = man.cfg;
        cfg.preset = man.preset;
        LyapunovReport rep = estimate_all(spec, cfg);
        const auto theorems =
            run_theorem_checks(spec, rep, 0.05 * rep.diameter);
        const int wrote = detail::write_outputs(man, rep, theorems, out, err);
        if (wrote != 0) return wrote;
        bool ok = true;
        for (const auto& v : rep.inequalities)
            if (!v.pass) {
                ok = false;
                out << "FAIL inequality " << v.name << ": lhs " << format12(v.lhs)
                    << " rhs " << format12(v.rhs) << "\n";
            }
        for (const auto& t : theorems)
            if (t.verdict == CheckVerdict::Fail) {
                ok = false;
                out << "FAIL check " << t.id << ": lhs " << format12(t.lhs)
                    << " rhs " << format12(t.rhs) << "\n";
            }
        out << (ok ? "verify: all applicable checks pass\n"
                   : "verify: FAILURES found\n");
        return ok ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

inline int cmd_oracle(int k, int m, int64_t W, int64_t N, double tau, bool emit_json,
                      std::ostream& out, std::ostream& err) {
    try {
        const OracleValues o = exact_L_estimates(k, m, W, N, tau);
        if (emit_json) {
            ordered_json j;
            j["k"] = o.k;
            j["m"] = o.m;
            j["word_length"] = o.word_length;
            j["horizon"] = o.horizon;
            for (int i = 0; i < 4; ++i)
                j["L" + std::to_string(i + 1)] = round12(o.L[static_cast<size_t>(i)]);
            out << j.dump(2) << "\n";
        } else {
            out << "full shift on " << k << " symbols, ball radius 2^-" << m
                << ", word length " << W << ", horizon " << N << "\n";
            for (int i = 0; i < 4; ++i)
                out << "L" << (i + 1) << " = " << format12(o.L[static_cast<size_t>(i)])
                    << (i == 3 ? "\n" : "  ");
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

inline int cmd_zoo_list(bool emit_json, std::ostream& out) {
    const std::vector<SystemSpec> reg = default_registry();
    if (emit_json) {
        ordered_json arr = ordered_json::array();
        for (const auto& s : reg) {
            ordered_json j;
            j["id"] = registry_id(s);
            j["params"] = s.params;
            j["transitive"] = flag_name(s.system.is_transitive);
            j["minimal"] = flag_name(s.system.is_minimal);
            j["weakly_mixing"] = flag_name(s.system.is_weakly_mixing);
            j["sensitive"] = flag_name(s.system.is_sensitive);
            if (s.system.known_diameter)
                j["diameter"] = round12(*s.system.known_diameter);
            arr.push_back(std::move(j));
        }
        out << arr.dump(2) << "\n";
    } else {
        for (const auto& s : reg) {
            out << registry_id(s);
            if (!s.params.empty()) out << " [" << s.params << "]";
            out << "  transitive=" << flag_name(s.system.is_transitive)
                << " minimal=" << flag_name(s.system.is_minimal)
                << " weakly_mixing=" << flag_name(s.system.is_weakly_mixing)
                << " sensitive=" << flag_name(s.system.is_sensitive);
            if (s.system.known_diameter)
                out << " diameter=" << format12(*s.system.known_diameter);
            out << "\n";
        }
    }
    return 0;
}

}  // namespace lyapnum
