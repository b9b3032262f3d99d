#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lyapnum/estimator.hpp"
#include "lyapnum/theorems.hpp"

namespace lyapnum {

using ordered_json = nlohmann::ordered_json;

// All floating-point values are rounded to 12 significant digits
// before they enter a report, so parse → re-emit is byte-identical and
// reports diff cleanly across platforms.
inline double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline std::string format12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline ordered_json report_to_json(const LyapunovReport& r,
                                   const std::vector<TheoremCheckResult>& theorems) {
    ordered_json j;
    j["schema_version"] = "1.0";
    j["system"] = {{"name", r.system_name}, {"params", r.system_params}};

    ordered_json cfg;
    cfg["preset"] = r.config.preset;
    cfg["delta0"] = round12(r.config.delta0);
    cfg["delta_factor"] = round12(r.config.delta_factor);
    cfg["delta_levels"] = r.config.delta_levels;
    cfg["horizon"] = r.config.horizon;
    cfg["tail_fraction"] = round12(r.config.tail_fraction);
    cfg["base_count"] = r.config.base_count;
    cfg["nbhd_count"] = r.config.nbhd_count;
    cfg["pair_count"] = r.config.pair_count;
    cfg["rng_seed"] = r.config.rng_seed;
    cfg["strict_paper_n"] = r.config.strict_paper_n;
    cfg["nested"] = r.config.nested;
    j["config"] = std::move(cfg);

    j["diameter"] = round12(r.diameter);
    for (int i = 0; i < 4; ++i)
        j["L" + std::to_string(i + 1)] = round12(r.L[static_cast<size_t>(i)]);

    ordered_json curves;
    for (int i = 0; i < 4; ++i) {
        const ConvergenceCurve& c = r.curves[static_cast<size_t>(i)];
        ordered_json pts = ordered_json::array();
        for (const CurvePoint& p : c.points)
            pts.push_back({{"delta", round12(p.delta)},
                           {"estimate", round12(p.estimate)}});
        curves["L" + std::to_string(i + 1)] = {
            {"points", std::move(pts)},
            {"monotone_nonincreasing", c.monotone_nonincreasing}};
    }
    j["curves"] = std::move(curves);

    ordered_json ineq = ordered_json::array();
    for (const InequalityVerdict& v : r.inequalities)
        ineq.push_back({{"name", v.name},
                        {"lhs", round12(v.lhs)},
                        {"rhs", round12(v.rhs)},
                        {"slack", round12(v.slack)},
                        {"pass", v.pass}});
    j["inequalities"] = std::move(ineq);

    ordered_json thm = ordered_json::array();
    for (const TheoremCheckResult& t : theorems)
        thm.push_back({{"id", t.id},
                       {"applicable", t.applicable},
                       {"lhs", round12(t.lhs)},
                       {"rhs", round12(t.rhs)},
                       {"slack", round12(t.slack)},
                       {"verdict", verdict_name(t.verdict)}});
    j["theorems"] = std::move(thm);

    return j;
}

inline std::string render_report_json(const LyapunovReport& r,
                                      const std::vector<TheoremCheckResult>& theorems) {
    return report_to_json(r, theorems).dump(2) + "\n";
}

// One row per (number, level); deltas strictly decreasing within a
// number; LF line endings; the same 12-digit formatting as the JSON.
inline std::string render_curves_csv(const LyapunovReport& r) {
    std::ostringstream os;
    os << "number_id,delta,estimate\n";
    for (int i = 0; i < 4; ++i) {
        const ConvergenceCurve& c = r.curves[static_cast<size_t>(i)];
        for (const CurvePoint& p : c.points)
            os << "L" << (i + 1) << ',' << format12(p.delta) << ','
               << format12(p.estimate) << '\n';
    }
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline void write_report_json(const std::string& path, const LyapunovReport& r,
                              const std::vector<TheoremCheckResult>& theorems) {
    write_text_file(path, render_report_json(r, theorems));
}

inline void write_curves_csv(const std::string& path, const LyapunovReport& r) {
    write_text_file(path, render_curves_csv(r));
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace lyapnum
