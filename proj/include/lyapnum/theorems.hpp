#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lyapnum/estimator.hpp"
#include "lyapnum/metric_system.hpp"

namespace lyapnum {

// Structure-implies-equality checks.  Each check applies only when the
// system declares the dynamical properties it needs (Flag::True — an
// Unknown never gates a verdict), compares the estimated numbers
// against what those properties force, and reports pass / fail /
// not-applicable.  The `id` strings are the stable wire format used in
// reports; never reworded.
enum class CheckVerdict { Pass, Fail, NotApplicable };

inline const char* verdict_name(CheckVerdict v) {
    switch (v) {
        case CheckVerdict::Pass: return "pass";
        case CheckVerdict::Fail: return "fail";
        default: return "not-applicable";
    }
}

struct TheoremCheckResult {
    std::string id;
    bool applicable = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    CheckVerdict verdict = CheckVerdict::NotApplicable;
};

inline std::vector<TheoremCheckResult> run_theorem_checks(const SystemSpec& spec,
                                                          const LyapunovReport& r,
                                                          double slack) {
    const double L1 = r.L[0], L2 = r.L[1], L3 = r.L[2], L4 = r.L[3];
    const double diam = r.diameter;
    const MetricSystem& sys = spec.system;
    const bool transitive = flag_true(sys.is_transitive);
    const bool minimal = flag_true(sys.is_minimal);
    const bool wmixing = flag_true(sys.is_weakly_mixing);
    const bool sensitive = flag_true(sys.is_sensitive);

    std::vector<TheoremCheckResult> out;
    const auto add = [&](const char* id, bool applicable, double lhs, double rhs) {
        TheoremCheckResult t;
        t.id = id;
        t.applicable = applicable;
        t.lhs = lhs;
        t.rhs = rhs;
        t.slack = slack;
        t.verdict = !applicable ? CheckVerdict::NotApplicable
                    : (lhs <= rhs + slack) ? CheckVerdict::Pass
                                           : CheckVerdict::Fail;
        out.push_back(std::move(t));
    };

    // Ordering chain L3 <= L1 <= L2 and L3 <= L4 <= L2, as the single
    // worst violation.  Always applicable.
    const double chain_violation = std::max(
        {0.0, L4 - L2, L3 - L4, L1 - L2, L3 - L1});
    add("chain", true, chain_violation, 0.0);

    // Pair-number vs doubled tail-radius bound.  Always applicable.
    add("prop2.1", true, L2, 2.0 * L3);

    // Transitive + sensitive forces the two pair numbers to agree.
    add("thm3.1", transitive && sensitive, std::fabs(L2 - L4), 0.0);

    // Minimal + sensitive forces the two radius numbers to agree.
    add("thm3.2", minimal && sensitive, std::fabs(L1 - L3), 0.0);

    // Weak mixing pins both pair numbers at the diameter...
    add("thm4.1-1", wmixing, std::max(std::fabs(L2 - diam), std::fabs(L4 - diam)),
        0.0);
    // ...and makes the radius numbers agree...
    add("thm4.1-2", wmixing, std::fabs(L1 - L3), 0.0);
    // ...and with minimality all four sit at the diameter.
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        worst = std::max(worst, std::fabs(r.L[static_cast<size_t>(i)] - diam));
    add("thm4.1-3", wmixing && minimal, worst, 0.0);

    return out;
}

}  // namespace lyapnum
