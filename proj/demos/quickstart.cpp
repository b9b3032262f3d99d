// Minimal tour: estimate one system, run the structural checks, poke
// the equicontinuity probe, and compare against the exact shift values.
#include <iostream>

#include "lyapnum/cli.hpp"

int main() {
    using namespace lyapnum;

    SystemSpec tent = make_tent();
    EstimatorConfig cfg = smoke_config();
    LyapunovReport rep = estimate_all(tent, cfg);
    std::cout << "tent map, smoke preset\n";
    for (int i = 0; i < 4; ++i)
        std::cout << "  L" << (i + 1) << " = " << rep.L[static_cast<size_t>(i)] << "\n";
    for (const auto& t : run_theorem_checks(tent, rep, 0.05 * rep.diameter))
        std::cout << "  " << t.id << ": " << verdict_name(t.verdict) << "\n";

    // An isometry never separates orbits, so the probe finds a witness
    // immediately; on the tent map it comes up empty.
    SystemSpec rot = make_rotation(0.381966);
    EqProbeResult probe = eq_region_probe(rot, 0.1, cfg);
    std::cout << "rotation equicontinuity probe: "
              << (probe.found ? "witness found" : "no witness") << "\n";

    OracleValues o = exact_L_estimates(2, 2, 12, 8);
    std::cout << "shift oracle (k=2, m=2, W=12, N=8): L1..L4 =";
    for (double v : o.L) std::cout << ' ' << v;
    std::cout << "\n";
    return 0;
}
