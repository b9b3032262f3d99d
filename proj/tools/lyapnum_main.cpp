#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lyapnum/cli.hpp"

namespace {

struct CommonOpts {
    std::string system_id;
    std::string preset = "desk";
    std::string out_dir;
    bool emit_json = false;
    bool strict = false;
    bool nested = false;
    uint64_t seed = 0;
    int64_t horizon = 0;
    double delta0 = 0.0;
    double delta_factor = 0.0;
    int levels = 0;
    double tail_fraction = 0.0;
    int base_count = 0, nbhd_count = 0, pair_count = 0;

    CLI::Option *o_seed = nullptr, *o_horizon = nullptr, *o_delta0 = nullptr,
                *o_factor = nullptr, *o_levels = nullptr, *o_tail = nullptr,
                *o_base = nullptr, *o_nbhd = nullptr, *o_pair = nullptr;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--system", o.system_id,
                    "system id (see zoo-list; also rotation:<alpha>, "
                    "full_shift:<k>, product:<a>,<b>)")
        ->required();
    sub->add_option("--preset", o.preset, "desk (default) or smoke");
    o.o_seed = sub->add_option("--seed", o.seed, "rng seed");
    o.o_horizon = sub->add_option("--horizon", o.horizon, "orbit length N");
    o.o_delta0 = sub->add_option("--delta0", o.delta0, "initial ball radius");
    o.o_factor = sub->add_option("--delta-factor", o.delta_factor,
                                 "radius shrink per level, in (0,1)");
    o.o_levels = sub->add_option("--levels", o.levels, "number of radius levels");
    o.o_tail = sub->add_option("--tail-fraction", o.tail_fraction,
                               "tail window start as a fraction of N");
    o.o_base = sub->add_option("--base-count", o.base_count, "centers");
    o.o_nbhd = sub->add_option("--nbhd-count", o.nbhd_count, "ball samples per center");
    o.o_pair = sub->add_option("--pair-count", o.pair_count, "sampled pairs per ball");
    sub->add_flag("--strict-paper-n", o.strict,
                  "pair numbers ignore the step-0 distance");
    sub->add_flag("--nested", o.nested, "nested sampling (monotone curves)");
    sub->add_option("--out", o.out_dir, "directory for report.json and curves.csv");
    sub->add_flag("--json", o.emit_json, "print the report JSON to stdout");
}

int build_manifest(const CommonOpts& o, lyapnum::RunManifest& man, std::ostream& err) {
    lyapnum::EstimatorConfig cfg;
    if (o.preset == "desk")
        cfg = lyapnum::desk_config();
    else if (o.preset == "smoke")
        cfg = lyapnum::smoke_config();
    else {
        err << "error: unknown preset '" << o.preset << "' (expected desk or smoke)\n";
        return 2;
    }
    if (o.o_seed->count()) cfg.rng_seed = o.seed;
    if (o.o_horizon->count()) cfg.horizon = o.horizon;
    if (o.o_delta0->count()) cfg.delta0 = o.delta0;
    if (o.o_factor->count()) cfg.delta_factor = o.delta_factor;
    if (o.o_levels->count()) cfg.delta_levels = o.levels;
    if (o.o_tail->count()) cfg.tail_fraction = o.tail_fraction;
    if (o.o_base->count()) cfg.base_count = o.base_count;
    if (o.o_nbhd->count()) cfg.nbhd_count = o.nbhd_count;
    if (o.o_pair->count()) cfg.pair_count = o.pair_count;
    cfg.strict_paper_n = o.strict;
    cfg.nested = o.nested;
    man.system_id = o.system_id;
    man.preset = o.preset;
    man.cfg = cfg;
    man.out_dir = o.out_dir;
    man.emit_json = o.emit_json;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-horizon separation numbers of compact dynamical systems"};
    app.require_subcommand(1);

    CommonOpts est_opts, ver_opts;
    CLI::App* est = app.add_subcommand(
        "estimate", "estimate L1..L4 and write a report");
    add_common(est, est_opts);
    CLI::App* ver = app.add_subcommand(
        "verify", "estimate, then check inequalities and structural equalities");
    add_common(ver, ver_opts);

    int k = 2, m = 0;
    int64_t W = 0, N = 0;
    double tau = 0.5;
    bool oracle_json = false;
    CLI::App* orc = app.add_subcommand(
        "oracle", "exact values for the full shift on k symbols");
    orc->add_option("--k", k, "alphabet size")->required();
    orc->add_option("--m", m, "ball resolution: radius 2^-m")->required();
    orc->add_option("--w", W, "word length")->required();
    orc->add_option("--n", N, "horizon")->required();
    orc->add_option("--tail-fraction", tau, "tail window start fraction");
    orc->add_flag("--json", oracle_json, "machine-readable output");

    bool zoo_json = false;
    CLI::App* zoo = app.add_subcommand("zoo-list", "list the built-in systems");
    zoo->add_flag("--json", zoo_json, "machine-readable output");

    int rc = 0;
    est->callback([&] {
        lyapnum::RunManifest man;
        rc = build_manifest(est_opts, man, std::cerr);
        if (rc == 0) rc = lyapnum::cmd_estimate(man, std::cout, std::cerr);
    });
    ver->callback([&] {
        lyapnum::RunManifest man;
        rc = build_manifest(ver_opts, man, std::cerr);
        if (rc == 0) rc = lyapnum::cmd_verify(man, std::cout, std::cerr);
    });
    orc->callback([&] {
        rc = lyapnum::cmd_oracle(k, m, W, N, tau, oracle_json, std::cout, std::cerr);
    });
    zoo->callback([&] { rc = lyapnum::cmd_zoo_list(zoo_json, std::cout); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems are configuration errors
    }
    return rc;
}
