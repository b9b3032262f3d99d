#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lyapnum/metric_system.hpp"
#include "lyapnum/orbit.hpp"
#include "lyapnum/point.hpp"
#include "lyapnum/rng.hpp"

namespace lyapnum {

// ─────────────────────────────────────────────────────────────────────
// Multi-scale estimation of the four separation numbers
//
//   L1  min over centers of   max over ball samples  of full-window sep
//   L2  min over centers of   max over sampled pairs of full-window sep
//   L3  as L1 with the tail-window max (limsup stand-in)
//   L4  as L2 with the tail-window max
//
// Matched sampling: the pair set of a ball always contains every
// (center, sample) pair, and every pair's full/tail maxima come from
// one walk.  Hence, per report (with strict_paper_n false):
//   L2 >= L4,  L2 >= L1,  L1 >= L3,  L4 >= L3   — exactly, not within
// tolerance.  All reductions run in sample-index order with
// keep-earliest tie-breaks, so reports are bit-identical across thread
// counts.
// ─────────────────────────────────────────────────────────────────────

struct EstimatorConfig {
    double delta0 = 0.1;        // initial ball radius
    double delta_factor = 0.5;  // geometric shrink per level
    int delta_levels = 7;
    int64_t horizon = 500;      // orbit length N
    double tail_fraction = 0.5; // tail window starts at ceil(tau*N)
    int base_count = 200;       // centers (distinguished points + uniform fill)
    int nbhd_count = 400;       // ball samples per center per level
    int pair_count = 400;       // sampled pairs per ball (beyond the center pairs)
    uint64_t rng_seed = 42;
    // If true, the pair-based numbers (L2/L4) ignore the step-0 distance
    // — the diameter-style definitions quantify over positive n.  Off by
    // default so the exact orderings above hold; at converged scales the
    // n = 0 term is <= delta and cannot matter.
    bool strict_paper_n = false;
    // Nested mode: level-(k+1) candidates are a subset of level-k
    // candidates by construction, making each convergence curve exactly
    // nonincreasing in the level.
    bool nested = false;
    std::string preset;  // echo only
};

struct CurvePoint {
    double delta = 0.0;
    double estimate = 0.0;
};

struct ConvergenceCurve {
    std::vector<CurvePoint> points;  // delta strictly decreasing
    bool monotone_nonincreasing = false;
};

struct InequalityVerdict {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool pass = false;
};

struct LyapunovReport {
    std::string system_name;
    std::string system_params;
    EstimatorConfig config;
    double diameter = 0.0;
    std::array<double, 4> L{};  // L[0]..L[3] = L1..L4
    std::array<ConvergenceCurve, 4> curves;
    std::vector<InequalityVerdict> inequalities;
    // Final-level minimizing base center per number (not serialized).
    std::array<Point, 4> argmin_center;
    std::array<int, 4> argmin_index{};
};

inline void validate_config(const EstimatorConfig& cfg, const MetricSystem& sys) {
    if (!(cfg.delta0 > 0.0)) throw std::invalid_argument("config: delta0 must be > 0");
    if (!(cfg.delta_factor > 0.0 && cfg.delta_factor < 1.0))
        throw std::invalid_argument("config: delta_factor must be in (0,1)");
    if (cfg.delta_levels < 1) throw std::invalid_argument("config: delta_levels >= 1");
    if (cfg.horizon < 1) throw std::invalid_argument("config: horizon >= 1");
    if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction < 1.0))
        throw std::invalid_argument("config: tail_fraction must be in (0,1)");
    if (cfg.base_count < 1 || cfg.nbhd_count < 1 || cfg.pair_count < 1)
        throw std::invalid_argument("config: all sample counts must be >= 1");
    double finest = cfg.delta0;
    for (int k = 1; k < cfg.delta_levels; ++k) finest *= cfg.delta_factor;
    if (!(finest > 0.0))
        throw std::invalid_argument("config: finest delta underflows to zero");
    if (cfg.horizon > sys.max_horizon)
        throw std::invalid_argument(
            "config: horizon exceeds the representable orbit length of this system (" +
            std::to_string(sys.max_horizon) + ")");
}

namespace detail {

inline std::vector<double> delta_ladder(const EstimatorConfig& cfg) {
    std::vector<double> d(static_cast<size_t>(cfg.delta_levels));
    d[0] = cfg.delta0;
    for (int k = 1; k < cfg.delta_levels; ++k)
        d[static_cast<size_t>(k)] = d[static_cast<size_t>(k) - 1] * cfg.delta_factor;
    return d;
}

// Distinguished points first (they are the usual minimizers), uniform
// fill up to base_count.
inline std::vector<Point> build_centers(const SystemSpec& spec,
                                        const EstimatorConfig& cfg) {
    std::vector<Point> centers;
    centers.reserve(static_cast<size_t>(cfg.base_count) + spec.hard_points.size());
    for (const Point& h : spec.hard_points)
        centers.push_back(spec.system.canonicalize(h));
    const int fill = std::max(0, cfg.base_count - static_cast<int>(centers.size()));
    if (fill > 0) {
        Xoshiro256pp rng = derive_rng(cfg.rng_seed, 0xCE27E125ull, 0);
        std::vector<Point> uni =
            spec.system.uniform_sampler(rng, static_cast<size_t>(fill));
        for (auto& p : uni) centers.push_back(std::move(p));
    }
    return centers;
}

using LevelValues = std::array<double, 4>;

// One center, one level, independent sampling (default mode).
inline LevelValues ball_values(const MetricSystem& sys,
                               const std::vector<Point>& x_orbit, const Point& center,
                               double delta, const EstimatorConfig& cfg, int64_t t0,
                               Xoshiro256pp& rng) {
    const size_t M = static_cast<size_t>(cfg.nbhd_count);
    const std::vector<Point> samples = sys.ball_sampler(rng, center, delta, M);

    std::vector<SeparationStats> st(M);
    double L1b = 0.0, L3b = 0.0;
    for (size_t j = 0; j < M; ++j) {
        st[j] = separation_stats_cached(sys, x_orbit, samples[j], cfg.horizon, t0);
        L1b = std::max(L1b, st[j].full_max);
        L3b = std::max(L3b, st[j].tail_max);
    }

    // Pair pool = {center} ∪ samples; the center pairs are exactly the
    // radius statistics above, so they are folded in for free.
    double L2b = 0.0, L4b = L3b;
    for (size_t j = 0; j < M; ++j)
        L2b = std::max(L2b, cfg.strict_paper_n ? st[j].strict_max : st[j].full_max);
    for (int p = 0; p < cfg.pair_count; ++p) {
        const size_t ai = rng.below(M + 1);
        size_t bi = rng.below(M + 1);
        while (bi == ai) bi = rng.below(M + 1);
        SeparationStats ps;
        if (ai == 0)
            ps = st[bi - 1];
        else if (bi == 0)
            ps = st[ai - 1];
        else
            ps = separation_stats(sys, samples[ai - 1], samples[bi - 1], cfg.horizon, t0);
        L2b = std::max(L2b, cfg.strict_paper_n ? ps.strict_max : ps.full_max);
        L4b = std::max(L4b, ps.tail_max);
    }
    return {L1b, L2b, L3b, L4b};
}

// One center, all levels, default mode.
inline std::vector<LevelValues> center_values(const SystemSpec& spec,
                                              const EstimatorConfig& cfg,
                                              const Point& center, size_t center_index,
                                              const std::vector<double>& deltas,
                                              int64_t t0) {
    const MetricSystem& sys = spec.system;
    const std::vector<Point> x_orbit = orbit_segment(sys, center, cfg.horizon);
    std::vector<LevelValues> out(deltas.size());
    for (size_t k = 0; k < deltas.size(); ++k) {
        Xoshiro256pp rng =
            derive_rng(cfg.rng_seed, static_cast<uint64_t>(k), center_index);
        out[k] = ball_values(sys, x_orbit, center, deltas[k], cfg, t0, rng);
    }
    return out;
}

// One center, all levels, nested mode: level k draws fresh samples
// inside B(x, delta_k); the candidate pool of level k is the center
// plus every fresh draw of levels >= k, so pools shrink as delta does
// and running maxima make each curve exactly nonincreasing.
inline std::vector<LevelValues> center_values_nested(const SystemSpec& spec,
                                                     const EstimatorConfig& cfg,
                                                     const Point& center,
                                                     size_t center_index,
                                                     const std::vector<double>& deltas,
                                                     int64_t t0) {
    const MetricSystem& sys = spec.system;
    const size_t levels = deltas.size();
    const size_t M = static_cast<size_t>(cfg.nbhd_count);
    const std::vector<Point> x_orbit = orbit_segment(sys, center, cfg.horizon);

    std::vector<Point> pool;  // index 0 = center, then fresh draws level by level
    pool.reserve(1 + levels * M);
    pool.push_back(center);
    std::vector<Xoshiro256pp> rngs;
    rngs.reserve(levels);
    for (size_t k = 0; k < levels; ++k) {
        rngs.push_back(derive_rng(cfg.rng_seed, static_cast<uint64_t>(k), center_index));
        std::vector<Point> fresh = sys.ball_sampler(rngs[k], center, deltas[k], M);
        for (auto& p : fresh) pool.push_back(std::move(p));
    }

    std::vector<SeparationStats> st(pool.size());  // vs the center orbit
    for (size_t j = 1; j < pool.size(); ++j)
        st[j] = separation_stats_cached(sys, x_orbit, pool[j], cfg.horizon, t0);

    std::map<std::pair<size_t, size_t>, SeparationStats> pair_cache;
    const auto pair_stats = [&](size_t a, size_t b) -> SeparationStats {
        if (a > b) std::swap(a, b);
        if (a == 0) return st[b];
        const auto key = std::make_pair(a, b);
        const auto it = pair_cache.find(key);
        if (it != pair_cache.end()) return it->second;
        const SeparationStats ps =
            separation_stats(sys, pool[a], pool[b], cfg.horizon, t0);
        pair_cache.emplace(key, ps);
        return ps;
    };

    std::vector<LevelValues> out(levels);
    LevelValues run{0.0, 0.0, 0.0, 0.0};
    for (size_t k = levels; k-- > 0;) {
        // fresh candidates of this level join the pool
        for (size_t j = 1 + k * M; j < 1 + (k + 1) * M; ++j) {
            run[0] = std::max(run[0], st[j].full_max);
            run[2] = std::max(run[2], st[j].tail_max);
            run[1] = std::max(run[1],
                              cfg.strict_paper_n ? st[j].strict_max : st[j].full_max);
            run[3] = std::max(run[3], st[j].tail_max);
        }
        // candidate indices at this level: 0 and all fresh of levels >= k
        std::vector<size_t> cand;
        cand.reserve(1 + (levels - k) * M);
        cand.push_back(0);
        for (size_t j = 1 + k * M; j < pool.size(); ++j) cand.push_back(j);
        for (int p = 0; p < cfg.pair_count; ++p) {
            const size_t ai = cand[rngs[k].below(cand.size())];
            size_t bi = cand[rngs[k].below(cand.size())];
            while (bi == ai) bi = cand[rngs[k].below(cand.size())];
            const SeparationStats ps = pair_stats(ai, bi);
            run[1] = std::max(run[1],
                              cfg.strict_paper_n ? ps.strict_max : ps.full_max);
            run[3] = std::max(run[3], ps.tail_max);
        }
        out[k] = run;
    }
    return out;
}

}  // namespace detail

inline std::vector<InequalityVerdict> check_inequalities(const LyapunovReport& r,
                                                         double slack) {
    const double L1 = r.L[0], L2 = r.L[1], L3 = r.L[2], L4 = r.L[3];
    std::vector<InequalityVerdict> out;
    const auto ge = [&](std::string name, double lhs, double rhs) {
        out.push_back({std::move(name), lhs, rhs, slack, lhs >= rhs - slack});
    };
    const auto le = [&](std::string name, double lhs, double rhs) {
        out.push_back({std::move(name), lhs, rhs, slack, lhs <= rhs + slack});
    };
    ge("L2>=L4", L2, L4);
    ge("L4>=L3", L4, L3);
    ge("L2>=L1", L2, L1);
    ge("L1>=L3", L1, L3);
    le("L2<=2*L3", L2, 2.0 * L3);
    const std::array<double, 4> L{L1, L2, L3, L4};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            le("L" + std::to_string(i + 1) + "<=2*L" + std::to_string(j + 1), L[i],
               2.0 * L[static_cast<size_t>(j)]);
        }
    for (int i = 0; i < 4; ++i)
        le("L" + std::to_string(i + 1) + "<=diam", L[static_cast<size_t>(i)], r.diameter);
    return out;
}

inline LyapunovReport estimate_all(const SystemSpec& spec, const EstimatorConfig& cfg) {
    const MetricSystem& sys = spec.system;
    validate_config(cfg, sys);

    const std::vector<double> deltas = detail::delta_ladder(cfg);
    const int64_t t0 = tail_start(cfg.horizon, cfg.tail_fraction);
    const std::vector<Point> centers = detail::build_centers(spec, cfg);
    const int64_t C = static_cast<int64_t>(centers.size());

    std::vector<std::vector<detail::LevelValues>> per_center(
        static_cast<size_t>(C));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (int64_t i = 0; i < C; ++i) {
        const size_t si = static_cast<size_t>(i);
        per_center[si] = cfg.nested
                             ? detail::center_values_nested(spec, cfg, centers[si], si,
                                                            deltas, t0)
                             : detail::center_values(spec, cfg, centers[si], si, deltas,
                                                     t0);
    }

    LyapunovReport rep;
    rep.system_name = spec.name;
    rep.system_params = spec.params;
    rep.config = cfg;

    // min over centers, per level and number; ties keep the earliest
    // center so the reduction order is immaterial.
    const size_t levels = deltas.size();
    std::array<std::vector<double>, 4> level_min;
    std::array<std::vector<int>, 4> level_arg;
    for (int num = 0; num < 4; ++num) {
        level_min[static_cast<size_t>(num)].assign(levels, 0.0);
        level_arg[static_cast<size_t>(num)].assign(levels, 0);
        for (size_t k = 0; k < levels; ++k) {
            double best = per_center[0][k][static_cast<size_t>(num)];
            int arg = 0;
            for (int64_t i = 1; i < C; ++i) {
                const double v = per_center[static_cast<size_t>(i)][k][static_cast<size_t>(num)];
                if (v < best) {
                    best = v;
                    arg = static_cast<int>(i);
                }
            }
            level_min[static_cast<size_t>(num)][k] = best;
            level_arg[static_cast<size_t>(num)][k] = arg;
        }
    }

    for (int num = 0; num < 4; ++num) {
        ConvergenceCurve curve;
        curve.points.reserve(levels);
        bool mono = true;
        for (size_t k = 0; k < levels; ++k) {
            curve.points.push_back({deltas[k], level_min[static_cast<size_t>(num)][k]});
            if (k > 0 && level_min[static_cast<size_t>(num)][k] >
                             level_min[static_cast<size_t>(num)][k - 1])
                mono = false;
        }
        curve.monotone_nonincreasing = mono;
        rep.curves[static_cast<size_t>(num)] = std::move(curve);
        rep.L[static_cast<size_t>(num)] = level_min[static_cast<size_t>(num)][levels - 1];
        const int arg = level_arg[static_cast<size_t>(num)][levels - 1];
        rep.argmin_index[static_cast<size_t>(num)] = arg;
        rep.argmin_center[static_cast<size_t>(num)] = centers[static_cast<size_t>(arg)];
    }

    rep.diameter = sys.known_diameter ? *sys.known_diameter
                                      : diam_estimate(sys, 4096, cfg.rng_seed);
    rep.inequalities = check_inequalities(rep, 0.05 * rep.diameter);
    return rep;
}

inline std::pair<double, ConvergenceCurve> estimate_L1(const SystemSpec& spec,
                                                       const EstimatorConfig& cfg) {
    LyapunovReport r = estimate_all(spec, cfg);
    return {r.L[0], std::move(r.curves[0])};
}
inline std::pair<double, ConvergenceCurve> estimate_L2(const SystemSpec& spec,
                                                       const EstimatorConfig& cfg) {
    LyapunovReport r = estimate_all(spec, cfg);
    return {r.L[1], std::move(r.curves[1])};
}
inline std::pair<double, ConvergenceCurve> estimate_L3(const SystemSpec& spec,
                                                       const EstimatorConfig& cfg) {
    LyapunovReport r = estimate_all(spec, cfg);
    return {r.L[2], std::move(r.curves[2])};
}
inline std::pair<double, ConvergenceCurve> estimate_L4(const SystemSpec& spec,
                                                       const EstimatorConfig& cfg) {
    LyapunovReport r = estimate_all(spec, cfg);
    return {r.L[3], std::move(r.curves[3])};
}

// ── equicontinuity-region probe ──────────────────────────────────────
// Scans uniformly sampled centers for one whose finest-delta orbit
// radius stays below epsilon.  One-sided evidence: "not found" is
// consistent with sensitivity but proves nothing.  Centers are uniform
// draws only — force-including distinguished points would undercut the
// "no witness found" reading (a fixed point can cap its own orbit
// radius while the system is wildly sensitive elsewhere).
struct EqProbeResult {
    bool found = false;
    Point witness;
    double witness_radius = 0.0;
    size_t centers_scanned = 0;
};

inline EqProbeResult eq_region_probe(const SystemSpec& spec, double epsilon,
                                     const EstimatorConfig& cfg) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("eq_region_probe: epsilon > 0");
    const MetricSystem& sys = spec.system;
    validate_config(cfg, sys);
    const std::vector<double> deltas = detail::delta_ladder(cfg);
    const double finest = deltas.back();

    Xoshiro256pp crng = derive_rng(cfg.rng_seed, 0xE0125ull, 1);
    const std::vector<Point> centers =
        sys.uniform_sampler(crng, static_cast<size_t>(cfg.base_count));

    EqProbeResult res;
    for (size_t i = 0; i < centers.size(); ++i) {
        Xoshiro256pp rng = derive_rng(cfg.rng_seed, 0xE0125ull, i + 2);
        const std::vector<Point> samples = sys.ball_sampler(
            rng, centers[i], finest, static_cast<size_t>(cfg.nbhd_count));
        const std::vector<Point> xo = orbit_segment(sys, centers[i], cfg.horizon);
        double radius = 0.0;
        for (const Point& y : samples)
            radius = std::max(radius, separation_stats_cached(sys, xo, y, cfg.horizon,
                                                              cfg.horizon + 1)
                                          .full_max);
        res.centers_scanned = i + 1;
        if (radius <= epsilon) {
            res.found = true;
            res.witness = centers[i];
            res.witness_radius = radius;
            return res;
        }
    }
    return res;
}

// ── return-time gap diagnostics ──────────────────────────────────────
// Visit times {n in [1,N] : f^n(x) lands in the target ball}; bounded
// gaps suggest syndetic visits, long consecutive runs suggest thickness.
struct GapStats {
    int64_t visits = 0;
    int64_t max_gap = 0;
    double mean_gap = 0.0;
    int64_t longest_run = 0;
    int64_t horizon = 0;
};

inline GapStats return_time_gaps(const MetricSystem& sys, const Point& x,
                                 const Point& target_center, double target_radius,
                                 int64_t N) {
    if (!(target_radius > 0.0))
        throw std::invalid_argument("return_time_gaps: radius must be > 0");
    if (N < 1) throw std::invalid_argument("return_time_gaps: N must be >= 1");
    if (N > sys.max_horizon)
        throw std::invalid_argument("return_time_gaps: N exceeds system horizon");

    GapStats g;
    g.horizon = N;
    Point cur = x;
    int64_t prev = -1;
    int64_t run = 0;
    int64_t gap_sum = 0;
    for (int64_t n = 1; n <= N; ++n) {
        cur = sys.map_eval(cur);
        if (sys.metric(cur, target_center) <= target_radius) {
            if (prev >= 0) {
                const int64_t gap = n - prev;
                g.max_gap = std::max(g.max_gap, gap);
                gap_sum += gap;
                run = (gap == 1) ? run + 1 : 1;
            } else {
                run = 1;
            }
            g.longest_run = std::max(g.longest_run, run);
            prev = n;
            ++g.visits;
        }
    }
    if (g.visits >= 2)
        g.mean_gap = static_cast<double>(gap_sum) / static_cast<double>(g.visits - 1);
    return g;
}

}  // namespace lyapnum
