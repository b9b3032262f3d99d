#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lyapnum/metric_system.hpp"
#include "lyapnum/point.hpp"
#include "lyapnum/rng.hpp"

namespace lyapnum {

inline Point iterate(const MetricSystem& sys, Point x, int64_t n) {
    if (n < 0) throw std::invalid_argument("iterate: n must be >= 0");
    for (int64_t i = 0; i < n; ++i) x = sys.map_eval(x);
    return x;
}

inline std::vector<Point> orbit_segment(const MetricSystem& sys, const Point& x,
                                        int64_t n_max) {
    if (n_max < 0) throw std::invalid_argument("orbit_segment: n_max must be >= 0");
    std::vector<Point> orbit;
    orbit.reserve(static_cast<size_t>(n_max) + 1);
    orbit.push_back(x);
    for (int64_t i = 0; i < n_max; ++i) orbit.push_back(sys.map_eval(orbit.back()));
    return orbit;
}

// Separation walks: prefer the system's devirtualized kernel when one
// is declared (bit-identical to the generic path by contract),
// otherwise instantiate the shared walk template on the type-erased
// callables.
inline SeparationStats separation_stats(const MetricSystem& sys, const Point& x,
                                        const Point& y, int64_t N, int64_t t0) {
    if (sys.pair_sep_kernel) return sys.pair_sep_kernel(x, y, N, t0);
    return separation_walk(sys.map_eval, sys.metric, x, y, N, t0);
}

inline SeparationStats separation_stats_cached(const MetricSystem& sys,
                                               std::span<const Point> x_orbit,
                                               const Point& y, int64_t N,
                                               int64_t t0) {
    if (sys.cached_sep_kernel) return sys.cached_sep_kernel(x_orbit, y, N, t0);
    return separation_walk_cached(sys.map_eval, sys.metric, x_orbit, y, N, t0);
}

// max over n in [0, N] of d(f^n x, f^n y) — the finite-horizon stand-in
// for the orbitwise sup metric.
inline double d_f_finite(const MetricSystem& sys, const Point& x, const Point& y,
                         int64_t N) {
    if (N < 0) throw std::invalid_argument("d_f_finite: N must be >= 0");
    return separation_stats(sys, x, y, N, N + 1).full_max;
}

// max over the tail window [ceil(tau·N), N] — the finite stand-in for
// limsup separation (the head of the orbit is treated as transient).
inline double tail_sep(const MetricSystem& sys, const Point& x, const Point& y,
                       int64_t N, double tau) {
    if (N < 1) throw std::invalid_argument("tail_sep: N must be >= 1");
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("tail_sep: tau must be in (0,1)");
    return separation_stats(sys, x, y, N, tail_start(N, tau)).tail_max;
}

// Max pairwise distance over a uniform sample.
inline double diam_estimate(const MetricSystem& sys, size_t sample_count,
                            uint64_t rng_seed) {
    if (sample_count < 2)
        throw std::invalid_argument("diam_estimate: need at least 2 samples");
    Xoshiro256pp rng = derive_rng(rng_seed, 0xD1A3ull, 0);
    const std::vector<Point> pts = sys.uniform_sampler(rng, sample_count);
    if (pts.size() < 2)
        throw std::runtime_error("diam_estimate: sampler returned fewer than 2 points");
    double best = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, sys.metric(pts[i], pts[j]));
    return best;
}

// max over ball samples y of d_f_finite(x, y, N).
inline double radius_f_finite(const MetricSystem& sys, const Point& x, double delta,
                              int64_t N, size_t nbhd_count, uint64_t rng_seed) {
    if (!(delta > 0.0)) throw std::invalid_argument("radius_f_finite: delta must be > 0");
    if (N < 0) throw std::invalid_argument("radius_f_finite: N must be >= 0");
    if (nbhd_count < 1)
        throw std::invalid_argument("radius_f_finite: need at least 1 sample");
    Xoshiro256pp rng = derive_rng(rng_seed, 0xBA11ull, 0);
    const std::vector<Point> ys = sys.ball_sampler(rng, x, delta, nbhd_count);
    const std::vector<Point> xo = orbit_segment(sys, x, N);
    double best = 0.0;
    for (const Point& y : ys)
        best = std::max(best,
                        separation_stats_cached(sys, xo, y, N, N + 1).full_max);
    return best;
}

}  // namespace lyapnum
