#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lyapnum/point.hpp"
#include "lyapnum/rng.hpp"
#include "lyapnum/separation.hpp"

namespace lyapnum {

// Declared, literature-sourced classification — trusted, not verified.
enum class Flag : uint8_t { True, False, Unknown };

inline bool flag_true(Flag f) { return f == Flag::True; }

inline const char* flag_name(Flag f) {
    switch (f) {
        case Flag::True: return "true";
        case Flag::False: return "false";
        default: return "unknown";
    }
}

// ─────────────────────────────────────────────────────────────────────
// MetricSystem — a compact metric space plus a continuous self-map,
// packaged with the samplers the estimators need.
//
// Contracts:
//  * metric(x, y) is symmetric, zero on identical points, and satisfies
//    the triangle inequality (up to float rounding);
//  * ball_sampler(rng, c, delta, count) returns `count` points, each
//    with metric(c, p) <= delta; index 0 is a boundary probe at
//    distance in [delta/2, delta] whenever the geometry allows one;
//  * uniform_sampler covers the space;
//  * map_eval is total for orbits of length <= max_horizon;
//  * `scale` is baked into `metric` (the metric already returns the
//    scaled value); samplers make their acceptance decisions through
//    `metric` itself, so a rescaled system reproduces the unscaled
//    sampling decisions bit-for-bit.
// ─────────────────────────────────────────────────────────────────────
struct MetricSystem {
    std::string name;
    double scale = 1.0;

    std::function<Point(const Point&)> map_eval;
    std::function<double(const Point&, const Point&)> metric;
    std::function<std::vector<Point>(Xoshiro256pp&, size_t)> uniform_sampler;
    std::function<std::vector<Point>(Xoshiro256pp&, const Point&, double, size_t)>
        ball_sampler;
    // Clamp / wrap a point back onto the space (used to validate that
    // declared distinguished points actually lie on it).
    std::function<Point(const Point&)> canonicalize;

    // Optional fast paths for the orbit-separation walks.  A kernel
    // must instantiate the shared walk template on the system's own
    // map and metric (or replicate it operation for operation), so its
    // output is bit-identical to the generic type-erased path — it
    // exists only to hoist the call indirection out of the inner loop.
    // Leave empty to use the generic path.
    std::function<SeparationStats(const Point&, const Point&, int64_t, int64_t)>
        pair_sep_kernel;
    std::function<SeparationStats(std::span<const Point>, const Point&, int64_t,
                                  int64_t)>
        cached_sep_kernel;

    std::optional<double> known_diameter;

    Flag is_transitive = Flag::Unknown;
    Flag is_minimal = Flag::Unknown;
    Flag is_weakly_mixing = Flag::Unknown;
    Flag is_sensitive = Flag::Unknown;

    // Longest orbit the representation supports (bit-width bound for
    // shift-like systems; effectively unbounded for smooth charts).
    int64_t max_horizon = std::numeric_limits<int64_t>::max();
};

// A registry entry: the system plus distinguished points worth probing
// as base centers (fixed points, endpoints, known minimizers).
struct SystemSpec {
    std::string name;  // stable registry identifier
    std::string params;
    MetricSystem system;

    std::vector<Point> hard_points;
    // Indices into hard_points of points that the map holds fixed.
    std::vector<size_t> fixed_point_indices;

    // Rebuilds this same system with the metric multiplied by c > 0.
    std::function<SystemSpec(double)> with_scale;
};

}  // namespace lyapnum
