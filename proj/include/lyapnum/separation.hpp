#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

#include "lyapnum/point.hpp"

namespace lyapnum {

// Orbitwise separation maxima gathered in one walk:
//   full_max   over steps 0..N
//   strict_max over steps 1..N       (N >= 1; else 0)
//   tail_max   over steps t0..N      (t0 > N leaves it 0)
struct SeparationStats {
    double full_max = 0.0;
    double strict_max = 0.0;
    double tail_max = 0.0;
};

inline int64_t tail_start(int64_t N, double tau) {
    return static_cast<int64_t>(std::ceil(tau * static_cast<double>(N)));
}

// Walk templates shared by the generic type-erased path and the
// per-system fast kernels.  A kernel is purely a devirtualization: it
// instantiates exactly this code on the system's concrete callables,
// so its output is bit-identical to the generic path.
//
// Exact-equality fast path: identical points have identical orbits
// under a deterministic map, so every separation maximum is 0.

template <class Map, class Metric>
inline SeparationStats separation_walk(Map&& map, Metric&& metric, const Point& x,
                                       const Point& y, int64_t N, int64_t t0) {
    SeparationStats st;
    if (x == y) return st;
    Point a = x;
    Point b = y;
    for (int64_t n = 0;; ++n) {
        const double d = metric(a, b);
        st.full_max = std::max(st.full_max, d);
        if (n >= 1) st.strict_max = std::max(st.strict_max, d);
        if (n >= t0) st.tail_max = std::max(st.tail_max, d);
        if (n == N) break;
        a = map(a);
        b = map(b);
    }
    return st;
}

// Same walk against a precomputed orbit of the first argument.
template <class Map, class Metric>
inline SeparationStats separation_walk_cached(Map&& map, Metric&& metric,
                                              std::span<const Point> x_orbit,
                                              const Point& y, int64_t N, int64_t t0) {
    SeparationStats st;
    if (x_orbit[0] == y) return st;
    Point b = y;
    for (int64_t n = 0;; ++n) {
        const double d = metric(x_orbit[static_cast<size_t>(n)], b);
        st.full_max = std::max(st.full_max, d);
        if (n >= 1) st.strict_max = std::max(st.strict_max, d);
        if (n >= t0) st.tail_max = std::max(st.tail_max, d);
        if (n == N) break;
        b = map(b);
    }
    return st;
}

// State-typed variants for hand-rolled kernels: the walk runs on the
// system's natural state (a double, a bit fraction, a word) mutated in
// place, skipping per-step Point traffic.  `step` and `dist` must
// perform the same operations as the system's map and metric, in the
// same order.  Callers handle the equal-points fast path themselves.

template <class S, class Step, class Dist>
inline SeparationStats separation_walk_state(Step&& step, Dist&& dist, S a, S b,
                                             int64_t N, int64_t t0) {
    SeparationStats st;
    for (int64_t n = 0;; ++n) {
        const double d = dist(a, b);
        st.full_max = std::max(st.full_max, d);
        if (n >= 1) st.strict_max = std::max(st.strict_max, d);
        if (n >= t0) st.tail_max = std::max(st.tail_max, d);
        if (n == N) break;
        step(a);
        step(b);
    }
    return st;
}

// Cached flavor: dist_at(n, b) compares the moving state to the n-th
// precomputed orbit point.
template <class S, class Step, class DistAt>
inline SeparationStats separation_walk_cached_state(Step&& step, DistAt&& dist_at, S b,
                                                    int64_t N, int64_t t0) {
    SeparationStats st;
    for (int64_t n = 0;; ++n) {
        const double d = dist_at(n, b);
        st.full_max = std::max(st.full_max, d);
        if (n >= 1) st.strict_max = std::max(st.strict_max, d);
        if (n >= t0) st.tail_max = std::max(st.tail_max, d);
        if (n == N) break;
        step(b);
    }
    return st;
}

}  // namespace lyapnum
