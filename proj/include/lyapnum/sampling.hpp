#pragma once

#include <cmath>
#include <cstdint>

namespace lyapnum {

// Smallest m >= 1 with scale·2^-m <= delta (as evaluated in doubles),
// or -1 if no m <= max_bits qualifies.  Used by bit-fraction and
// symbol-word ball samplers: keeping the first m bits/symbols of the
// center pins every sample inside the delta-ball.
inline int ball_bit_index(double scale, double delta, int max_bits) {
    for (int m = 1; m <= max_bits; ++m) {
        if (scale * std::ldexp(1.0, -m) <= delta) return m;
    }
    return -1;
}

// Largest step h in [0, hi] with dist_of(h) <= delta, located by
// bisection on the step parameter.  dist_of(0) must be 0.  The result
// is approximate when dist_of is not monotone, so callers re-check the
// metric on whatever point they build from it.
template <class F>
double bisect_step(F&& dist_of, double hi, double delta, int iters = 64) {
    if (dist_of(hi) <= delta) return hi;
    double lo = 0.0;
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (dist_of(mid) <= delta)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace lyapnum
