#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lyapnum/metric_system.hpp"
#include "lyapnum/point.hpp"
#include "lyapnum/rng.hpp"
#include "lyapnum/sampling.hpp"
#include "lyapnum/separation.hpp"

namespace lyapnum {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// ── chart helpers ────────────────────────────────────────────────────

namespace detail {

inline double wrap01(double x) { return x - std::floor(x); }

inline double wrap_2pi(double phi) {
    phi = std::fmod(phi, kTwoPi);
    return phi < 0.0 ? phi + kTwoPi : phi;
}

// Ball sampler for 1-D charts (interval or circle).  `probe(h)` maps a
// signed chart step to an on-space point with probe(0) == center.  The
// step sizes come from bisection against the system's own (possibly
// rescaled) metric, so no delta/scale division ever happens and a
// rescaled system makes bit-identical sampling decisions.
template <class M, class P>
std::vector<Point> line_ball(const M& metric, const P& probe, Xoshiro256pp& rng,
                             const Point& center, double delta, size_t count,
                             double hi_plus, double hi_minus) {
    const auto dist_plus = [&](double h) { return metric(center, probe(h)); };
    const auto dist_minus = [&](double h) { return metric(center, probe(-h)); };
    const double hp = bisect_step(dist_plus, hi_plus, delta);
    const double hm = bisect_step(dist_minus, hi_minus, delta);

    std::vector<Point> out;
    out.reserve(count);

    bool have_boundary = false;
    for (int dir = 0; dir < 2 && !have_boundary; ++dir) {
        const Point p = dir == 0 ? probe(hp) : probe(-hm);
        const double d = metric(center, p);
        if (d >= 0.5 * delta && d <= delta) {
            out.push_back(p);
            have_boundary = true;
        }
    }
    if (!have_boundary) out.push_back(center);

    while (out.size() < count) {
        bool placed = false;
        for (int attempt = 0; attempt < 128 && !placed; ++attempt) {
            const double h = -hm + rng.uniform01() * (hm + hp);
            const Point p = probe(h);
            if (metric(center, p) <= delta) {
                out.push_back(p);
                placed = true;
            }
        }
        if (!placed) out.push_back(center);
    }
    return out;
}

// Ball sampler for bit-fraction systems.  Freezing the first m bits of
// the center pins the linear (and hence arc) distance below 2^-m, and
// flipping exactly bit m-1 realizes distance 2^-m in [delta/2, delta].
inline std::vector<Point> bits_ball(double scale, Xoshiro256pp& rng,
                                    const Point& center, double delta,
                                    size_t count) {
    const BitFraction& c = center.frac();
    const int m = ball_bit_index(scale, delta, c.bits());
    if (m < 0)
        throw std::runtime_error("ball_sampler: radius below representable resolution");

    std::vector<Point> out;
    out.reserve(count);
    {
        BitFraction b = c;
        b.flip_bit(m - 1);
        out.push_back(Point::bits(std::move(b)));
    }
    while (out.size() < count) {
        BitFraction b = c;
        b.randomize_tail(rng, m);
        out.push_back(Point::bits(std::move(b)));
    }
    return out;
}

// Ball sampler for words under d = 2^-(first difference index).
inline std::vector<Point> word_ball(double scale, Xoshiro256pp& rng,
                                    const Point& center, double delta,
                                    size_t count) {
    const SymbolWord& c = center.sym();
    const uint32_t L = c.length();
    const uint16_t k = c.alphabet;
    const int m = ball_bit_index(scale, delta, static_cast<int>(L) - 1);
    if (m < 0)
        throw std::runtime_error("ball_sampler: radius below representable resolution");

    const auto base = [&] {
        std::vector<uint8_t> s(L);
        for (uint32_t i = 0; i < L; ++i) s[i] = c.at(i);
        return s;
    };

    std::vector<Point> out;
    out.reserve(count);
    {
        std::vector<uint8_t> s = base();
        s[static_cast<size_t>(m)] =
            static_cast<uint8_t>((s[static_cast<size_t>(m)] + 1u) % k);
        for (uint32_t i = static_cast<uint32_t>(m) + 1; i < L; ++i)
            s[i] = static_cast<uint8_t>(rng.below(k));
        out.push_back(Point::word(std::move(s), k));
    }
    while (out.size() < count) {
        std::vector<uint8_t> s = base();
        for (uint32_t i = static_cast<uint32_t>(m); i < L; ++i)
            s[i] = static_cast<uint8_t>(rng.below(k));
        out.push_back(Point::word(std::move(s), k));
    }
    return out;
}

}  // namespace detail

// ── three-branch interval map ────────────────────────────────────────
// Piecewise-linear self-map of [0,1]: slope +3 on [0,1/3], -3 on
// [1/3,2/3], +3 on [2/3,1].  Fixed points 0, 1/2, 1.

inline double three_branch_map(double x) {
    double y;
    if (x <= 1.0 / 3.0)
        y = 3.0 * x;
    else if (x <= 2.0 / 3.0)
        y = 2.0 - 3.0 * x;
    else
        y = 3.0 * x - 2.0;
    return std::clamp(y, 0.0, 1.0);
}

namespace detail {

inline SystemSpec make_three_branch_scaled(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be > 0");
    MetricSystem sys;
    sys.name = "three_branch";
    sys.scale = scale;
    const auto map = [](const Point& p) { return Point::real1(three_branch_map(p.x0())); };
    sys.map_eval = map;
    const auto metric = [scale](const Point& a, const Point& b) {
        return scale * std::fabs(a.x0() - b.x0());
    };
    sys.metric = metric;
    sys.pair_sep_kernel = [map, metric](const Point& x, const Point& y, int64_t N,
                                        int64_t t0) {
        return separation_walk(map, metric, x, y, N, t0);
    };
    sys.cached_sep_kernel = [map, metric](std::span<const Point> xo, const Point& y,
                                          int64_t N, int64_t t0) {
        return separation_walk_cached(map, metric, xo, y, N, t0);
    };
    sys.uniform_sampler = [](Xoshiro256pp& rng, size_t count) {
        std::vector<Point> out;
        out.reserve(count);
        for (size_t i = 0; i < count; ++i) out.push_back(Point::real1(rng.uniform01()));
        return out;
    };
    sys.ball_sampler = [metric](Xoshiro256pp& rng, const Point& c, double delta,
                                size_t count) {
        const double x = c.x0();
        const auto probe = [x](double h) {
            return Point::real1(std::clamp(x + h, 0.0, 1.0));
        };
        return detail::line_ball(metric, probe, rng, c, delta, count, 1.0, 1.0);
    };
    sys.canonicalize = [](const Point& p) {
        return Point::real1(std::clamp(p.x0(), 0.0, 1.0));
    };
    sys.known_diameter = scale * 1.0;
    sys.is_transitive = Flag::True;
    sys.is_minimal = Flag::False;
    sys.is_weakly_mixing = Flag::True;
    sys.is_sensitive = Flag::True;

    SystemSpec spec;
    spec.name = "three_branch";
    spec.system = std::move(sys);
    spec.hard_points = {Point::real1(0.0), Point::real1(1.0 / 3.0), Point::real1(0.5),
                        Point::real1(2.0 / 3.0), Point::real1(1.0)};
    spec.fixed_point_indices = {0, 2, 4};
    spec.with_scale = [](double c) { return make_three_branch_scaled(c); };
    return spec;
}

}  // namespace detail

inline SystemSpec make_three_branch() { return detail::make_three_branch_scaled(1.0); }

// ── surface system ───────────────────────────────────────────────────
// Rotational surface {(r cos φ, r sin φ, 8r(1-r)) : r ∈ [0,1]} with the
// ambient Euclidean metric, under (r, φ) → (2r - r², 2φ).  The radial
// coordinate is stored as u = 1 - r, which turns the radial map into
// u → u² — an exact squaring with no cancellation, preserving the
// identity 1 - (2r - r²) = (1 - r)² at full float fidelity.
// Point layout: [u, φ, x, y, z] with the ambient image cached.

inline Point surface_point(double u, double phi) {
    u = std::clamp(u, 0.0, 1.0);
    phi = detail::wrap_2pi(phi);
    const double r = 1.0 - u;
    return Point::realn({u, phi, r * std::cos(phi), r * std::sin(phi), 8.0 * u * r});
}

inline double surface_u(const Point& p) { return p.real().c[0]; }
inline double surface_r(const Point& p) { return 1.0 - p.real().c[0]; }
inline double surface_phi(const Point& p) { return p.real().c[1]; }

namespace detail {

inline SystemSpec make_surface_scaled(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be > 0");
    MetricSystem sys;
    sys.name = "surface_prop51";
    sys.scale = scale;
    const auto map = [](const Point& p) {
        const double u = p.real().c[0];
        double phi = 2.0 * p.real().c[1];
        if (phi >= kTwoPi) phi -= kTwoPi;
        return surface_point(u * u, phi);
    };
    sys.map_eval = map;
    const auto metric = [scale](const Point& A, const Point& B) {
        const auto& a = A.real().c;
        const auto& b = B.real().c;
        const double dx = a[2] - b[2];
        const double dy = a[3] - b[3];
        const double dz = a[4] - b[4];
        return scale * std::sqrt(dx * dx + dy * dy + dz * dz);
    };
    sys.metric = metric;
    sys.pair_sep_kernel = [map, metric](const Point& x, const Point& y, int64_t N,
                                        int64_t t0) {
        return separation_walk(map, metric, x, y, N, t0);
    };
    sys.cached_sep_kernel = [map, metric](std::span<const Point> xo, const Point& y,
                                          int64_t N, int64_t t0) {
        return separation_walk_cached(map, metric, xo, y, N, t0);
    };
    sys.uniform_sampler = [](Xoshiro256pp& rng, size_t count) {
        std::vector<Point> out;
        out.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            const double u = rng.uniform01();
            const double phi = kTwoPi * rng.uniform01();
            out.push_back(surface_point(u, phi));
        }
        return out;
    };
    sys.ball_sampler = [metric](Xoshiro256pp& rng, const Point& c, double delta,
                                size_t count) {
        const double u = c.real().c[0];
        const double phi = c.real().c[1];
        const auto probe_u = [&](double h) { return surface_point(u + h, phi); };
        const auto probe_phi = [&](double h) { return surface_point(u, phi + h); };
        const auto du_plus = [&](double h) { return metric(c, probe_u(h)); };
        const auto du_minus = [&](double h) { return metric(c, probe_u(-h)); };
        const auto dphi = [&](double h) { return metric(c, probe_phi(h)); };
        const double hu_p = bisect_step(du_plus, 1.0, delta);
        const double hu_m = bisect_step(du_minus, 1.0, delta);
        const double hphi = bisect_step(dphi, std::numbers::pi_v<double>, delta);

        std::vector<Point> out;
        out.reserve(count);
        bool have_boundary = false;
        const Point candidates[4] = {probe_u(hu_p), probe_u(-hu_m), probe_phi(hphi),
                                     probe_phi(-hphi)};
        for (const Point& p : candidates) {
            const double d = metric(c, p);
            if (d >= 0.5 * delta && d <= delta) {
                out.push_back(p);
                have_boundary = true;
                break;
            }
        }
        if (!have_boundary) out.push_back(c);

        while (out.size() < count) {
            bool placed = false;
            for (int attempt = 0; attempt < 128 && !placed; ++attempt) {
                const double du = -hu_m + rng.uniform01() * (hu_m + hu_p);
                const double dp = (2.0 * rng.uniform01() - 1.0) * hphi;
                const Point p = surface_point(u + du, phi + dp);
                if (metric(c, p) <= delta) {
                    out.push_back(p);
                    placed = true;
                }
            }
            if (!placed) out.push_back(c);
        }
        return out;
    };
    sys.canonicalize = [](const Point& p) {
        return surface_point(p.real().c[0], p.real().c[1]);
    };
    sys.known_diameter = std::nullopt;  // estimated; the bowl is not a ball
    sys.is_transitive = Flag::False;
    sys.is_minimal = Flag::False;
    sys.is_weakly_mixing = Flag::False;
    sys.is_sensitive = Flag::True;

    SystemSpec spec;
    spec.name = "surface_prop51";
    spec.system = std::move(sys);
    // Origin (the apex of everything at r=0), a point on the invariant
    // rim circle r=1, and a point on the widest circle of the bowl.
    spec.hard_points = {surface_point(1.0, 0.0), surface_point(0.0, 0.0),
                        surface_point(0.5, 0.0)};
    spec.fixed_point_indices = {0, 1};
    spec.with_scale = [](double c) { return make_surface_scaled(c); };
    return spec;
}

}  // namespace detail

inline SystemSpec make_surface_prop51() { return detail::make_surface_scaled(1.0); }

// ── tent map ─────────────────────────────────────────────────────────
// f(x) = 1 - |1 - 2x| on [0,1] over bit fractions: fold (complement
// when the top bit is set) then shift.  The fold drops one 2^-width
// term, far below every tolerance in use; 0 and the "10"-repeating
// point 2/3 are exactly fixed.

namespace detail {

inline SystemSpec make_tent_scaled(double scale, int words) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be > 0");
    MetricSystem sys;
    sys.name = "tent";
    sys.scale = scale;
    sys.max_horizon = static_cast<int64_t>(words) * 64 - 64;
    sys.map_eval = [](const Point& p) {
        Point q = p;
        BitFraction& b = q.frac();
        if (b.msb()) b.complement();
        b.shl1();
        return q;
    };
    sys.metric = [scale](const Point& a, const Point& b) {
        return scale * BitFraction::distance(a.frac(), b.frac());
    };
    const auto step = [](BitFraction& b) {
        if (b.msb())
            b.complement_shl1();
        else
            b.shl1();
    };
    const auto dist = [scale](const BitFraction& a, const BitFraction& b) {
        return scale * BitFraction::distance(a, b);
    };
    sys.pair_sep_kernel = [step, dist](const Point& x, const Point& y, int64_t N,
                                       int64_t t0) {
        if (x == y) return SeparationStats{};
        return separation_walk_state(step, dist, x.frac(), y.frac(), N, t0);
    };
    sys.cached_sep_kernel = [step, dist](std::span<const Point> xo, const Point& y,
                                         int64_t N, int64_t t0) {
        if (xo[0] == y) return SeparationStats{};
        const auto dist_at = [&](int64_t n, const BitFraction& b) {
            return dist(xo[static_cast<size_t>(n)].frac(), b);
        };
        return separation_walk_cached_state(step, dist_at, y.frac(), N, t0);
    };
    sys.uniform_sampler = [words](Xoshiro256pp& rng, size_t count) {
        std::vector<Point> out;
        out.reserve(count);
        for (size_t i = 0; i < count; ++i)
            out.push_back(Point::bits(BitFraction::random(rng, words)));
        return out;
    };
    sys.ball_sampler = [scale](Xoshiro256pp& rng, const Point& c, double delta,
                               size_t count) {
        return detail::bits_ball(scale, rng, c, delta, count);
    };
    sys.canonicalize = [](const Point& p) { return p; };
    sys.known_diameter = scale * 1.0;
    sys.is_transitive = Flag::True;
    sys.is_minimal = Flag::False;
    sys.is_weakly_mixing = Flag::True;
    sys.is_sensitive = Flag::True;

    SystemSpec spec;
    spec.name = "tent";
    spec.system = std::move(sys);
    spec.hard_points = {Point::bits(BitFraction::zeros(words)),
                        Point::bits(BitFraction::repeating("10", words))};
    spec.fixed_point_indices = {0, 1};
    spec.with_scale = [words](double c) { return make_tent_scaled(c, words); };
    return spec;
}

}  // namespace detail

inline SystemSpec make_tent(int words = 10) {
    return detail::make_tent_scaled(1.0, words);
}

// ── doubling map on the circle ───────────────────────────────────────
// f(x) = 2x mod 1 over bit fractions, arc metric min(|x-y|, 1-|x-y|).

namespace detail {

inline SystemSpec make_doubling_scaled(double scale, int words) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be > 0");
    MetricSystem sys;
    sys.name = "doubling";
    sys.scale = scale;
    sys.max_horizon = static_cast<int64_t>(words) * 64 - 64;
    sys.map_eval = [](const Point& p) {
        Point q = p;
        q.frac().shl1();
        return q;
    };
    sys.metric = [scale](const Point& a, const Point& b) {
        const double lin = BitFraction::distance(a.frac(), b.frac());
        return scale * std::min(lin, 1.0 - lin);
    };
    const auto step = [](BitFraction& b) { b.shl1(); };
    const auto dist = [scale](const BitFraction& a, const BitFraction& b) {
        const double lin = BitFraction::distance(a, b);
        return scale * std::min(lin, 1.0 - lin);
    };
    sys.pair_sep_kernel = [step, dist](const Point& x, const Point& y, int64_t N,
                                       int64_t t0) {
        if (x == y) return SeparationStats{};
        return separation_walk_state(step, dist, x.frac(), y.frac(), N, t0);
    };
    sys.cached_sep_kernel = [step, dist](std::span<const Point> xo, const Point& y,
                                         int64_t N, int64_t t0) {
        if (xo[0] == y) return SeparationStats{};
        const auto dist_at = [&](int64_t n, const BitFraction& b) {
            return dist(xo[static_cast<size_t>(n)].frac(), b);
        };
        return separation_walk_cached_state(step, dist_at, y.frac(), N, t0);
    };
    sys.uniform_sampler = [words](Xoshiro256pp& rng, size_t count) {
        std::vector<Point> out;
        out.reserve(count);
        for (size_t i = 0; i < count; ++i)
            out.push_back(Point::bits(BitFraction::random(rng, words)));
        return out;
    };
    sys.ball_sampler = [scale](Xoshiro256pp& rng, const Point& c, double delta,
                               size_t count) {
        return detail::bits_ball(scale, rng, c, delta, count);
    };
    sys.canonicalize = [](const Point& p) { return p; };
    sys.known_diameter = scale * 0.5;
    sys.is_transitive = Flag::True;
    sys.is_minimal = Flag::False;
    sys.is_weakly_mixing = Flag::True;
    sys.is_sensitive = Flag::True;

    SystemSpec spec;
    spec.name = "doubling";
    spec.system = std::move(sys);
    spec.hard_points = {Point::bits(BitFraction::zeros(words))};
    spec.fixed_point_indices = {0};
    spec.with_scale = [words](double c) { return make_doubling_scaled(c, words); };
    return spec;
}

}  // namespace detail

inline SystemSpec make_doubling_circle(int words = 10) {
    return detail::make_doubling_scaled(1.0, words);
}

// ── circle rotation ──────────────────────────────────────────────────

namespace detail {

inline SystemSpec make_rotation_scaled(double alpha, double scale) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("rotation: alpha must be in (0,1)");
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be > 0");
    MetricSystem sys;
    sys.name = "rotation";
    sys.scale = scale;
    sys.map_eval = [alpha](const Point& p) {
        double x = p.x0() + alpha;
        if (x >= 1.0) x -= 1.0;
        return Point::real1(x);
    };
    const auto metric = [scale](const Point& a, const Point& b) {
        const double lin = std::fabs(a.x0() - b.x0());
        return scale * std::min(lin, 1.0 - lin);
    };
    sys.metric = metric;
    const auto step = [alpha](double& v) {
        double x = v + alpha;
        if (x >= 1.0) x -= 1.0;
        v = x;
    };
    const auto dist = [scale](double a, double b) {
        const double lin = std::fabs(a - b);
        return scale * std::min(lin, 1.0 - lin);
    };
    sys.pair_sep_kernel = [step, dist](const Point& x, const Point& y, int64_t N,
                                       int64_t t0) {
        if (x == y) return SeparationStats{};
        return separation_walk_state(step, dist, x.x0(), y.x0(), N, t0);
    };
    sys.cached_sep_kernel = [step, dist](std::span<const Point> xo, const Point& y,
                                         int64_t N, int64_t t0) {
        if (xo[0] == y) return SeparationStats{};
        const auto dist_at = [&](int64_t n, double b) {
            return dist(xo[static_cast<size_t>(n)].x0(), b);
        };
        return separation_walk_cached_state(step, dist_at, y.x0(), N, t0);
    };
    sys.uniform_sampler = [](Xoshiro256pp& rng, size_t count) {
        std::vector<Point> out;
        out.reserve(count);
        for (size_t i = 0; i < count; ++i) out.push_back(Point::real1(rng.uniform01()));
        return out;
    };
    sys.ball_sampler = [metric](Xoshiro256pp& rng, const Point& c, double delta,
                                size_t count) {
        const double x = c.x0();
        const auto probe = [x](double h) { return Point::real1(detail::wrap01(x + h)); };
        return detail::line_ball(metric, probe, rng, c, delta, count, 0.5, 0.5);
    };
    sys.canonicalize = [](const Point& p) { return Point::real1(detail::wrap01(p.x0())); };
    sys.known_diameter = scale * 0.5;
    sys.is_transitive = Flag::True;
    sys.is_minimal = Flag::True;
    sys.is_weakly_mixing = Flag::False;
    sys.is_sensitive = Flag::False;

    SystemSpec spec;
    spec.name = "rotation";
    spec.params = "alpha=" + std::to_string(alpha);
    spec.system = std::move(sys);
    spec.hard_points = {Point::real1(0.0)};
    spec.fixed_point_indices = {};
    spec.with_scale = [alpha](double c) { return make_rotation_scaled(alpha, c); };
    return spec;
}

}  // namespace detail

inline SystemSpec make_rotation(double alpha) {
    return detail::make_rotation_scaled(alpha, 1.0);
}

// ── full shift ───────────────────────────────────────────────────────
// Words of fixed working length W over {0..k-1}; d(x,y) = 2^-(first
// difference).  The shift only advances an offset into an immutable
// shared buffer; configurations whose horizon would walk past
// W - margin are rejected up front rather than padded, since silent
// padding would bias separation estimates downward.

namespace detail {

inline constexpr int kShiftMargin = 64;

inline SystemSpec make_full_shift_scaled(int k, int word_length, double scale) {
    if (k < 2 || k > 255)
        throw std::invalid_argument("full_shift: alphabet size must be in [2,255]");
    if (word_length < 2 * kShiftMargin || word_length > (1 << 20))
        throw std::invalid_argument("full_shift: working length out of range");
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be > 0");

    const auto k16 = static_cast<uint16_t>(k);
    MetricSystem sys;
    sys.name = "full_shift";
    sys.scale = scale;
    sys.max_horizon = word_length - kShiftMargin;
    sys.map_eval = [](const Point& p) {
        Point q = p;
        SymbolWord& w = q.sym();
        if (w.length() <= 1)
            throw std::runtime_error("full_shift: word exhausted; increase working length");
        w.offset += 1;
        return q;
    };
    const auto word_dist = [scale](const SymbolWord& a, const SymbolWord& b) {
        const uint32_t L = std::min(a.length(), b.length());
        for (uint32_t i = 0; i < L; ++i)
            if (a.at(i) != b.at(i)) return scale * std::ldexp(1.0, -static_cast<int>(i));
        return 0.0;
    };
    sys.metric = [word_dist](const Point& A, const Point& B) {
        return word_dist(A.sym(), B.sym());
    };
    // Hand-rolled walks: the shift step is just an offset bump on a
    // shared immutable buffer, so walking local words sidesteps the
    // per-step Point copies; the distances computed are the same calls
    // in the same order as the generic walk.
    sys.pair_sep_kernel = [word_dist](const Point& x, const Point& y, int64_t N,
                                      int64_t t0) {
        SeparationStats st;
        if (x == y) return st;
        SymbolWord aw = x.sym();
        SymbolWord bw = y.sym();
        for (int64_t n = 0;; ++n) {
            const double d = word_dist(aw, bw);
            st.full_max = std::max(st.full_max, d);
            if (n >= 1) st.strict_max = std::max(st.strict_max, d);
            if (n >= t0) st.tail_max = std::max(st.tail_max, d);
            if (n == N) break;
            if (aw.length() <= 1 || bw.length() <= 1)
                throw std::runtime_error(
                    "full_shift: word exhausted; increase working length");
            aw.offset += 1;
            bw.offset += 1;
        }
        return st;
    };
    sys.cached_sep_kernel = [word_dist](std::span<const Point> xo, const Point& y,
                                        int64_t N, int64_t t0) {
        SeparationStats st;
        if (xo[0] == y) return st;
        SymbolWord bw = y.sym();
        for (int64_t n = 0;; ++n) {
            const double d = word_dist(xo[static_cast<size_t>(n)].sym(), bw);
            st.full_max = std::max(st.full_max, d);
            if (n >= 1) st.strict_max = std::max(st.strict_max, d);
            if (n >= t0) st.tail_max = std::max(st.tail_max, d);
            if (n == N) break;
            if (bw.length() <= 1)
                throw std::runtime_error(
                    "full_shift: word exhausted; increase working length");
            bw.offset += 1;
        }
        return st;
    };
    sys.uniform_sampler = [k16, word_length](Xoshiro256pp& rng, size_t count) {
        std::vector<Point> out;
        out.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            std::vector<uint8_t> s(static_cast<size_t>(word_length));
            for (auto& sym : s) sym = static_cast<uint8_t>(rng.below(k16));
            out.push_back(Point::word(std::move(s), k16));
        }
        return out;
    };
    sys.ball_sampler = [scale](Xoshiro256pp& rng, const Point& c, double delta,
                               size_t count) {
        return detail::word_ball(scale, rng, c, delta, count);
    };
    sys.canonicalize = [](const Point& p) { return p; };
    sys.known_diameter = scale * 1.0;
    sys.is_transitive = Flag::True;
    sys.is_minimal = Flag::False;
    sys.is_weakly_mixing = Flag::True;
    sys.is_sensitive = Flag::True;

    SystemSpec spec;
    spec.name = "full_shift";
    spec.params = "k=" + std::to_string(k);
    spec.system = std::move(sys);
    spec.hard_points = {
        Point::word(std::vector<uint8_t>(static_cast<size_t>(word_length), 0), k16)};
    spec.fixed_point_indices = {0};
    spec.with_scale = [k, word_length](double c) {
        return make_full_shift_scaled(k, word_length, c);
    };
    return spec;
}

}  // namespace detail

inline SystemSpec make_full_shift(int k, int word_length = 1024) {
    return detail::make_full_shift_scaled(k, word_length, 1.0);
}

// Display identifier as accepted by parse_system.
inline std::string registry_id(const SystemSpec& spec) {
    if (spec.name == "rotation" || spec.name == "full_shift") {
        const auto pos = spec.params.find('=');
        return spec.name + ":" + spec.params.substr(pos + 1);
    }
    if (spec.name == "product") return "product:" + spec.params;
    return spec.name;
}

// ── product system ───────────────────────────────────────────────────
// (X×Y, f×g) with the max metric, so the delta-ball is exactly the
// product of the factor balls.

inline SystemSpec make_product(const SystemSpec& a, const SystemSpec& b) {
    MetricSystem sys;
    sys.name = "product";
    sys.scale = a.system.scale;
    sys.max_horizon = std::min(a.system.max_horizon, b.system.max_horizon);

    const auto map_a = a.system.map_eval;
    const auto map_b = b.system.map_eval;
    sys.map_eval = [map_a, map_b](const Point& p) {
        const auto& parts = *p.tup().parts;
        return Point::tuple({map_a(parts[0]), map_b(parts[1])});
    };

    const auto metric_a = a.system.metric;
    const auto metric_b = b.system.metric;
    sys.metric = [metric_a, metric_b](const Point& P, const Point& Q) {
        const auto& p = *P.tup().parts;
        const auto& q = *Q.tup().parts;
        return std::max(metric_a(p[0], q[0]), metric_b(p[1], q[1]));
    };

    const auto uni_a = a.system.uniform_sampler;
    const auto uni_b = b.system.uniform_sampler;
    sys.uniform_sampler = [uni_a, uni_b](Xoshiro256pp& rng, size_t count) {
        const std::vector<Point> xs = uni_a(rng, count);
        const std::vector<Point> ys = uni_b(rng, count);
        std::vector<Point> out;
        out.reserve(count);
        for (size_t i = 0; i < count; ++i) out.push_back(Point::tuple({xs[i], ys[i]}));
        return out;
    };

    const auto ball_a = a.system.ball_sampler;
    const auto ball_b = b.system.ball_sampler;
    sys.ball_sampler = [ball_a, ball_b](Xoshiro256pp& rng, const Point& c, double delta,
                                        size_t count) {
        const auto& parts = *c.tup().parts;
        const std::vector<Point> xs = ball_a(rng, parts[0], delta, count);
        const std::vector<Point> ys = ball_b(rng, parts[1], delta, count);
        std::vector<Point> out;
        out.reserve(count);
        for (size_t i = 0; i < count; ++i) out.push_back(Point::tuple({xs[i], ys[i]}));
        return out;
    };

    const auto canon_a = a.system.canonicalize;
    const auto canon_b = b.system.canonicalize;
    sys.canonicalize = [canon_a, canon_b](const Point& p) {
        const auto& parts = *p.tup().parts;
        return Point::tuple({canon_a(parts[0]), canon_b(parts[1])});
    };

    if (a.system.known_diameter && b.system.known_diameter)
        sys.known_diameter = std::max(*a.system.known_diameter, *b.system.known_diameter);

    const bool both_wm = flag_true(a.system.is_weakly_mixing) &&
                         flag_true(b.system.is_weakly_mixing);
    sys.is_weakly_mixing = both_wm ? Flag::True : Flag::Unknown;
    sys.is_transitive = both_wm ? Flag::True : Flag::Unknown;
    sys.is_sensitive = (flag_true(a.system.is_sensitive) || flag_true(b.system.is_sensitive))
                           ? Flag::True
                           : Flag::Unknown;
    sys.is_minimal = Flag::Unknown;

    SystemSpec spec;
    spec.name = "product";
    spec.params = registry_id(a) + "," + registry_id(b);
    spec.system = std::move(sys);
    for (size_t i = 0; i < a.hard_points.size(); ++i) {
        for (size_t j = 0; j < b.hard_points.size(); ++j) {
            const bool fa = std::find(a.fixed_point_indices.begin(),
                                      a.fixed_point_indices.end(),
                                      i) != a.fixed_point_indices.end();
            const bool fb = std::find(b.fixed_point_indices.begin(),
                                      b.fixed_point_indices.end(),
                                      j) != b.fixed_point_indices.end();
            if (fa && fb) spec.fixed_point_indices.push_back(spec.hard_points.size());
            spec.hard_points.push_back(Point::tuple({a.hard_points[i], b.hard_points[j]}));
        }
    }
    const SystemSpec a_copy = a;
    const SystemSpec b_copy = b;
    spec.with_scale = [a_copy, b_copy](double c) {
        return make_product(a_copy.with_scale(c), b_copy.with_scale(c));
    };
    return spec;
}

// ── registry ─────────────────────────────────────────────────────────

inline std::vector<SystemSpec> default_registry() {
    std::vector<SystemSpec> out;
    out.push_back(make_three_branch());
    out.push_back(make_surface_prop51());
    out.push_back(make_tent());
    out.push_back(make_doubling_circle());
    out.push_back(make_rotation(0.381966));
    out.push_back(make_full_shift(2));
    return out;
}

// Resolves "three_branch", "surface_prop51", "tent", "doubling",
// "rotation:<alpha>", "full_shift:<k>", "product:<a>,<b>".
inline SystemSpec parse_system(const std::string& id) {
    if (id == "three_branch") return make_three_branch();
    if (id == "surface_prop51") return make_surface_prop51();
    if (id == "tent") return make_tent();
    if (id == "doubling") return make_doubling_circle();
    if (id.rfind("rotation:", 0) == 0) {
        const std::string arg = id.substr(9);
        size_t used = 0;
        double alpha = 0.0;
        try {
            alpha = std::stod(arg, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("rotation: cannot parse angle '" + arg + "'");
        }
        if (used != arg.size())
            throw std::invalid_argument("rotation: cannot parse angle '" + arg + "'");
        return make_rotation(alpha);
    }
    if (id.rfind("full_shift:", 0) == 0) {
        const std::string arg = id.substr(11);
        size_t used = 0;
        int k = 0;
        try {
            k = std::stoi(arg, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("full_shift: cannot parse alphabet '" + arg + "'");
        }
        if (used != arg.size())
            throw std::invalid_argument("full_shift: cannot parse alphabet '" + arg + "'");
        return make_full_shift(k);
    }
    if (id.rfind("product:", 0) == 0) {
        const std::string rest = id.substr(8);
        const size_t comma = rest.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("product: expected 'product:<a>,<b>'");
        return make_product(parse_system(rest.substr(0, comma)),
                            parse_system(rest.substr(comma + 1)));
    }
    throw std::invalid_argument("unknown system '" + id + "'");
}

}  // namespace lyapnum
