// Representation, metric, and orbit-walk foundations.  Expected values
// are derived by hand from the definitions (dyadic arithmetic, geometric
// series, small closed-form orbits) and frozen here as exact doubles.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "lyapnum/bitfrac.hpp"
#include "lyapnum/estimator.hpp"
#include "lyapnum/orbit.hpp"
#include "lyapnum/point.hpp"
#include "lyapnum/rng.hpp"
#include "lyapnum/sampling.hpp"
#include "lyapnum/separation.hpp"
#include "lyapnum/zoo.hpp"

using namespace lyapnum;

namespace {

void require_same_stats(const SeparationStats& a, const SeparationStats& b) {
    REQUIRE(a.full_max == b.full_max);
    REQUIRE(a.strict_max == b.strict_max);
    REQUIRE(a.tail_max == b.tail_max);
}

}  // namespace

TEST_CASE("rng streams are deterministic and bounded") {
    Xoshiro256pp a = derive_rng(42, 3, 7);
    Xoshiro256pp b = derive_rng(42, 3, 7);
    for (int i = 0; i < 16; ++i) REQUIRE(a.next() == b.next());

    // distinct stream labels decorrelate immediately
    Xoshiro256pp c = derive_rng(42, 3, 8);
    Xoshiro256pp d = derive_rng(42, 4, 7);
    Xoshiro256pp e = derive_rng(43, 3, 7);
    Xoshiro256pp base = derive_rng(42, 3, 7);
    const uint64_t first = base.next();
    REQUIRE(c.next() != first);
    REQUIRE(d.next() != first);
    REQUIRE(e.next() != first);

    Xoshiro256pp r(123);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(r.below(7) < 7);
        REQUIRE(r.below(1) == 0);
    }
}

TEST_CASE("bit fractions convert exactly to and from doubles") {
    SECTION("dyadic values are stored bit for bit") {
        const BitFraction b = BitFraction::from_double(0.375, 2);
        REQUIRE(b.bit(0) == false);  // 0.375 = 0.011 in binary
        REQUIRE(b.bit(1) == true);
        REQUIRE(b.bit(2) == true);
        REQUIRE(b.bit(3) == false);
        REQUIRE(b.to_double() == 0.375);
        REQUIRE(BitFraction::from_double(std::ldexp(1.0, -60), 2).to_double() ==
                std::ldexp(1.0, -60));
    }
    SECTION("every 53-bit double in [0,1) round-trips") {
        Xoshiro256pp rng(7);
        for (int i = 0; i < 200; ++i) {
            const double d = rng.uniform01();
            REQUIRE(BitFraction::from_double(d, 2).to_double() == d);
        }
    }
    SECTION("values >= 1 clamp to the top of the range") {
        REQUIRE(BitFraction::from_double(1.0, 2).to_double() == 1.0);
        REQUIRE(BitFraction::from_double(7.5, 2).to_double() == 1.0);
    }
    SECTION("negative input is rejected") {
        REQUIRE_THROWS_AS(BitFraction::from_double(-0.25, 2), std::invalid_argument);
    }
    SECTION("width bounds are enforced") {
        REQUIRE_THROWS_AS(BitFraction::zeros(0), std::invalid_argument);
        REQUIRE_THROWS_AS(BitFraction::zeros(17), std::invalid_argument);
    }
}

TEST_CASE("repeating bit patterns hit their closed-form values") {
    // geometric series: 0.010101... = 1/3, 0.101010... = 2/3,
    // 0.00110011... = 1/5; each rounds to the nearest double.
    REQUIRE(BitFraction::repeating("01", 16).to_double() == 1.0 / 3.0);
    REQUIRE(BitFraction::repeating("10", 16).to_double() == 2.0 / 3.0);
    REQUIRE(BitFraction::repeating("0011", 16).to_double() == 1.0 / 5.0);
    REQUIRE(BitFraction::repeating("1", 4).to_double() == 1.0);
    REQUIRE(BitFraction::zeros(4).to_double() == 0.0);
    REQUIRE_THROWS_AS(BitFraction::repeating("", 4), std::invalid_argument);
}

TEST_CASE("bit-fraction distance is exact across word boundaries") {
    SECTION("single flipped bit g has distance 2^-(g+1)") {
        Xoshiro256pp rng(11);
        const BitFraction a = BitFraction::random(rng, 16);
        for (int g : {0, 5, 63, 64, 100, 127, 128, 200, 500, 1023}) {
            BitFraction b = a;
            b.flip_bit(g);
            REQUIRE(BitFraction::distance(a, b) == std::ldexp(1.0, -(g + 1)));
            REQUIRE(BitFraction::distance(b, a) == std::ldexp(1.0, -(g + 1)));
        }
    }
    SECTION("borrow propagates through a long run of ones") {
        // a = 0.1000...0, b = 0.0111...1 differ by exactly 2^-(64w)
        BitFraction a = BitFraction::zeros(2);
        a.flip_bit(0);
        BitFraction b = BitFraction::zeros(2);
        for (int g = 1; g < 128; ++g) b.flip_bit(g);
        REQUIRE(BitFraction::distance(a, b) == std::ldexp(1.0, -128));
    }
    SECTION("identical fractions have distance zero") {
        Xoshiro256pp rng(13);
        const BitFraction a = BitFraction::random(rng, 10);
        REQUIRE(BitFraction::distance(a, a) == 0.0);
    }
    SECTION("width mismatch is rejected") {
        REQUIRE_THROWS_AS(
            BitFraction::distance(BitFraction::zeros(2), BitFraction::zeros(3)),
            std::invalid_argument);
    }
    SECTION("symmetry and triangle inequality on random values") {
        Xoshiro256pp rng(17);
        for (int i = 0; i < 100; ++i) {
            const BitFraction a = BitFraction::random(rng, 4);
            const BitFraction b = BitFraction::random(rng, 4);
            const BitFraction c = BitFraction::random(rng, 4);
            const double ab = BitFraction::distance(a, b);
            REQUIRE(ab == BitFraction::distance(b, a));
            REQUIRE(ab <= BitFraction::distance(a, c) + BitFraction::distance(c, b) +
                              1e-16);
        }
    }
    SECTION("distance agrees with the difference of the double values") {
        // for fractions built from 53-bit doubles the subtraction is
        // representable, so the metric must reproduce it exactly
        Xoshiro256pp rng(19);
        for (int i = 0; i < 100; ++i) {
            const double x = rng.uniform01();
            const double y = rng.uniform01();
            const BitFraction a = BitFraction::from_double(x, 2);
            const BitFraction b = BitFraction::from_double(y, 2);
            REQUIRE(BitFraction::distance(a, b) == std::fabs(x - y));
        }
    }
}

TEST_CASE("fused complement-shift equals the two-pass form bit for bit") {
    Xoshiro256pp rng(23);
    for (int w = 1; w <= 16; ++w) {
        for (int trial = 0; trial < 50; ++trial) {
            const BitFraction b = BitFraction::random(rng, w);
            BitFraction two_pass = b;
            two_pass.complement();
            two_pass.shl1();
            BitFraction fused = b;
            fused.complement_shl1();
            REQUIRE(fused == two_pass);
        }
    }
}

TEST_CASE("shift and tail randomization preserve the pinned prefix") {
    Xoshiro256pp rng(29);
    SECTION("shl1 is multiplication by two mod one") {
        for (int i = 0; i < 50; ++i) {
            const double x = rng.uniform01() * 0.5;  // headroom so 2x < 1
            BitFraction b = BitFraction::from_double(x, 2);
            b.shl1();
            REQUIRE(b.to_double() == 2.0 * x);
        }
    }
    SECTION("randomize_tail keeps bits above the cut") {
        for (int cut : {1, 7, 64, 65, 130}) {
            const BitFraction a = BitFraction::random(rng, 4);
            BitFraction b = a;
            b.randomize_tail(rng, cut);
            for (int g = 0; g < cut; ++g) REQUIRE(a.bit(g) == b.bit(g));
            REQUIRE(BitFraction::distance(a, b) <= std::ldexp(1.0, -cut));
        }
    }
}

TEST_CASE("ball bit index finds the coarsest pinned prefix") {
    REQUIRE(ball_bit_index(1.0, 0.5, 64) == 1);
    REQUIRE(ball_bit_index(1.0, 0.1, 64) == 4);    // 2^-4 = 0.0625
    REQUIRE(ball_bit_index(1.0, 0.0625, 64) == 4); // boundary inclusive
    REQUIRE(ball_bit_index(3.7, 0.1, 64) == 6);    // 3.7/64 <= 0.1 < 3.7/32
    REQUIRE(ball_bit_index(1.0, 1e-300, 64) == -1);
}

TEST_CASE("bisection locates the largest step inside the radius") {
    const auto ident = [](double h) { return h; };
    const double r = bisect_step(ident, 1.0, 0.3);
    REQUIRE(r <= 0.3);
    REQUIRE(r >= 0.3 - 1e-15);
    REQUIRE(bisect_step(ident, 1.0, 2.0) == 1.0);  // whole range qualifies
}

TEST_CASE("orbit iteration composes the map") {
    const SystemSpec spec = make_three_branch();
    const MetricSystem& sys = spec.system;
    const Point x = Point::real1(0.11);
    const std::vector<Point> orbit = orbit_segment(sys, x, 12);
    REQUIRE(orbit.size() == 13);
    REQUIRE(orbit[0] == x);
    for (int n = 0; n <= 12; ++n) REQUIRE(iterate(sys, x, n) == orbit[static_cast<size_t>(n)]);
    double v = 0.11;
    for (int n = 0; n < 12; ++n) v = three_branch_map(v);
    REQUIRE(orbit[12].x0() == v);
    REQUIRE_THROWS_AS(iterate(sys, x, -1), std::invalid_argument);
    REQUIRE_THROWS_AS(orbit_segment(sys, x, -1), std::invalid_argument);
}

TEST_CASE("tail window start index rounds up") {
    REQUIRE(tail_start(10, 0.5) == 5);
    REQUIRE(tail_start(9, 0.5) == 5);
    REQUIRE(tail_start(500, 0.5) == 250);
    REQUIRE(tail_start(10, 0.05) == 1);
    REQUIRE(tail_start(1, 0.3) == 1);
}

TEST_CASE("separation walk on two fixed points is constant") {
    // tent holds 0 and the 10-repeating point (2/3) fixed, so every
    // step sees the same distance
    const SystemSpec spec = make_tent();
    const Point x = Point::bits(BitFraction::repeating("10", 10));
    const Point y = Point::bits(BitFraction::zeros(10));
    const SeparationStats st = separation_stats(spec.system, x, y, 10, 5);
    REQUIRE(st.full_max == 2.0 / 3.0);
    REQUIRE(st.strict_max == 2.0 / 3.0);
    REQUIRE(st.tail_max == 2.0 / 3.0);
}

TEST_CASE("piecewise-linear walk triples the deviation each step") {
    // from the fixed point 1/2, a dyadic offset h stays exact: the
    // deviation is 3^n h while the middle branch holds, and the two
    // closed-form escape values are exact dyadics as well
    const SystemSpec spec = make_three_branch();
    const Point x = Point::real1(0.5);
    const Point y = Point::real1(0.5 + std::ldexp(1.0, -10));

    const SeparationStats st5 = separation_stats(spec.system, x, y, 5, 3);
    REQUIRE(st5.full_max == 243.0 / 1024.0);
    REQUIRE(st5.strict_max == 243.0 / 1024.0);
    REQUIRE(st5.tail_max == 243.0 / 1024.0);

    REQUIRE(d_f_finite(spec.system, x, y, 4) == 81.0 / 1024.0);

    // one more step leaves the middle branch: 269/1024 -> 807/1024
    const SeparationStats st6 = separation_stats(spec.system, x, y, 6, 7);
    REQUIRE(st6.full_max == 295.0 / 1024.0);
    REQUIRE(st6.tail_max == 0.0);  // window [7,6] is empty
}

TEST_CASE("doubling walk on periodic points hits exact rational distances") {
    // 1/3 has period 2 and 1/5 period 4 under doubling; the arc
    // distances cycle through k/15
    const SystemSpec spec = make_doubling_circle(16);
    const Point x = Point::bits(BitFraction::repeating("01", 16));    // 1/3
    const Point y = Point::bits(BitFraction::repeating("0011", 16));  // 1/5

    const SeparationStats st = separation_stats(spec.system, x, y, 3, 2);
    REQUIRE(st.full_max == 7.0 / 15.0);
    REQUIRE(st.strict_max == 7.0 / 15.0);
    REQUIRE(st.tail_max == 7.0 / 15.0);

    REQUIRE(d_f_finite(spec.system, x, y, 0) == 2.0 / 15.0);
    REQUIRE(d_f_finite(spec.system, x, y, 1) == 4.0 / 15.0);
    REQUIRE(tail_sep(spec.system, x, y, 3, 0.9) == 1.0 / 15.0);  // window [3,3]
}

TEST_CASE("rotation by a dyadic angle separates nothing") {
    const SystemSpec spec = make_rotation(0.5);
    Xoshiro256pp rng(31);
    for (int i = 0; i < 20; ++i) {
        // points on a coarse dyadic grid stay on it, so the isometry is
        // exact in floating point as well
        const double x = static_cast<double>(rng.below(1u << 20)) * 0x1.0p-21;
        const double y = static_cast<double>(rng.below(1u << 20)) * 0x1.0p-21;
        const Point px = Point::real1(x);
        const Point py = Point::real1(y);
        const double d0 = spec.system.metric(px, py);
        const SeparationStats st = separation_stats(spec.system, px, py, 20, 10);
        REQUIRE(st.full_max == d0);
        REQUIRE(st.strict_max == (x == y ? 0.0 : d0));
        REQUIRE(st.tail_max == d0);
    }
}

TEST_CASE("surface orbit near the apex climbs the bowl and lands on the rim") {
    const SystemSpec spec = make_surface_prop51();
    const Point apex = surface_point(1.0, 0.0);  // the origin, fixed
    const Point near = surface_point(1.0 - std::ldexp(1.0, -8), 0.0);
    const SeparationStats st = separation_stats(spec.system, apex, near, 500, 250);
    // the orbit passes the widest bulge (sup distance from the origin
    // is about 2.0636) and converges to the rim circle at distance 1
    REQUIRE(st.full_max >= 1.9);
    REQUIRE(st.full_max <= 2.0636);
    REQUIRE(st.tail_max == 1.0);
}

TEST_CASE("window invariants hold on every registry system") {
    for (const SystemSpec& spec : default_registry()) {
        INFO("system " << registry_id(spec));
        const MetricSystem& sys = spec.system;
        Xoshiro256pp rng(37);
        const std::vector<Point> pts = sys.uniform_sampler(rng, 8);
        const int64_t N = 100;
        for (size_t i = 0; i + 1 < pts.size(); i += 2) {
            const Point& x = pts[i];
            const Point& y = pts[i + 1];
            const SeparationStats st = separation_stats(sys, x, y, N, 50);
            REQUIRE(st.strict_max <= st.full_max);
            REQUIRE(st.tail_max <= st.full_max);
            REQUIRE(st.full_max >= sys.metric(x, y));

            // symmetry, exact
            require_same_stats(st, separation_stats(sys, y, x, N, 50));

            // longer window can only grow the maxima
            const SeparationStats st_short = separation_stats(sys, x, y, 50, 50);
            REQUIRE(st_short.full_max <= st.full_max);

            // empty tail window
            REQUIRE(separation_stats(sys, x, y, N, N + 1).tail_max == 0.0);

            // identical points short-circuit to zero
            const SeparationStats self = separation_stats(sys, x, x, N, 50);
            REQUIRE(self.full_max == 0.0);
            REQUIRE(self.tail_max == 0.0);

            // the cached walk is the same computation
            const std::vector<Point> xo = orbit_segment(sys, x, N);
            require_same_stats(st, separation_stats_cached(sys, xo, y, N, 50));
        }
    }
}

TEST_CASE("fast kernels match the generic walk bit for bit") {
    for (const SystemSpec& spec : default_registry()) {
        INFO("system " << registry_id(spec));
        MetricSystem plain = spec.system;
        plain.pair_sep_kernel = nullptr;
        plain.cached_sep_kernel = nullptr;
        const MetricSystem& fast = spec.system;
        const int64_t N = 100;
        const int64_t t0 = 37;

        Xoshiro256pp rng(41);
        std::vector<Point> pts = fast.uniform_sampler(rng, 6);
        for (const Point& h : spec.hard_points) pts.push_back(fast.canonicalize(h));
        // ball samples probe the prefix-pinned representations too
        std::vector<Point> balls =
            fast.ball_sampler(rng, pts[0], 0.01, 4);
        pts.insert(pts.end(), balls.begin(), balls.end());

        for (size_t i = 0; i < pts.size(); ++i) {
            const size_t j = (i + 1) % pts.size();
            require_same_stats(separation_stats(fast, pts[i], pts[j], N, t0),
                               separation_stats(plain, pts[i], pts[j], N, t0));
            const std::vector<Point> xo = orbit_segment(fast, pts[i], N);
            require_same_stats(separation_stats_cached(fast, xo, pts[j], N, t0),
                               separation_stats_cached(plain, xo, pts[j], N, t0));
        }
    }

    SECTION("tent: complement pairs collapse to the same image either way") {
        // x and its bitwise complement map to the same point, so from
        // step 1 on the separation must be exactly zero on both paths
        const SystemSpec spec = make_tent();
        MetricSystem plain = spec.system;
        plain.pair_sep_kernel = nullptr;
        plain.cached_sep_kernel = nullptr;
        Xoshiro256pp rng(43);
        const BitFraction xb = BitFraction::random(rng, 10);
        BitFraction yb = xb;
        yb.complement();
        const Point x = Point::bits(xb);
        const Point y = Point::bits(yb);
        const SeparationStats fast = separation_stats(spec.system, x, y, 500, 250);
        const SeparationStats gen = separation_stats(plain, x, y, 500, 250);
        require_same_stats(fast, gen);
        REQUIRE(fast.strict_max == 0.0);
        REQUIRE(fast.tail_max == 0.0);
        REQUIRE(fast.full_max == spec.system.metric(x, y));
    }
}

TEST_CASE("diameter sampling respects known bounds") {
    SECTION("bounded spaces never exceed their exact diameter") {
        for (const SystemSpec& spec : default_registry()) {
            if (!spec.system.known_diameter) continue;
            INFO("system " << registry_id(spec));
            const double est = diam_estimate(spec.system, 256, 42);
            REQUIRE(est <= *spec.system.known_diameter);
            REQUIRE(est >= 0.8 * *spec.system.known_diameter);
        }
    }
    SECTION("words differing at the first symbol realize the full diameter") {
        const SystemSpec spec = make_full_shift(2);
        REQUIRE(diam_estimate(spec.system, 64, 42) == 1.0);
    }
    SECTION("the bowl is wider than it is deep") {
        const SystemSpec spec = make_surface_prop51();
        const double est = diam_estimate(spec.system, 512, 42);
        REQUIRE(est >= 2.3);
        REQUIRE(est <= 2.5146);  // rim-to-opposite-bulge upper bound
    }
    REQUIRE_THROWS_AS(diam_estimate(make_tent().system, 1, 42),
                      std::invalid_argument);
}

TEST_CASE("orbit radius from a fixed point reflects local expansion") {
    SECTION("tent orbits from near zero reach almost the whole interval") {
        const SystemSpec spec = make_tent();
        const double r = radius_f_finite(spec.system,
                                         Point::bits(BitFraction::zeros(10)), 0.01,
                                         100, 40, 7);
        REQUIRE(r >= 0.9);
        REQUIRE(r <= 1.0);
    }
    SECTION("bowl orbits from near the apex top out below the bulge bound") {
        const SystemSpec spec = make_surface_prop51();
        const double r = radius_f_finite(spec.system, surface_point(1.0, 0.0), 0.05,
                                         500, 64, 7);
        REQUIRE(r >= 1.9);
        REQUIRE(r <= 2.0636);
    }
    SECTION("rotations never expand the initial offset") {
        const SystemSpec spec = make_rotation(0.381966);
        const double delta = 0.01;
        const double r = radius_f_finite(spec.system, Point::real1(0.25), delta, 200,
                                         40, 7);
        // each step rounds x + alpha mod 1, so the offset can drift by a
        // few last-place units over the window; anything beyond that
        // would be genuine expansion
        REQUIRE(r <= delta * (1.0 + 1e-12));
        REQUIRE(r >= 0.5 * delta);  // the boundary probe is in the sample
    }
}

TEST_CASE("rescaled metrics multiply every distance exactly") {
    const double c = 3.7;
    for (const SystemSpec& spec : default_registry()) {
        INFO("system " << registry_id(spec));
        const SystemSpec scaled = spec.with_scale(c);
        Xoshiro256pp rng(47);
        const std::vector<Point> pts = spec.system.uniform_sampler(rng, 10);
        for (size_t i = 0; i + 1 < pts.size(); i += 2) {
            const double base = spec.system.metric(pts[i], pts[i + 1]);
            REQUIRE(scaled.system.metric(pts[i], pts[i + 1]) == c * base);
        }
        REQUIRE(scaled.system.scale == c);
        if (spec.system.known_diameter)
            REQUIRE(*scaled.system.known_diameter == c * *spec.system.known_diameter);
    }
}
