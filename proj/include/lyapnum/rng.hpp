#pragma once

#include <cstdint>

namespace lyapnum {

// splitmix64: seed expander and stream-derivation hash.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ — fixed algorithm so streams are identical across
// platforms and standard-library versions.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1.  Multiply-shift; deterministic.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
};

// Independent child stream for (seed, a, b).  Used to give every
// (delta level, base center) pair its own generator so parallel
// schedules cannot perturb results.
inline Xoshiro256pp derive_rng(uint64_t seed, uint64_t a, uint64_t b) {
    SplitMix64 sm(seed);
    uint64_t h = sm.next();
    h ^= a + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    SplitMix64 sm2(h);
    uint64_t h2 = sm2.next();
    h2 ^= b + 0x9e3779b97f4a7c15ull + (h2 << 6) + (h2 >> 2);
    SplitMix64 sm3(h2);
    return Xoshiro256pp(sm3.next());
}

}  // namespace lyapnum
