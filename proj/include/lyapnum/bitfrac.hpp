#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string_view>

#include "lyapnum/rng.hpp"

namespace lyapnum {

// ─────────────────────────────────────────────────────────────────────
// BitFraction — a number in [0, 1) stored as a fixed-width binary
// fraction (64-bit words, most significant word first).  Bit g of the
// fraction has value 2^-(g+1).
//
// Doubling-type interval maps are exact bit shifts here, so orbits keep
// injecting fresh low-order bits across hundreds of steps instead of
// hitting an absorbing dyadic fixed point after ~53 doublings the way
// IEEE doubles do.  Width is capped at 1024 bits; the usable orbit
// horizon of a system built on this type is width − 64.
// ─────────────────────────────────────────────────────────────────────
class BitFraction {
public:
    static constexpr int kMaxWords = 16;  // 1024 bits

    BitFraction() = default;

    static BitFraction zeros(int nwords) {
        BitFraction b;
        b.init(nwords);
        return b;
    }

    static BitFraction random(Xoshiro256pp& rng, int nwords) {
        BitFraction b;
        b.init(nwords);
        for (int i = 0; i < nwords; ++i) b.w_[i] = rng.next();
        return b;
    }

    // Exact conversion; doubles carry at most 53 significant bits so two
    // words always absorb the value.  d >= 1 clamps to the largest
    // representable fraction.
    static BitFraction from_double(double d, int nwords) {
        if (!(d >= 0.0)) throw std::invalid_argument("BitFraction: negative value");
        BitFraction b;
        b.init(nwords);
        if (d >= 1.0) {
            for (int i = 0; i < nwords; ++i) b.w_[i] = ~0ull;
            return b;
        }
        for (int i = 0; i < nwords && d > 0.0; ++i) {
            d = std::ldexp(d, 64);
            const auto top = static_cast<uint64_t>(d);
            b.w_[i] = top;
            d -= static_cast<double>(top);
        }
        return b;
    }

    // Fills the fraction by cycling a "01..."-style pattern, e.g.
    // repeating("01") is exactly 1/3 and repeating("10") exactly 2/3.
    static BitFraction repeating(std::string_view pattern, int nwords) {
        if (pattern.empty()) throw std::invalid_argument("BitFraction: empty pattern");
        BitFraction b;
        b.init(nwords);
        for (int g = 0; g < nwords * 64; ++g)
            if (pattern[static_cast<size_t>(g) % pattern.size()] == '1')
                b.w_[g / 64] |= 1ull << (63 - g % 64);
        return b;
    }

    int words() const { return nwords_; }
    int bits() const { return nwords_ * 64; }

    bool msb() const { return (w_[0] >> 63) != 0; }

    bool bit(int g) const { return (w_[g / 64] >> (63 - g % 64)) & 1u; }

    void flip_bit(int g) { w_[g / 64] ^= 1ull << (63 - g % 64); }

    // In-place multiply by 2 mod 1 (top bit falls off).
    void shl1() {
        for (int i = 0; i + 1 < nwords_; ++i)
            w_[i] = (w_[i] << 1) | (w_[i + 1] >> 63);
        w_[nwords_ - 1] <<= 1;
    }

    void complement() {
        for (int i = 0; i < nwords_; ++i) w_[i] = ~w_[i];
    }

    // complement() followed by shl1(), fused into one pass.  Identical
    // bit-for-bit: complementing then shifting a word leaves bits 1..63
    // as the inverted shifted bits and pulls in the inverted top bit of
    // the next word — the same as inverting the shifted pair.  The last
    // word shifts the complement directly so the incoming global bottom
    // bit is 0, exactly as the two-pass form leaves it.
    void complement_shl1() {
        for (int i = 0; i + 1 < nwords_; ++i)
            w_[i] = ~((w_[i] << 1) | (w_[i + 1] >> 63));
        w_[nwords_ - 1] = (~w_[nwords_ - 1]) << 1;
    }

    // Keeps bits [0, from_bit), re-randomizes everything below.
    void randomize_tail(Xoshiro256pp& rng, int from_bit) {
        const int g = from_bit / 64;
        const int r = from_bit % 64;
        if (g >= nwords_) return;
        const uint64_t keep = (r == 0) ? 0ull : (~0ull << (64 - r));
        w_[g] = (w_[g] & keep) | (rng.next() & ~keep);
        for (int i = g + 1; i < nwords_; ++i) w_[i] = rng.next();
    }

    bool operator==(const BitFraction& o) const {
        if (nwords_ != o.nwords_) return false;
        return std::memcmp(w_.data(), o.w_.data(),
                           sizeof(uint64_t) * static_cast<size_t>(nwords_)) == 0;
    }

    // |a - b| rounded to double.  Exact up to the first 128 bits below
    // the leading difference (plus the borrow from lower words), which
    // is far beyond double resolution; symmetric by construction.
    static double distance(const BitFraction& a, const BitFraction& b) {
        if (a.nwords_ != b.nwords_)
            throw std::invalid_argument("BitFraction: width mismatch");
        const int n = a.nwords_;
        int g0 = 0;
        while (g0 < n && a.w_[g0] == b.w_[g0]) ++g0;
        if (g0 == n) return 0.0;

        const bool a_big = a.w_[g0] > b.w_[g0];
        const uint64_t* big = a_big ? a.w_.data() : b.w_.data();
        const uint64_t* small = a_big ? b.w_.data() : a.w_.data();

        const auto word = [&](const uint64_t* p, int i) -> uint64_t {
            return i < n ? p[i] : 0ull;
        };

        // Borrow into the 3-word window from the words below it.
        uint64_t borrow = 0;
        for (int i = g0 + 3; i < n; ++i) {
            if (big[i] != small[i]) {
                borrow = big[i] < small[i] ? 1 : 0;
                break;
            }
        }
        uint64_t lo = word(big, g0 + 2) - word(small, g0 + 2) - borrow;
        const uint64_t borrow_lo =
            (word(big, g0 + 2) < word(small, g0 + 2)) ||
                    (word(big, g0 + 2) == word(small, g0 + 2) && borrow)
                ? 1
                : 0;
        uint64_t mid = word(big, g0 + 1) - word(small, g0 + 1) - borrow_lo;
        const uint64_t borrow_mid =
            (word(big, g0 + 1) < word(small, g0 + 1)) ||
                    (word(big, g0 + 1) == word(small, g0 + 1) && borrow_lo)
                ? 1
                : 0;
        const uint64_t hi = big[g0] - small[g0] - borrow_mid;

        const unsigned __int128 head =
            (static_cast<unsigned __int128>(hi) << 64) | mid;
        // Multiplying by an exact power of two equals std::ldexp bit for bit
        // as long as the product stays normal; head < 2^128 and lo < 2^64, so
        // that holds whenever the smaller scale 2^(-64*(g0+3)) is itself
        // normal, i.e. g0 + 3 <= 15. Deeper windows fall back to ldexp, which
        // handles the subnormal range exactly.
        if (g0 + 3 <= 15) {
            return static_cast<double>(head) * pow2_m64(g0 + 2) +
                   static_cast<double>(lo) * pow2_m64(g0 + 3);
        }
        return std::ldexp(static_cast<double>(head), -64 * (g0 + 2)) +
               std::ldexp(static_cast<double>(lo), -64 * (g0 + 3));
    }

    double to_double() const { return distance(*this, zeros(nwords_)); }

private:
    // 2^(-64*j) for j in [0, 15]; the exponent field stays >= 63, so every
    // entry is a normal double and the constant is exact.
    static constexpr double pow2_m64(int j) {
        return std::bit_cast<double>(static_cast<uint64_t>(1023 - 64 * j)
                                     << 52);
    }

    void init(int nwords) {
        if (nwords < 1 || nwords > kMaxWords)
            throw std::invalid_argument("BitFraction: word count out of range");
        nwords_ = nwords;
        w_.fill(0);
    }

    std::array<uint64_t, kMaxWords> w_{};
    int nwords_ = 0;
};

}  // namespace lyapnum
