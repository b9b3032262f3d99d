#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

#include "lyapnum/bitfrac.hpp"

namespace lyapnum {

struct Point;

// Fixed-capacity real vector (ambient or chart coordinates).
struct RealVec {
    std::array<double, 6> c{};
    int n = 0;

    bool operator==(const RealVec& o) const {
        if (n != o.n) return false;
        for (int i = 0; i < n; ++i)
            if (c[static_cast<size_t>(i)] != o.c[static_cast<size_t>(i)]) return false;
        return true;
    }
};

// A finite word over {0..alphabet-1}.  The symbol buffer is shared and
// immutable; the shift map only advances `offset`, so orbit steps are
// O(1) and never re-sample symbols.
struct SymbolWord {
    std::shared_ptr<const std::vector<uint8_t>> syms;
    uint32_t offset = 0;
    uint16_t alphabet = 2;

    uint32_t length() const {
        return syms ? static_cast<uint32_t>(syms->size()) - offset : 0;
    }
    uint8_t at(uint32_t i) const { return (*syms)[offset + i]; }

    bool operator==(const SymbolWord& o) const {
        if (alphabet != o.alphabet || length() != o.length()) return false;
        if (syms == o.syms && offset == o.offset) return true;
        for (uint32_t i = 0; i < length(); ++i)
            if (at(i) != o.at(i)) return false;
        return true;
    }
};

// Product-space point; factors boxed to keep Point a regular type.
struct TuplePoint {
    std::shared_ptr<const std::vector<Point>> parts;

    bool operator==(const TuplePoint& o) const;
};

struct Point {
    std::variant<RealVec, BitFraction, SymbolWord, TuplePoint> v;

    Point() : v(RealVec{}) {}

    static Point real1(double x) {
        RealVec r;
        r.n = 1;
        r.c[0] = x;
        return Point{r};
    }

    static Point realn(std::initializer_list<double> xs) {
        if (xs.size() > 6) throw std::invalid_argument("Point: too many coordinates");
        RealVec r;
        r.n = static_cast<int>(xs.size());
        size_t i = 0;
        for (double x : xs) r.c[i++] = x;
        return Point{r};
    }

    static Point bits(BitFraction b) { return Point{std::move(b)}; }

    static Point word(std::vector<uint8_t> syms, uint16_t alphabet) {
        SymbolWord w;
        w.syms = std::make_shared<const std::vector<uint8_t>>(std::move(syms));
        w.alphabet = alphabet;
        return Point{w};
    }

    static Point tuple(std::vector<Point> parts) {
        TuplePoint t;
        t.parts = std::make_shared<const std::vector<Point>>(std::move(parts));
        return Point{t};
    }

    const RealVec& real() const { return std::get<RealVec>(v); }
    RealVec& real() { return std::get<RealVec>(v); }
    const BitFraction& frac() const { return std::get<BitFraction>(v); }
    BitFraction& frac() { return std::get<BitFraction>(v); }
    const SymbolWord& sym() const { return std::get<SymbolWord>(v); }
    SymbolWord& sym() { return std::get<SymbolWord>(v); }
    const TuplePoint& tup() const { return std::get<TuplePoint>(v); }

    double x0() const { return real().c[0]; }

    // Exact representation equality — used only as the x == y fast path,
    // never as a fuzzy identity.
    bool operator==(const Point& o) const { return v == o.v; }

private:
    // Constrained so it never outcompetes the copy constructor for
    // non-const Point lvalues.
    template <class T>
        requires(!std::is_same_v<std::remove_cvref_t<T>, Point>)
    explicit Point(T&& payload) : v(std::forward<T>(payload)) {}
};

inline bool TuplePoint::operator==(const TuplePoint& o) const {
    if (parts == o.parts) return true;
    if (!parts || !o.parts || parts->size() != o.parts->size()) return false;
    for (size_t i = 0; i < parts->size(); ++i)
        if (!((*parts)[i] == (*o.parts)[i])) return false;
    return true;
}

}  // namespace lyapnum
