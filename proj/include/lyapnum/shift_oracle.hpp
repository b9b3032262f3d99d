#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "lyapnum/estimator.hpp"
#include "lyapnum/sampling.hpp"
#include "lyapnum/zoo.hpp"

namespace lyapnum {

// ─────────────────────────────────────────────────────────────────────
// Exact separation numbers for the full shift on k symbols
//
// With d(x, y) = 2^(-first difference), the ball of radius 2^(-m)
// around a word is exactly the set of words agreeing with it on the
// first m coordinates.  For a pair first differing at position j, the
// distance after n shifts is 2^(-(j-n)) while n <= j, and the
// worst-case continuation (words differing at every position >= j)
// makes it 1 for all n > j.  The window maxima therefore depend only
// on j, and the sup over a ball is a finite scan over j in [m, W).
// Every cylinder looks alike, so the min over centers is free and all
// four numbers come out of one enumeration.
// ─────────────────────────────────────────────────────────────────────

struct OracleValues {
    std::array<double, 4> L{};  // L[0]..L[3] = L1..L4
    int k = 0;
    int m = 0;             // ball resolution: radius 2^(-m)
    int64_t word_length = 0;
    int64_t horizon = 0;
};

inline OracleValues exact_L_estimates(int k, int m, int64_t W, int64_t N,
                                      double tau = 0.5) {
    if (k < 2 || k > 255)
        throw std::invalid_argument("exact_L_estimates: k must be in [2, 255]");
    if (m < 0) throw std::invalid_argument("exact_L_estimates: m must be >= 0");
    if (N < 0) throw std::invalid_argument("exact_L_estimates: N must be >= 0");
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("exact_L_estimates: tau must be in (0,1)");
    // Every inspected coordinate must exist over the whole window.
    if (W < N + m + 1)
        throw std::invalid_argument("exact_L_estimates: need W >= N + m + 1");
    // The implied pair space has k^(2(W-m)) members; refuse sizes where
    // exhaustive cross-validation would be hopeless.
    if (2.0 * static_cast<double>(W - m) * std::log2(static_cast<double>(k)) > 24.0)
        throw std::invalid_argument(
            "exact_L_estimates: k^(2(W-m)) exceeds 2^24; shrink W or m");

    const int64_t t0 = tail_start(N, tau);
    double best_full = 0.0;
    double best_tail = 0.0;
    for (int64_t j = m; j < W; ++j) {
        double fm = 0.0, tm = 0.0;
        for (int64_t n = 0; n <= N; ++n) {
            const double d =
                (n >= j) ? 1.0 : std::ldexp(1.0, -static_cast<int>(j - n));
            fm = std::max(fm, d);
            if (n >= t0) tm = std::max(tm, d);
        }
        best_full = std::max(best_full, fm);
        best_tail = std::max(best_tail, tm);
    }
    // The identical pair contributes distance 0 everywhere — no-op.

    OracleValues o;
    o.L = {best_full, best_full, best_tail, best_tail};
    o.k = k;
    o.m = m;
    o.word_length = W;
    o.horizon = N;
    return o;
}

// ── sampled estimator vs exact values ────────────────────────────────
// Runs the generic estimator on the k-symbol shift, then evaluates the
// exact numbers at the ball resolution the estimator's finest level
// actually used.  The exact side is shrunk when needed so its pair
// space stays enumerable: the four values are 2^(-max(0, m - N)), so
// keeping m = N preserves them under the reduction.
struct OracleComparison {
    OracleValues exact;
    LyapunovReport estimate;
    std::array<double, 4> gaps{};
    bool under_sampled = false;  // too few samples for the gap to mean much
    int m_estimator = 0;         // finest ball resolution the estimator used
    int m_exact = 0;             // resolution after the enumeration cap
};

inline OracleComparison oracle_vs_estimator(int k, const EstimatorConfig& cfg) {
    const int64_t word_length =
        std::max<int64_t>(1024, cfg.horizon + 2 * detail::kShiftMargin);
    const SystemSpec spec = make_full_shift(k, word_length);

    OracleComparison out;
    out.estimate = estimate_all(spec, cfg);

    double finest = cfg.delta0;
    for (int i = 1; i < cfg.delta_levels; ++i) finest *= cfg.delta_factor;
    const int m = ball_bit_index(1.0, finest, static_cast<int>(word_length) - 1);
    if (m < 0)
        throw std::runtime_error(
            "oracle_vs_estimator: finest delta below word resolution");

    int m_exact = static_cast<int>(std::min<int64_t>(m, cfg.horizon));
    while (m_exact > 0 &&
           2.0 * static_cast<double>(m_exact + 1) * std::log2(static_cast<double>(k)) >
               24.0)
        --m_exact;
    const int64_t N_exact = m_exact;        // keeps max(0, m - N) = 0 either way
    const int64_t W_exact = 2 * m_exact + 1;  // = N + m + 1
    out.exact = exact_L_estimates(k, m_exact, W_exact, N_exact, cfg.tail_fraction);
    out.m_estimator = m;
    out.m_exact = m_exact;

    for (int i = 0; i < 4; ++i)
        out.gaps[static_cast<size_t>(i)] = std::fabs(
            out.estimate.L[static_cast<size_t>(i)] - out.exact.L[static_cast<size_t>(i)]);
    out.under_sampled = cfg.nbhd_count < 8 || cfg.pair_count < 8;
    return out;
}

}  // namespace lyapnum
