// Cylinder weight scheme for the d* metric.
//
// a(ω) = 2^{-|ω|} · Π_i (6/π²) ω_i^{-2}   for |ω| ≥ 1, a(empty) = 0.
//
// Closed-form totals: Σ_{|ω|=n, all digits} a(ω) = 2^{-n}, so the scheme sums
// to 1 over all cylinders, and both the depth tail and the alphabet tail of a
// truncation are available exactly.
#pragma once

#include <map>
#include <mutex>

#include "gdim/word.hpp"

namespace gdim {

struct cylinder_weights {
    static constexpr const char* scheme_id = "dyadic-inverse-square";

    /// Weight of one cylinder.
    static double weight(word_view w) {
        if (w.empty()) return 0.0;
        double a = 1.0;
        for (digit d : w) {
            double dd = static_cast<double>(d);
            a *= 0.5 * kInvBasel / (dd * dd);
        }
        return a;
    }

    /// Σ_{m ≤ N} (6/π²) m^{-2}: per-letter weight mass kept by an alphabet cap.
    static double letter_mass(digit N) {
        static std::map<digit, double> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(N);
        if (it != cache.end()) return it->second;
        double q = kInvBasel * basel_partial(N);
        cache.emplace(N, q);
        return q;
    }

    /// Total weight of all cylinders outside the family ∪_{n ≤ D} Σ_N^n.
    /// (Depth tail 2^{-D} plus, per kept depth, the alphabet defect.)
    static double truncation_tail(int depth_cap, digit alphabet_cap) {
        if (depth_cap < 0) throw std::domain_error("truncation_tail: negative depth");
        double q = letter_mass(alphabet_cap);
        double tail = std::pow(0.5, depth_cap); // Σ_{n > D} 2^{-n}
        double pow_half = 1.0, pow_q = 1.0;
        for (int n = 1; n <= depth_cap; ++n) {
            pow_half *= 0.5;
            pow_q *= q;
            tail += pow_half * (1.0 - pow_q);
        }
        return tail;
    }

    /// Σ over all words of length n (no cap): 2^{-n}.
    static double level_total(int n) { return std::pow(0.5, n); }
};

} // namespace gdim
