// The d* metric on measures: weighted l¹ distance of cylinder masses over the
// truncated family ∪_{k ≤ D} Σ_N^k, plus the exact weight of everything the
// truncation leaves out, so the true distance lies in [value, value + tail].
#pragma once

#include "gdim/orbit.hpp"
#include "gdim/weights.hpp"

namespace gdim {

struct dstar_result {
    double value = 0.0; // truncated sum
    double tail = 0.0;  // total weight of excluded cylinders
    double upper() const { return value + tail; }
};

/// Truncated d*(mu, la). Subtrees where both masses vanish are pruned exactly;
/// everything else in the capped family is enumerated, so callers pick caps
/// the measures can afford.
inline dstar_result d_star(const cylinder_measure& mu, const cylinder_measure& la, int depth_cap,
                           digit alphabet_cap) {
    if (depth_cap < 1) throw std::domain_error("d_star: depth_cap must be >= 1");
    if (alphabet_cap < 1) throw std::domain_error("d_star: alphabet_cap must be >= 1");
    int md = 0;
    if (mu.max_depth() > 0) md = mu.max_depth();
    if (la.max_depth() > 0) md = md == 0 ? la.max_depth() : std::min(md, la.max_depth());
    if (md > 0 && depth_cap > md)
        throw std::domain_error("d_star: depth_cap exceeds a table measure's depth");

    dstar_result out;
    out.tail = cylinder_weights::truncation_tail(depth_cap, alphabet_cap);

    word w;
    w.reserve(static_cast<size_t>(depth_cap));
    double letter = 0.5 * kInvBasel;
    auto rec = [&](auto&& self, int depth, double weight) -> void {
        for (digit a = 1; a <= alphabet_cap; ++a) {
            w.push_back(a);
            double m1 = mu.mass(w), m2 = la.mass(w);
            check_mass_range(m1, "d_star");
            check_mass_range(m2, "d_star");
            if (m1 > 0.0 || m2 > 0.0) {
                double wa = weight * letter / (static_cast<double>(a) * static_cast<double>(a));
                out.value += wa * std::abs(m1 - m2);
                if (depth < depth_cap) self(self, depth + 1, wa);
            }
            w.pop_back();
        }
    };
    rec(rec, 1, 1.0);
    return out;
}

/// d* between two empirical measures over their shared cylinder family.
inline dstar_result d_star_orbits(const orbit_accumulator& a, const orbit_accumulator& b) {
    if (a.k_max() != b.k_max() || a.alphabet_cap() != b.alphabet_cap())
        throw std::domain_error("d_star_orbits: cap mismatch");
    dstar_result out;
    out.tail = cylinder_weights::truncation_tail(a.k_max(), a.alphabet_cap());
    for (int k = 1; k <= a.k_max(); ++k) {
        a.for_each(k, [&](word_view u, int64_t c) {
            double pa = static_cast<double>(c) / static_cast<double>(a.window_count(k));
            double pb = b.frequency(u);
            out.value += cylinder_weights::weight(u) * std::abs(pa - pb);
        });
        // words b saw but a did not
        b.for_each(k, [&](word_view u, int64_t c) {
            if (a.count(u) == 0) {
                double pb = static_cast<double>(c) / static_cast<double>(b.window_count(k));
                out.value += cylinder_weights::weight(u) * pb;
            }
        });
    }
    return out;
}

/// d* between the empirical measure of an accumulator and mu, over exactly the
/// accumulator's cylinder family (k ≤ k_max, letters ≤ N).
inline dstar_result d_star_orbit_vs_measure(const orbit_accumulator& acc,
                                            const cylinder_measure& mu) {
    const int k_max = acc.k_max();
    const digit N = acc.alphabet_cap();
    if (mu.max_depth() > 0 && k_max > mu.max_depth())
        throw std::domain_error("d_star_orbit_vs_measure: accumulator deeper than table");

    dstar_result out;
    out.tail = cylinder_weights::truncation_tail(k_max, N);

    // observed windows: |p(u) - mu(u)|, and remember Σ a(u) mu(u) over them
    std::vector<double> seen_mu_weight(static_cast<size_t>(k_max), 0.0);
    for (int k = 1; k <= k_max; ++k) {
        acc.for_each(k, [&](word_view u, int64_t c) {
            double m = mu.mass(u);
            check_mass_range(m, "d_star_orbit_vs_measure");
            double p = static_cast<double>(c) / static_cast<double>(acc.window_count(k));
            double a = cylinder_weights::weight(u);
            out.value += a * std::abs(p - m);
            seen_mu_weight[static_cast<size_t>(k - 1)] += a * m;
        });
    }
    // unobserved words in the family contribute a(u) mu(u); enumerate mu's
    // support once per level and subtract what the observed part already paid
    for (int k = 1; k <= k_max; ++k) {
        double total_mu_weight = 0.0;
        for_each_cylinder(mu, k, N, [&](word_view u, double m) {
            total_mu_weight += cylinder_weights::weight(u) * m;
        });
        double unseen = total_mu_weight - seen_mu_weight[static_cast<size_t>(k - 1)];
        out.value += std::max(0.0, unseen);
    }
    return out;
}

} // namespace gdim
