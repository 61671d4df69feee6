// Entropy sums over the truncated cylinder grid and their closed forms.
#pragma once

#include "gdim/measure.hpp"

namespace gdim {

struct entropy_result {
    double value = 0.0;
    double mass_defect = 0.0; // 1 - enumerated mass (wrt the relevant measure)
};

/// H_{k,N}(nu, mu) = -Σ_{ω ∈ Σ_N^k} mu([ω]) ln nu([ω]), enumerated over mu's
/// support. Throws support_error when nu vanishes on a positive-mu cylinder.
inline entropy_result cross_entropy_sum(const cylinder_measure& nu, const cylinder_measure& mu,
                                        int k, digit N) {
    entropy_result out;
    double mass = 0.0;
    for_each_cylinder(mu, k, N, [&](word_view w, double m) {
        double lnv = nu.log_mass(w);
        if (!std::isfinite(lnv))
            throw support_error("cross_entropy_sum: nu vanishes on a mu-positive cylinder " +
                                format_word(w));
        out.value -= m * lnv;
        mass += m;
    });
    out.mass_defect = 1.0 - mass;
    return out;
}

/// (1/k) Σ -mu ln mu over Σ_N^k.
inline entropy_result entropy_cylinder(const cylinder_measure& mu, int k, digit N) {
    entropy_result out;
    double mass = 0.0;
    for_each_cylinder(mu, k, N, [&](word_view, double m) {
        out.value -= m * std::log(m);
        mass += m;
    });
    out.value /= static_cast<double>(k);
    out.mass_defect = 1.0 - mass;
    return out;
}

/// Conditional-entropy form H_{k,N} - H_{k-1,N}; equals the entropy of the
/// (k-1)-step Markov approximation and converges much faster in k.
inline entropy_result entropy_conditional(const cylinder_measure& mu, int k, digit N) {
    if (k == 1) return entropy_cylinder(mu, 1, N);
    entropy_result hk = entropy_cylinder(mu, k, N);
    entropy_result hk1 = entropy_cylinder(mu, k - 1, N);
    entropy_result out;
    out.value = static_cast<double>(k) * hk.value - static_cast<double>(k - 1) * hk1.value;
    out.mass_defect = std::max(hk.mass_defect, hk1.mass_defect);
    return out;
}

/// Exact entropy of a Markov measure.
inline double entropy_markov(const markov_measure& mu) { return *mu.exact_entropy(); }

/// -(1/k) Σ_{Σ_N^k} mu ln nu with the mu-mass defect reported.
inline entropy_result relative_entropy_sum(const cylinder_measure& nu,
                                           const cylinder_measure& mu, int k, digit N) {
    entropy_result out = cross_entropy_sum(nu, mu, k, N);
    out.value /= static_cast<double>(k);
    return out;
}

} // namespace gdim
