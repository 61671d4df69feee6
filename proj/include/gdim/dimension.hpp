// The dimension-formula quantities: convergence exponent α_ν, relative
// entropy h(ν|μ) in sum and integral form, entropy dimension β(ν|μ), the
// max{α, β} evaluator, local (Billingsley-style) dimension along a stream,
// and the covering-sum transition diagnostic.
#pragma once

#include "gdim/entropy.hpp"
#include "gdim/stream.hpp"
#include "gdim/transfer.hpp"

namespace gdim {

// --- convergence exponent ---

struct alpha_result {
    double alpha = 0.0;
    double slope = 0.0;              // fitted d(-ln mass)/d(ln n)
    std::vector<double> log_n;       // dyadic abscissae used
    std::vector<double> neg_log_mass;
    double partial_sum_below = 0.0;  // Σ mass^t at t = alpha - 0.05
    double partial_sum_above = 0.0;  // Σ mass^t at t = alpha + 0.05
};

/// Sorted-mass slope estimate of α_ν from the 1-cylinder masses up to rank
/// N_max, fitted on the dyadic ranks in the upper half of the range.
inline alpha_result convergence_exponent(const cylinder_measure& nu, digit N_max) {
    if (N_max < 2) throw std::domain_error("convergence_exponent: N_max too small");
    digit cap = nu.alphabet_cap();
    if (cap > 0) N_max = std::min(N_max, cap);
    // log masses so geometric tails survive far past double underflow
    std::vector<double> log_masses(static_cast<size_t>(N_max));
    word w(1);
    for (digit n = 1; n <= N_max; ++n) {
        w[0] = n;
        double lm = nu.log_mass(w);
        if (!std::isfinite(lm))
            throw numeric_error("convergence_exponent: zero 1-cylinder mass in range");
        log_masses[static_cast<size_t>(n - 1)] = lm;
    }
    if (!nu.digit_masses_sorted())
        std::stable_sort(log_masses.begin(), log_masses.end(), std::greater<double>());

    int e_max = 0;
    while ((digit(1) << (e_max + 1)) <= N_max) ++e_max;
    int e_min = (e_max + 1) / 2;
    alpha_result out;
    for (int e = e_min; e <= e_max; ++e) {
        size_t n = size_t(1) << e;
        out.log_n.push_back(std::log(static_cast<double>(n)));
        out.neg_log_mass.push_back(-log_masses[n - 1]);
    }
    if (out.log_n.size() < 8)
        throw numeric_error("convergence_exponent: fewer than 8 dyadic ranks below N_max");
    out.slope = fit_line(out.log_n, out.neg_log_mass).slope;
    double a = 1.0 / out.slope;
    out.alpha = std::clamp(a, 0.0, 1.0);
    for (double lm : log_masses) {
        out.partial_sum_below += std::exp(std::max(0.0, out.alpha - 0.05) * lm);
        out.partial_sum_above += std::exp((out.alpha + 0.05) * lm);
    }
    return out;
}

// --- relative entropy, integral form ---

struct rel_entropy_integral_result {
    double value = 0.0;        // -Σ_{Σ_N^k} μ([ω]) (φ(x_ω) - P̂)
    double error_bound = 0.0;  // (ln Ĉ + Σ_{j<=k} var_j) / k
    bool infinite = false;
    double mass_defect = 0.0;
    std::vector<std::pair<digit, double>> cap_trend; // value at cap, 2cap, 4cap
};

inline rel_entropy_integral_result relative_entropy_integral(const gibbs_model& model,
                                                             const cylinder_measure& mu, int k,
                                                             digit cap = 0,
                                                             double infinity_threshold = 1e4) {
    if (cap == 0) cap = model.alphabet_cap();
    auto eval_at = [&](digit N) {
        double acc = 0.0, mass = 0.0;
        for_each_cylinder(mu, k, N, [&](word_view w, double m) {
            acc -= m * model.normalized_potential(w);
            mass += m;
        });
        return std::pair<double, double>(acc, 1.0 - mass);
    };
    rel_entropy_integral_result out;
    auto [v, defect] = eval_at(cap);
    out.value = v;
    out.mass_defect = defect;
    out.error_bound =
        (std::log(model.constant_estimate()) + variation_partial_sum(model.phi(), 1, k)) /
        static_cast<double>(k);
    digit mu_cap = mu.alphabet_cap();
    if ((mu_cap == 0 || mu_cap > cap) && cap >= 4) {
        // countable support: watch the trend across cap/4, cap/2, cap for a
        // divergence that shows no sign of flattening
        auto [v1, d1] = eval_at(cap / 4);
        auto [v2, d2] = eval_at(cap / 2);
        out.cap_trend = {{cap / 4, v1}, {cap / 2, v2}, {cap, v}};
        double incr1 = v2 - v1, incr2 = v - v2;
        bool flattening = incr2 < 0.5 * std::max(incr1, 0.0) + 1e-12;
        out.infinite = v > infinity_threshold && !flattening;
    } else {
        out.cap_trend = {{cap, v}};
    }
    return out;
}

// --- entropy dimension ---

struct beta_grid_result {
    double beta = 0.0;
    bool stable = false;
    double stability_gap = 0.0;
    bool zero_entropy_mu = false;
    std::vector<int> k_list;
    std::vector<digit> N_list;
    std::vector<std::vector<double>> ratios; // [k index][N index]
};

inline beta_grid_result entropy_dimension_grid(const cylinder_measure& nu,
                                               const cylinder_measure& mu,
                                               std::vector<int> k_list, std::vector<digit> N_list,
                                               double stability_tol = 0.05) {
    if (k_list.empty() || N_list.empty())
        throw std::domain_error("entropy_dimension_grid: empty grid");
    std::sort(k_list.begin(), k_list.end());
    std::sort(N_list.begin(), N_list.end());
    beta_grid_result out;
    out.k_list = k_list;
    out.N_list = N_list;
    bool any_entropy = false;
    for (int k : k_list) {
        std::vector<double> row;
        for (digit N : N_list) {
            double hmm = cross_entropy_sum(mu, mu, k, N).value;
            double hnm = cross_entropy_sum(nu, mu, k, N).value;
            if (hmm > 0) any_entropy = true;
            row.push_back(hnm > 0 ? hmm / hnm : (hmm > 0 ? 1.0 : 0.0));
        }
        out.ratios.push_back(std::move(row));
    }
    if (!any_entropy) {
        out.zero_entropy_mu = true;
        out.beta = 0.0;
        out.stable = true;
        return out;
    }
    size_t ki = out.ratios.size() - 1, Ni = out.ratios[ki].size() - 1;
    out.beta = out.ratios[ki][Ni];
    double second = Ni > 0 ? out.ratios[ki][Ni - 1] : (ki > 0 ? out.ratios[ki - 1][Ni] : out.beta);
    if (Ni == 0 && ki > 0) second = out.ratios[ki - 1][Ni];
    out.stability_gap = std::abs(out.beta - second);
    out.stable = out.stability_gap <= stability_tol * std::max(out.beta, 1e-12);
    return out;
}

/// β from the closed form h_μ / h(ν|μ); 0 on the infinite branch.
inline double entropy_dimension_closed(double h_mu, double h_rel, bool h_rel_infinite = false,
                                       bool mu_equals_nu = false) {
    if (h_mu < 0) throw std::domain_error("entropy_dimension_closed: negative entropy");
    if (mu_equals_nu) return 1.0;
    if (h_rel_infinite) return 0.0;
    if (h_mu == 0.0) return 0.0;
    if (h_rel < h_mu * (1.0 - 1e-9))
        throw std::domain_error("entropy_dimension_closed: h(nu|mu) < h_mu (inconsistent inputs)");
    return std::clamp(h_mu / h_rel, 0.0, 1.0);
}

// --- the dimension formula ---

struct dimension_value {
    double value = 0.0;
    bool alpha_branch = false; // which side of the max is active
};

inline dimension_value dimension_formula(double alpha, double beta) {
    const double slack = 1e-12;
    if (alpha < -slack || alpha > 1 + slack || beta < -slack || beta > 1 + slack)
        throw std::domain_error("dimension_formula: inputs must lie in [0,1]");
    dimension_value out;
    out.alpha_branch = alpha >= beta;
    out.value = std::max(alpha, beta);
    return out;
}

struct dimension_report {
    alpha_result alpha;
    double h_mu = 0.0;
    double h_rel_sum = 0.0;
    double h_rel_integral = 0.0;
    bool h_rel_infinite = false;
    bool mu_equals_nu = false;
    beta_grid_result beta_grid;
    double beta_closed = 0.0;
    dimension_value formula;
    // provenance
    digit N = 0;
    int d = 0, k = 0;
    double mass_defect = 0.0;

    void write_kv(std::ostream& os) const {
        os.precision(17);
        os << "alpha " << alpha.alpha << "\nalpha_slope " << alpha.slope << "\nh_mu " << h_mu
           << "\nh_rel_sum " << h_rel_sum << "\nh_rel_integral " << h_rel_integral
           << "\nh_rel_infinite " << (h_rel_infinite ? 1 : 0) << "\nmu_equals_nu "
           << (mu_equals_nu ? 1 : 0) << "\nbeta_grid " << beta_grid.beta << "\nbeta_stable "
           << (beta_grid.stable ? 1 : 0) << "\nbeta_closed " << beta_closed << "\ndimension "
           << formula.value << "\nbranch " << (formula.alpha_branch ? "alpha" : "beta") << "\nN "
           << N << "\nd " << d << "\nk " << k << "\nmass_defect " << mass_defect << "\n";
    }
};

// --- local dimension along a stream ---

struct local_dimension_result {
    std::vector<std::pair<uint64_t, double>> ratios; // (depth, ln ref / ln nu)
    double liminf_proxy = 0.0;                       // min over the tail half
};

inline local_dimension_result local_dimension(const digit_stream& x, const cylinder_measure& nu,
                                              const cylinder_measure& ref,
                                              const std::vector<uint64_t>& depths) {
    if (depths.empty()) throw std::domain_error("local_dimension: empty depth schedule");
    local_dimension_result out;
    for (uint64_t n : depths) {
        word w = x.prefix(n);
        double ln_ref = ref.log_mass(w);
        double ln_nu = nu.log_mass(w);
        if (!std::isfinite(ln_nu) || !std::isfinite(ln_ref))
            throw support_error("local_dimension: zero cylinder mass along the stream at depth " +
                                std::to_string(n));
        out.ratios.push_back({n, ln_ref / ln_nu});
    }
    size_t half = out.ratios.size() / 2;
    double mn = std::numeric_limits<double>::infinity();
    for (size_t i = half; i < out.ratios.size(); ++i) mn = std::min(mn, out.ratios[i].second);
    out.liminf_proxy = mn;
    return out;
}

// --- covering-sum diagnostic (upper-bound machinery at desk scale) ---

struct covering_options {
    double eps = 0.05;
    int j = 1;
    digit N = 2;
    int n_min = 8;
    int n_max = 16;
    std::vector<double> gamma_grid; // default 0.05 .. 1.5
    size_t exhaustive_budget = size_t(2) << 27;
    int64_t sample_budget = 0; // > 0 switches to importance sampling
    uint64_t seed = 1;
};

struct covering_result {
    bool crossed = false;
    double gamma_star = 0.0;
    std::vector<double> gamma_grid;
    std::vector<double> slopes;       // fitted growth rate of ln Z_n per γ
    std::vector<int> n_used;          // lengths with nonempty Λ_n
};

inline covering_result covering_sum_diagnostic(const cylinder_measure& mu,
                                               const cylinder_measure& nu, covering_options opt) {
    if (opt.gamma_grid.empty())
        for (double g = 0.05; g <= 1.5001; g += 0.05) opt.gamma_grid.push_back(g);
    if (opt.n_min < opt.j + 1) throw std::domain_error("covering_sum: n_min too small");
    const int j = opt.j;
    const digit N = opt.N;
    const size_t nwords_j = pow_size(N, j);
    std::vector<double> mu_j(nwords_j);
    for (size_t ui = 0; ui < nwords_j; ++ui) mu_j[ui] = mu.mass(word_from_index(ui, j, N));

    const int n_count = opt.n_max - opt.n_min + 1;
    const size_t n_gamma = opt.gamma_grid.size();
    std::vector<std::vector<double>> logZ(
        static_cast<size_t>(n_count),
        std::vector<double>(n_gamma, -std::numeric_limits<double>::infinity()));

    auto admissible = [&](const std::vector<int64_t>& tau, int n) {
        for (size_t ui = 0; ui < nwords_j; ++ui) {
            double f = static_cast<double>(tau[ui]) / static_cast<double>(n);
            if (std::abs(f - mu_j[ui]) >= opt.eps) return false;
        }
        return true;
    };

    if (opt.sample_budget <= 0) {
        if (!pow_within(N, opt.n_max + j - 1, opt.exhaustive_budget))
            throw std::domain_error(
                "covering_sum: exhaustive grid too large; pass a sampling budget");
        word w;
        w.reserve(static_cast<size_t>(opt.n_max + j - 1));
        std::vector<int64_t> tau(nwords_j, 0);
        auto rec = [&](auto&& self) -> void {
            int len = static_cast<int>(w.size());
            if (len >= j) {
                int n = len - j + 1; // window count of the current prefix
                if (n >= opt.n_min && n <= opt.n_max && admissible(tau, n)) {
                    double lnv = nu.log_mass(w);
                    for (size_t gi = 0; gi < n_gamma; ++gi) {
                        auto& cell = logZ[static_cast<size_t>(n - opt.n_min)][gi];
                        cell = log_add_exp(cell, opt.gamma_grid[gi] * lnv);
                    }
                }
            }
            if (len == opt.n_max + j - 1) return;
            for (digit a = 1; a <= N; ++a) {
                w.push_back(a);
                if (static_cast<int>(w.size()) >= j)
                    ++tau[word_index(word_view(w).last(static_cast<size_t>(j)), N)];
                self(self);
                if (static_cast<int>(w.size()) >= j)
                    --tau[word_index(word_view(w).last(static_cast<size_t>(j)), N)];
                w.pop_back();
            }
        };
        rec(rec);
    } else {
        // importance sampling from mu: Z_n = E_mu[1_Λ exp(γ ln ν - ln μ)]
        const auto* mk = dynamic_cast<const markov_measure*>(&mu);
        const auto* bn = dynamic_cast<const bernoulli_measure*>(&mu);
        if (!mk && !bn)
            throw std::domain_error("covering_sum: sampling mode needs Markov or Bernoulli mu");
        for (int64_t s = 0; s < opt.sample_budget; ++s) {
            digit_stream x = mk ? markov_stream(std::make_shared<markov_measure>(*mk), opt.seed,
                                                static_cast<uint64_t>(s))
                                : bernoulli_stream(bn->weights(), opt.seed,
                                                   static_cast<uint64_t>(s));
            word w = x.prefix(static_cast<uint64_t>(opt.n_max + j - 1));
            std::vector<int64_t> tau(nwords_j, 0);
            for (int i = 0; i + j <= static_cast<int>(w.size()); ++i) {
                word_view win(w.data() + i, static_cast<size_t>(j));
                bool inside = true;
                for (digit d : win)
                    if (d > N) inside = false;
                if (inside) ++tau[word_index(win, N)];
                int n = i + 1;
                if (n >= opt.n_min && n <= opt.n_max && admissible(tau, n)) {
                    word_view pref(w.data(), static_cast<size_t>(n + j - 1));
                    double lw = -mu.log_mass(pref) - std::log(static_cast<double>(opt.sample_budget));
                    double lnv = nu.log_mass(pref);
                    for (size_t gi = 0; gi < n_gamma; ++gi) {
                        auto& cell = logZ[static_cast<size_t>(n - opt.n_min)][gi];
                        cell = log_add_exp(cell, opt.gamma_grid[gi] * lnv + lw);
                    }
                }
            }
        }
    }

    covering_result out;
    out.gamma_grid = opt.gamma_grid;
    std::vector<double> ns;
    for (int n = opt.n_min; n <= opt.n_max; ++n)
        if (std::isfinite(logZ[static_cast<size_t>(n - opt.n_min)][0])) {
            out.n_used.push_back(n);
            ns.push_back(static_cast<double>(n));
        }
    if (out.n_used.size() < 4)
        throw numeric_error("covering_sum: fewer than 4 lengths with nonempty Λ_n (eps too small)");
    for (size_t gi = 0; gi < n_gamma; ++gi) {
        std::vector<double> ys;
        for (int n : out.n_used) ys.push_back(logZ[static_cast<size_t>(n - opt.n_min)][gi]);
        out.slopes.push_back(fit_line(ns, ys).slope);
    }
    for (size_t gi = 0; gi + 1 < n_gamma; ++gi) {
        if (out.slopes[gi] > 0 && out.slopes[gi + 1] <= 0) {
            double g0 = opt.gamma_grid[gi], g1 = opt.gamma_grid[gi + 1];
            out.gamma_star =
                g0 + (g1 - g0) * out.slopes[gi] / (out.slopes[gi] - out.slopes[gi + 1]);
            out.crossed = true;
            break;
        }
    }
    return out;
}

} // namespace gdim
