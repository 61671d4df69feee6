// Markov approximation: the (j-1)-step Markov measure agreeing with mu on all
// cylinders of length <= j. Transition rows are the conditional quotients
// p_{u,a} = mu([u a]) / mu([u]) on the (j-1)-word states.
#pragma once

#include "gdim/entropy.hpp"

namespace gdim {

inline markov_measure markov_approximation(const cylinder_measure& mu, int j, digit N) {
    if (j < 1) throw std::domain_error("markov_approximation: j must be >= 1");
    if (!mu.shift_invariant())
        throw std::domain_error("markov_approximation: mu must be shift-invariant");
    digit cap = mu.alphabet_cap();
    if (cap > 0) N = std::min(N, cap);
    if (N < 1) throw std::domain_error("markov_approximation: empty alphabet");
    if (mu.max_depth() > 0 && j > mu.max_depth())
        throw std::domain_error("markov_approximation: table too shallow for requested j");

    if (j == 1) {
        // Bernoulli rows: every state sees the 1-cylinder law (order-1 storage)
        std::vector<double> p(static_cast<size_t>(N));
        double tot = 0.0;
        word w(1);
        for (digit a = 1; a <= N; ++a) {
            w[0] = a;
            p[static_cast<size_t>(a - 1)] = mu.mass(w);
            tot += p[static_cast<size_t>(a - 1)];
        }
        if (tot <= 0) throw std::domain_error("markov_approximation: mu has no 1-cylinder mass");
        for (auto& x : p) x /= tot;
        std::vector<double> trans;
        trans.reserve(static_cast<size_t>(N) * static_cast<size_t>(N));
        for (digit i = 0; i < N; ++i) trans.insert(trans.end(), p.begin(), p.end());
        return markov_measure(1, N, p, std::move(trans));
    }

    const int order = j - 1;
    const size_t nstates = pow_size(N, order);
    std::vector<double> pi(nstates, 0.0);
    std::vector<double> trans(nstates * static_cast<size_t>(N), 0.0);
    double tot = 0.0;
    for (size_t s = 0; s < nstates; ++s) {
        word u = word_from_index(s, order, N);
        double mu_u = mu.mass(u);
        check_mass_range(mu_u, "markov_approximation");
        pi[s] = mu_u;
        tot += mu_u;
        if (mu_u == 0.0) {
            // state outside the support; verify no j-cylinder hangs below it
            word ua = u;
            ua.push_back(1);
            for (digit a = 1; a <= N; ++a) {
                ua.back() = a;
                if (mu.mass(ua) > 0.0)
                    throw std::domain_error(
                        "markov_approximation: support j-cylinder with zero (j-1)-prefix at " +
                        format_word(ua));
            }
            continue;
        }
        word ua = u;
        ua.push_back(1);
        double row_tot = 0.0;
        for (digit a = 1; a <= N; ++a) {
            ua.back() = a;
            double q = mu.mass(ua) / mu_u;
            trans[s * static_cast<size_t>(N) + static_cast<size_t>(a - 1)] = q;
            row_tot += q;
        }
        if (row_tot <= 0)
            throw std::domain_error("markov_approximation: zero transition row on support");
        for (digit a = 0; a < N; ++a)
            trans[s * static_cast<size_t>(N) + static_cast<size_t>(a)] /= row_tot;
    }
    if (tot <= 0) throw std::domain_error("markov_approximation: mu has no mass under the cap");
    return markov_measure(order, N, std::move(pi), std::move(trans));
}

} // namespace gdim
