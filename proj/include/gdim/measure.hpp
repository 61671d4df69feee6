// Invariant (and a few non-invariant) measures presented as cylinder-mass
// functions: Bernoulli, multi-step Markov, periodic-orbit point masses,
// depth-limited tables, hidden-Markov observables and mixtures.
#pragma once

#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "gdim/word.hpp"

namespace gdim {

class cylinder_measure {
public:
    virtual ~cylinder_measure() = default;

    /// Mass of the cylinder [w]; mass(empty) = 1.
    virtual double mass(word_view w) const = 0;

    /// ln mass [w]; overridden by product-structured measures so that depths
    /// of 10^4+ do not underflow.
    virtual double log_mass(word_view w) const {
        double m = mass(w);
        return m > 0 ? std::log(m) : -std::numeric_limits<double>::infinity();
    }

    /// Largest letter carrying mass, 0 if the support is unbounded.
    virtual digit alphabet_cap() const = 0;

    virtual bool shift_invariant() const = 0;

    /// Closed-form measures are exact; table-backed ones are not.
    virtual bool exact() const { return true; }

    /// Deepest cylinder the measure can evaluate, 0 if unlimited.
    virtual int max_depth() const { return 0; }

    /// True when mass([n]) is nonincreasing in n, so the mass-sorting
    /// bijection of the rank constructions is the identity.
    virtual bool digit_masses_sorted() const { return false; }

    /// Entropy when a closed form is known for this family.
    virtual std::optional<double> exact_entropy() const { return std::nullopt; }

    virtual std::string describe() const = 0;
};

using measure_ptr = std::shared_ptr<const cylinder_measure>;

inline void check_mass_range(double m, const char* who) {
    if (!(m >= 0.0 && m <= 1.0 + 1e-12))
        throw std::domain_error(std::string(who) + ": cylinder mass outside [0,1]");
}

// --- Bernoulli ---

class bernoulli_measure final : public cylinder_measure {
public:
    explicit bernoulli_measure(std::vector<double> p) : p_(std::move(p)) {
        if (p_.empty()) throw std::domain_error("bernoulli_measure: empty weight vector");
        double tot = 0.0;
        for (double x : p_) {
            if (x < 0) throw std::domain_error("bernoulli_measure: negative weight");
            tot += x;
        }
        if (std::abs(tot - 1.0) > 1e-9)
            throw std::domain_error("bernoulli_measure: weights must sum to 1");
    }

    double mass(word_view w) const override {
        double m = 1.0;
        for (digit d : w) m *= prob(d);
        return m;
    }
    double log_mass(word_view w) const override {
        double s = 0.0;
        for (digit d : w) {
            double p = prob(d);
            if (p == 0.0) return -std::numeric_limits<double>::infinity();
            s += std::log(p);
        }
        return s;
    }
    digit alphabet_cap() const override { return static_cast<digit>(p_.size()); }
    bool shift_invariant() const override { return true; }
    std::optional<double> exact_entropy() const override {
        double h = 0.0;
        for (double x : p_)
            if (x > 0) h -= x * std::log(x);
        return h;
    }
    std::string describe() const override {
        std::string s = "bernoulli:";
        for (size_t i = 0; i < p_.size(); ++i) s += (i ? "," : "") + std::to_string(p_[i]);
        return s;
    }
    const std::vector<double>& weights() const { return p_; }

    double prob(digit d) const {
        return (d >= 1 && d <= static_cast<digit>(p_.size())) ? p_[static_cast<size_t>(d - 1)]
                                                              : 0.0;
    }

private:
    std::vector<double> p_;
};

/// Countable Bernoulli with letter masses (6/π²) n^{-2}.
class inverse_square_bernoulli final : public cylinder_measure {
public:
    double mass(word_view w) const override {
        double m = 1.0;
        for (digit d : w) m *= prob(d);
        return m;
    }
    double log_mass(word_view w) const override {
        double s = 0.0;
        for (digit d : w) s += std::log(kInvBasel) - 2.0 * std::log(static_cast<double>(d));
        return s;
    }
    digit alphabet_cap() const override { return 0; }
    bool shift_invariant() const override { return true; }
    bool digit_masses_sorted() const override { return true; }
    std::string describe() const override { return "inverse-square-bernoulli"; }

    static double prob(digit d) {
        double dd = static_cast<double>(d);
        return kInvBasel / (dd * dd);
    }
};

/// Countable Bernoulli with p(n) ∝ 1/(n ln²(n+2)): normalizable, but the
/// digit expectation of ln n diverges, so cross-entropy against polynomially
/// decaying measures is infinite. The heavy-tail example family.
class log_heavy_bernoulli final : public cylinder_measure {
public:
    double mass(word_view w) const override {
        double m = 1.0;
        for (digit d : w) m *= prob(d);
        return m;
    }
    double log_mass(word_view w) const override {
        double s = 0.0;
        for (digit d : w) s += std::log(prob(d));
        return s;
    }
    digit alphabet_cap() const override { return 0; }
    bool shift_invariant() const override { return true; }
    bool digit_masses_sorted() const override { return true; }
    std::string describe() const override { return "log-heavy-bernoulli"; }

    static double prob(digit d) {
        double dd = static_cast<double>(d);
        double l = std::log(dd + 2.0);
        return norm_constant() / (dd * l * l);
    }

private:
    static double norm_constant() {
        static const double c = [] {
            double s = 0.0;
            for (digit d = 1; d <= 10000000; ++d) {
                double dd = static_cast<double>(d);
                double l = std::log(dd + 2.0);
                s += 1.0 / (dd * l * l);
            }
            s += 1.0 / std::log(1e7); // integral tail of 1/(x ln² x)
            return 1.0 / s;
        }();
        return c;
    }
};

// --- Markov (order l >= 1 on a finite sub-alphabet) ---
//
// States are l-words over {1..K}; rows give the law of the next letter. The
// induced cylinder measure is exactly consistent and shift-invariant when the
// stationary vector is invariant.

class markov_measure final : public cylinder_measure {
public:
    markov_measure(int order, digit K, std::vector<double> stationary,
                   std::vector<double> transition)
        : order_(order),
          K_(K),
          pi_(std::move(stationary)),
          trans_(std::move(transition)) {
        if (order_ < 1) throw std::domain_error("markov_measure: order must be >= 1");
        if (K_ < 1) throw std::domain_error("markov_measure: empty alphabet");
        nstates_ = pow_size(K_, order_);
        if (pi_.size() != nstates_ || trans_.size() != nstates_ * static_cast<size_t>(K_))
            throw std::domain_error("markov_measure: dimension mismatch");
        normalize_and_validate();
    }

    /// Order-1 convenience: row-stochastic P (K x K) and stationary p.
    static markov_measure order1(const std::vector<std::vector<double>>& P,
                                 std::vector<double> p) {
        digit K = static_cast<digit>(P.size());
        std::vector<double> t;
        t.reserve(static_cast<size_t>(K) * static_cast<size_t>(K));
        for (const auto& row : P) {
            if (row.size() != static_cast<size_t>(K))
                throw std::domain_error("markov order1: ragged transition matrix");
            for (double x : row) t.push_back(x);
        }
        return markov_measure(1, K, std::move(p), std::move(t));
    }

    /// Stationary vector of a row-stochastic matrix via power iteration.
    static std::vector<double> stationary_of(const std::vector<std::vector<double>>& P,
                                             int iters = 20000, double tol = 1e-14) {
        size_t K = P.size();
        std::vector<double> p(K, 1.0 / static_cast<double>(K)), q(K);
        for (int it = 0; it < iters; ++it) {
            std::fill(q.begin(), q.end(), 0.0);
            for (size_t i = 0; i < K; ++i)
                for (size_t j = 0; j < K; ++j) q[j] += p[i] * P[i][j];
            double diff = 0.0, tot = 0.0;
            for (size_t j = 0; j < K; ++j) tot += q[j];
            for (size_t j = 0; j < K; ++j) {
                q[j] /= tot;
                diff = std::max(diff, std::abs(q[j] - p[j]));
            }
            p.swap(q);
            if (diff < tol) break;
        }
        return p;
    }

    double mass(word_view w) const override {
        check_word(w);
        for (digit d : w)
            if (d > K_) return 0.0;
        const size_t n = w.size();
        if (n == 0) return 1.0;
        if (n <= static_cast<size_t>(order_)) return short_mass(w);
        double m = pi_[word_index(w.first(static_cast<size_t>(order_)), K_)];
        for (size_t i = static_cast<size_t>(order_); i < n && m > 0; ++i)
            m *= row(state_at(w, i))[static_cast<size_t>(w[i] - 1)];
        return m;
    }

    double log_mass(word_view w) const override {
        for (digit d : w)
            if (d > K_) return -std::numeric_limits<double>::infinity();
        const size_t n = w.size();
        if (n == 0) return 0.0;
        if (n <= static_cast<size_t>(order_)) {
            double m = short_mass(w);
            return m > 0 ? std::log(m) : -std::numeric_limits<double>::infinity();
        }
        double base = pi_[word_index(w.first(static_cast<size_t>(order_)), K_)];
        if (base == 0.0) return -std::numeric_limits<double>::infinity();
        double s = std::log(base);
        for (size_t i = static_cast<size_t>(order_); i < n; ++i) {
            double p = row(state_at(w, i))[static_cast<size_t>(w[i] - 1)];
            if (p == 0.0) return -std::numeric_limits<double>::infinity();
            s += std::log(p);
        }
        return s;
    }

    digit alphabet_cap() const override { return K_; }
    bool shift_invariant() const override { return true; }

    /// Exact conditional-entropy closed form Σ_u π(u) Σ_a -P(u,a) ln P(u,a).
    std::optional<double> exact_entropy() const override {
        double h = 0.0;
        for (size_t u = 0; u < nstates_; ++u) {
            if (pi_[u] == 0.0) continue;
            const double* r = row(u);
            double hu = 0.0;
            for (digit a = 1; a <= K_; ++a) {
                double p = r[static_cast<size_t>(a - 1)];
                if (p > 0) hu -= p * std::log(p);
            }
            h += pi_[u] * hu;
        }
        return h;
    }

    std::string describe() const override {
        return "markov:order=" + std::to_string(order_) + ",K=" + std::to_string(K_);
    }

    int order() const { return order_; }
    size_t state_count() const { return nstates_; }
    const std::vector<double>& stationary() const { return pi_; }
    const double* row(size_t state) const { return trans_.data() + state * static_cast<size_t>(K_); }

    double stationarity_defect() const {
        std::vector<double> img(nstates_, 0.0);
        for (size_t u = 0; u < nstates_; ++u) {
            const double* r = row(u);
            for (digit a = 1; a <= K_; ++a) img[next_state(u, a)] += pi_[u] * r[a - 1];
        }
        double d = 0.0;
        for (size_t u = 0; u < nstates_; ++u) d = std::max(d, std::abs(img[u] - pi_[u]));
        return d;
    }

    /// Primitivity of the transition support graph restricted to support states.
    bool primitive_support() const {
        std::vector<size_t> keep;
        for (size_t u = 0; u < nstates_; ++u)
            if (pi_[u] > 0) keep.push_back(u);
        if (keep.empty()) return false;
        std::vector<size_t> pos(nstates_, SIZE_MAX);
        for (size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = i;
        size_t n = keep.size();
        std::vector<uint8_t> adj(n * n, 0);
        for (size_t i = 0; i < n; ++i) {
            const double* r = row(keep[i]);
            for (digit a = 1; a <= K_; ++a)
                if (r[a - 1] > 0) {
                    size_t v = next_state(keep[i], a);
                    if (pos[v] != SIZE_MAX) adj[i * n + pos[v]] = 1;
                }
        }
        std::vector<uint8_t> reach = adj, cur = adj;
        // primitive iff some power (bounded by n^2 - 2n + 2 <= n*n) is all-ones
        for (size_t step = 1; step <= n * n + 1; ++step) {
            bool all = true;
            for (uint8_t b : cur)
                if (!b) {
                    all = false;
                    break;
                }
            if (all) return true;
            std::vector<uint8_t> nxt(n * n, 0);
            for (size_t i = 0; i < n; ++i)
                for (size_t k = 0; k < n; ++k)
                    if (cur[i * n + k])
                        for (size_t j = 0; j < n; ++j)
                            if (adj[k * n + j]) nxt[i * n + j] = 1;
            if (nxt == cur) return false; // stabilized without filling
            cur.swap(nxt);
        }
        return false;
    }

    size_t next_state(size_t state, digit a) const {
        if (order_ == 1) return static_cast<size_t>(a - 1);
        size_t base = static_cast<size_t>(K_);
        size_t mod = nstates_ / base;
        return (state % mod) * base + static_cast<size_t>(a - 1);
    }

    /// Sample the next letter given a state; cdf inversion on the row.
    digit sample_next(size_t state, double u) const {
        const double* r = row(state);
        double acc = 0.0;
        for (digit a = 1; a < K_; ++a) {
            acc += r[a - 1];
            if (u < acc) return a;
        }
        return K_;
    }
    size_t sample_initial_state(double u) const {
        double acc = 0.0;
        for (size_t s = 0; s + 1 < nstates_; ++s) {
            acc += pi_[s];
            if (u < acc) return s;
        }
        return nstates_ - 1;
    }

    void store(std::ostream& os) const {
        os << "markov\norder " << order_ << "\nalphabet " << K_ << "\nrows\n";
        os.precision(17);
        for (size_t u = 0; u < nstates_; ++u) {
            const double* r = row(u);
            for (digit a = 1; a <= K_; ++a) os << (a > 1 ? " " : "") << r[a - 1];
            os << "\n";
        }
        os << "stationary\n";
        for (size_t u = 0; u < nstates_; ++u) os << (u ? " " : "") << pi_[u];
        os << "\n";
    }

    static markov_measure load(std::istream& is) {
        std::string tok;
        is >> tok;
        if (tok != "markov") throw config_error("markov load: bad magic '" + tok + "'");
        int order = 0;
        digit K = 0;
        is >> tok >> order;
        if (tok != "order") throw config_error("markov load: expected 'order'");
        is >> tok >> K;
        if (tok != "alphabet") throw config_error("markov load: expected 'alphabet'");
        is >> tok;
        if (tok != "rows") throw config_error("markov load: expected 'rows'");
        size_t ns = pow_size(K, order);
        std::vector<double> trans(ns * static_cast<size_t>(K));
        for (auto& x : trans) is >> x;
        is >> tok;
        if (tok != "stationary") throw config_error("markov load: expected 'stationary'");
        std::vector<double> pi(ns);
        for (auto& x : pi) is >> x;
        if (!is) throw config_error("markov load: truncated input");
        return markov_measure(order, K, std::move(pi), std::move(trans));
    }

private:
    void normalize_and_validate() {
        double tot = 0.0;
        for (double x : pi_) {
            if (x < -1e-15) throw std::domain_error("markov_measure: negative stationary entry");
            tot += x;
        }
        if (tot <= 0) throw std::domain_error("markov_measure: zero stationary vector");
        for (auto& x : pi_) x = std::max(0.0, x) / tot;
        for (size_t u = 0; u < nstates_; ++u) {
            double* r = trans_.data() + u * static_cast<size_t>(K_);
            double rs = 0.0;
            for (digit a = 0; a < K_; ++a) {
                if (r[a] < -1e-15) throw std::domain_error("markov_measure: negative transition");
                r[a] = std::max(0.0, r[a]);
                rs += r[a];
            }
            if (pi_[u] > 0) {
                if (rs <= 0)
                    throw std::domain_error("markov_measure: support state with zero row");
                if (std::abs(rs - 1.0) > 1e-9)
                    throw std::domain_error("markov_measure: row does not sum to 1");
                for (digit a = 0; a < K_; ++a) r[a] /= rs;
            } else if (rs > 0) {
                for (digit a = 0; a < K_; ++a) r[a] /= rs;
            } else {
                // zero-mass state with no declared row: give it a uniform one
                for (digit a = 0; a < K_; ++a) r[a] = 1.0 / static_cast<double>(K_);
            }
        }
    }

    // marginal of a word shorter than the order
    double short_mass(word_view w) const {
        double m = 0.0;
        const size_t tail = static_cast<size_t>(order_) - w.size();
        const size_t block = pow_size(K_, static_cast<int>(tail));
        const size_t base = word_index(w, K_) * block;
        for (size_t i = 0; i < block; ++i) m += pi_[base + i];
        return m;
    }

    // dense index of the state formed by the l letters before position i
    size_t state_at(word_view w, size_t i) const {
        size_t idx = 0;
        for (size_t j = i - static_cast<size_t>(order_); j < i; ++j)
            idx = idx * static_cast<size_t>(K_) + static_cast<size_t>(w[j] - 1);
        return idx;
    }

    int order_;
    digit K_;
    size_t nstates_;
    std::vector<double> pi_;
    std::vector<double> trans_;
};

// --- point mass on a periodic orbit ---

class periodic_orbit_measure final : public cylinder_measure {
public:
    explicit periodic_orbit_measure(word w) : w_(std::move(w)) {
        if (w_.empty()) throw std::domain_error("periodic_orbit_measure: empty period word");
        check_word(w_);
    }

    double mass(word_view u) const override {
        if (u.empty()) return 1.0;
        size_t hits = 0;
        for (size_t s = 0; s < w_.size(); ++s) {
            bool match = true;
            for (size_t i = 0; i < u.size(); ++i)
                if (w_[(s + i) % w_.size()] != u[i]) {
                    match = false;
                    break;
                }
            if (match) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(w_.size());
    }
    digit alphabet_cap() const override { return *std::max_element(w_.begin(), w_.end()); }
    bool shift_invariant() const override { return true; }
    std::optional<double> exact_entropy() const override { return 0.0; }
    std::string describe() const override { return "periodic:" + format_word(w_); }
    const word& period() const { return w_; }

private:
    word w_;
};

// --- depth-limited table ---

class table_measure final : public cylinder_measure {
public:
    table_measure(std::map<word, double> table, int depth, bool invariant)
        : table_(std::move(table)), depth_(depth), invariant_(invariant) {
        if (depth_ < 1) throw std::domain_error("table_measure: depth must be >= 1");
        cap_ = 0;
        defect_.assign(static_cast<size_t>(depth_) + 1, 1.0);
        defect_[0] = 0.0;
        for (const auto& [w, m] : table_) {
            check_mass_range(m, "table_measure");
            if (w.empty() || static_cast<int>(w.size()) > depth_)
                throw std::domain_error("table_measure: word depth outside table depth");
            cap_ = std::max(cap_, *std::max_element(w.begin(), w.end()));
            if (m > 0) defect_[w.size()] -= m;
        }
    }

    /// Tabulate another measure down to `depth` over letters ≤ N.
    static table_measure truncate(const cylinder_measure& mu, int depth, digit N) {
        std::map<word, double> t;
        word w;
        std::function<void(int)> rec = [&](int k) {
            if (k > 0) {
                double m = mu.mass(w);
                if (m == 0.0) return;
                t[w] = m;
            }
            if (k == depth) return;
            for (digit a = 1; a <= N; ++a) {
                w.push_back(a);
                rec(k + 1);
                w.pop_back();
            }
        };
        rec(0);
        return table_measure(std::move(t), depth, mu.shift_invariant());
    }

    double mass(word_view w) const override {
        if (w.empty()) return 1.0;
        if (static_cast<int>(w.size()) > depth_)
            throw std::domain_error("table_measure: query deeper than table");
        auto it = table_.find(word(w.begin(), w.end()));
        return it == table_.end() ? 0.0 : it->second;
    }
    digit alphabet_cap() const override { return cap_; }
    bool shift_invariant() const override { return invariant_; }
    bool exact() const override { return false; }
    int max_depth() const override { return depth_; }
    std::string describe() const override {
        return "table:depth=" + std::to_string(depth_);
    }
    /// 1 - (total tabulated mass) per depth.
    double truncation_defect(int k) const { return defect_.at(static_cast<size_t>(k)); }

    void store(std::ostream& os) const {
        os.precision(17);
        for (const auto& [w, m] : table_) os << format_word(w) << " " << m << "\n";
    }
    static table_measure load(std::istream& is, bool invariant) {
        std::map<word, double> t;
        std::string ws;
        double m;
        int depth = 1;
        while (is >> ws >> m) {
            word w = parse_word(ws);
            depth = std::max<int>(depth, static_cast<int>(w.size()));
            t[std::move(w)] = m;
        }
        return table_measure(std::move(t), depth, invariant);
    }

private:
    std::map<word, double> table_;
    int depth_;
    bool invariant_;
    digit cap_;
    std::vector<double> defect_;
};

// --- deterministic function of a hidden Markov chain ---
//
// Generic source of exactly-consistent invariant measures that are not
// finite-order Markov; cylinder masses by the forward recursion.

class hmm_measure final : public cylinder_measure {
public:
    hmm_measure(std::vector<std::vector<double>> A, std::vector<double> pi,
                std::vector<digit> emit)
        : A_(std::move(A)), pi_(std::move(pi)), emit_(std::move(emit)) {
        size_t H = A_.size();
        if (pi_.size() != H || emit_.size() != H || H == 0)
            throw std::domain_error("hmm_measure: dimension mismatch");
        pi_ = markov_measure::stationary_of(A_);
        cap_ = *std::max_element(emit_.begin(), emit_.end());
    }

    double mass(word_view w) const override {
        if (w.empty()) return 1.0;
        size_t H = A_.size();
        std::vector<double> v(H, 0.0);
        for (size_t h = 0; h < H; ++h)
            if (emit_[h] == w[0]) v[h] = pi_[h];
        for (size_t i = 1; i < w.size(); ++i) {
            std::vector<double> nv(H, 0.0);
            for (size_t h = 0; h < H; ++h)
                if (v[h] > 0)
                    for (size_t g = 0; g < H; ++g)
                        if (emit_[g] == w[i]) nv[g] += v[h] * A_[h][g];
            v.swap(nv);
        }
        double m = 0.0;
        for (double x : v) m += x;
        return m;
    }
    digit alphabet_cap() const override { return cap_; }
    bool shift_invariant() const override { return true; }
    std::string describe() const override { return "hmm:H=" + std::to_string(A_.size()); }

private:
    std::vector<std::vector<double>> A_;
    std::vector<double> pi_;
    std::vector<digit> emit_;
    digit cap_;
};

// --- finite mixtures (sub-linearity tests, full-support surgery) ---

class mixture_measure final : public cylinder_measure {
public:
    mixture_measure(std::vector<std::pair<double, measure_ptr>> parts)
        : parts_(std::move(parts)) {
        if (parts_.empty()) throw std::domain_error("mixture_measure: empty mixture");
        double tot = 0.0;
        for (auto& [c, m] : parts_) {
            if (c < 0) throw std::domain_error("mixture_measure: negative coefficient");
            tot += c;
        }
        if (std::abs(tot - 1.0) > 1e-9)
            throw std::domain_error("mixture_measure: coefficients must sum to 1");
    }
    double mass(word_view w) const override {
        double m = 0.0;
        for (const auto& [c, mu] : parts_) m += c * mu->mass(w);
        return m;
    }
    digit alphabet_cap() const override {
        digit cap = 0;
        for (const auto& [c, mu] : parts_) {
            digit k = mu->alphabet_cap();
            if (k == 0) return 0;
            cap = std::max(cap, k);
        }
        return cap;
    }
    bool shift_invariant() const override {
        for (const auto& [c, mu] : parts_)
            if (!mu->shift_invariant()) return false;
        return true;
    }
    int max_depth() const override {
        int d = 0;
        for (const auto& [c, mu] : parts_) {
            int md = mu->max_depth();
            if (md > 0) d = (d == 0) ? md : std::min(d, md);
        }
        return d;
    }
    std::string describe() const override { return "mixture"; }

private:
    std::vector<std::pair<double, measure_ptr>> parts_;
};

/// (1-eps) mu + eps mu0 with mu0 full-support; the explicit surgery used
/// before Markov approximation when mu has zero-mass prefixes.
inline measure_ptr mix_full_support(measure_ptr mu, double eps, measure_ptr mu0 = nullptr) {
    if (!(eps > 0 && eps < 1)) throw std::domain_error("mix_full_support: eps in (0,1)");
    if (!mu0) mu0 = std::make_shared<inverse_square_bernoulli>();
    return std::make_shared<mixture_measure>(
        std::vector<std::pair<double, measure_ptr>>{{1.0 - eps, std::move(mu)},
                                                    {eps, std::move(mu0)}});
}

// --- point mass on one fixed (not necessarily periodic) sequence ---

class point_sequence_measure final : public cylinder_measure {
public:
    explicit point_sequence_measure(std::function<digit(uint64_t)> digits, digit cap = 0)
        : digits_(std::move(digits)), cap_(cap) {}

    double mass(word_view w) const override {
        for (size_t i = 0; i < w.size(); ++i)
            if (digits_(i) != w[i]) return 0.0;
        return 1.0;
    }
    digit alphabet_cap() const override { return cap_; }
    bool shift_invariant() const override { return false; }
    std::string describe() const override { return "point-sequence"; }

private:
    std::function<digit(uint64_t)> digits_;
    digit cap_;
};

// --- support enumeration ---

/// Depth-first visit of every w in Σ_N^k with mu([w]) > 0, pruning zero-mass
/// subtrees (consistency makes the pruning exact). f(word_view, mass).
template <class F>
void for_each_cylinder(const cylinder_measure& mu, int k, digit N, F&& f) {
    if (k < 1) throw std::domain_error("for_each_cylinder: depth must be >= 1");
    if (N < 1) throw std::domain_error("for_each_cylinder: alphabet cap must be >= 1");
    digit cap = mu.alphabet_cap();
    if (cap > 0) N = std::min(N, cap);
    word w;
    w.reserve(static_cast<size_t>(k));
    auto rec = [&](auto&& self, int depth) -> void {
        for (digit a = 1; a <= N; ++a) {
            w.push_back(a);
            double m = mu.mass(w);
            check_mass_range(m, "for_each_cylinder");
            if (m > 0.0) {
                if (depth == k)
                    f(word_view(w), m);
                else
                    self(self, depth + 1);
            }
            w.pop_back();
        }
    };
    rec(rec, 1);
}

/// max over sampled words of |mass(w) - Σ_a mass(wa)| (Kolmogorov consistency).
inline double consistency_defect(const cylinder_measure& mu, word_view w, digit N) {
    double total = 0.0;
    word ext(w.begin(), w.end());
    ext.push_back(1);
    for (digit a = 1; a <= N; ++a) {
        ext.back() = a;
        total += mu.mass(ext);
    }
    return std::abs(mu.mass(w) - total);
}

/// |mass(w) - Σ_a mass(aw)| (shift invariance).
inline double invariance_defect(const cylinder_measure& mu, word_view w, digit N) {
    double total = 0.0;
    word ext;
    ext.reserve(w.size() + 1);
    ext.push_back(1);
    ext.insert(ext.end(), w.begin(), w.end());
    for (digit a = 1; a <= N; ++a) {
        ext.front() = a;
        total += mu.mass(ext);
    }
    return std::abs(mu.mass(w) - total);
}

} // namespace gdim
