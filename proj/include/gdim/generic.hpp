// Constructions of generic points and Cantor-set witnesses: typical words by
// rejection sampling, the digit-capped seed point, the square-position
// rank-interval family F_z with its companion measure, and the block-product
// family Y* with μ*.
#pragma once

#include "gdim/dstar.hpp"
#include "gdim/markov_approx.hpp"
#include "gdim/transfer.hpp"

namespace gdim {

// --- typical words ---

struct acceptance_test {
    std::string name;
    std::function<double(word_view)> statistic; // evaluated on the candidate
    double target = 0.0;
    double tol = 0.0;
};

struct typical_word_options {
    int k_max = 2;        // accumulator depth for the d* acceptance
    int64_t budget = 400; // rejection trials
    std::function<digit(uint64_t)> position_caps; // 1-based position -> max digit
    std::vector<acceptance_test> tests;
};

struct typical_word_result {
    word w;
    bool accepted = false;
    int64_t trials = 0;
    double dstar = 0.0;
    double deficit = 0.0; // worst constraint violation of the best candidate
};

inline typical_word_result try_typical_word(const markov_measure& mu, int64_t n, double eps,
                                            uint64_t seed, uint64_t stream_id,
                                            const typical_word_options& opt = {}) {
    auto mu_ptr = std::make_shared<markov_measure>(mu);
    const int k_max = std::min<int64_t>(opt.k_max, n);
    typical_word_result best;
    best.deficit = std::numeric_limits<double>::infinity();
    for (int64_t trial = 0; trial < opt.budget; ++trial) {
        digit_stream x =
            markov_stream(mu_ptr, seed, (stream_id << 20) ^ static_cast<uint64_t>(trial));
        word w = x.prefix(static_cast<uint64_t>(n));
        double deficit = 0.0;
        if (opt.position_caps) {
            bool capped_ok = true;
            for (int64_t i = 0; i < n; ++i)
                if (w[static_cast<size_t>(i)] > opt.position_caps(static_cast<uint64_t>(i + 1))) {
                    capped_ok = false;
                    break;
                }
            if (!capped_ok) continue; // caps are hard constraints
        }
        orbit_accumulator acc(k_max, mu.alphabet_cap());
        acc.extend(word_stream(w), n);
        double ds = d_star_orbit_vs_measure(acc, mu).value;
        deficit = std::max(deficit, ds - eps);
        for (const auto& test : opt.tests) {
            double stat = test.statistic(w);
            deficit = std::max(deficit, std::abs(stat - test.target) - test.tol);
        }
        if (deficit < best.deficit) {
            best.w = w;
            best.deficit = deficit;
            best.dstar = ds;
            best.trials = trial + 1;
        }
        if (deficit <= 0.0) {
            best.accepted = true;
            return best;
        }
    }
    best.trials = opt.budget;
    return best;
}

inline word typical_word(const markov_measure& mu, int64_t n, double eps, uint64_t seed,
                         uint64_t stream_id = 0, const typical_word_options& opt = {}) {
    auto res = try_typical_word(mu, n, eps, seed, stream_id, opt);
    if (!res.accepted)
        throw numeric_error("typical_word: budget exhausted; best candidate misses by " +
                            std::to_string(res.deficit) + " (d* = " + std::to_string(res.dstar) +
                            ")");
    return std::move(res.w);
}

// --- the seed construction ---

struct seed_schedule {
    std::vector<int64_t> n, t, m; // block length, repetitions, acceptance length
    std::vector<uint64_t> N_cum;  // cumulative block ends
    std::vector<double> eps;
    std::vector<digit> s; // max digit of each accepted word
    int64_t n_cap = 0;

    static constexpr long double growth_clamp = 4.6e18L; // uint64-safe N target

    void check() const {
        size_t J = n.size();
        if (!J) throw numeric_error("seed_schedule: empty");
        for (size_t j = 0; j + 1 < J; ++j) {
            if (N_cum[j + 1] <= N_cum[j]) throw numeric_error("seed_schedule: N not increasing");
            if (eps[j + 1] >= eps[j]) throw numeric_error("seed_schedule: eps not decreasing");
        }
        // N_j >= max{ min(N_{j-1}², clamp), s_{j+1} }  (s beyond the last level
        // repeats the last accepted word's max digit)
        for (size_t j = 1; j < J; ++j) {
            long double sq = static_cast<long double>(N_cum[j - 1]) *
                             static_cast<long double>(N_cum[j - 1]);
            long double lhs = static_cast<long double>(N_cum[j]);
            if (lhs < std::min(sq, growth_clamp))
                throw numeric_error("seed_schedule: square-growth constraint violated");
            digit s_next = s[std::min(j + 1, J - 1)];
            if (lhs < static_cast<long double>(s_next))
                throw numeric_error("seed_schedule: digit bound constraint violated");
        }
    }

    void store(std::ostream& os) const {
        os << "levels " << n.size() << "\nn_cap " << n_cap << "\n";
        os << "j n t m N eps s\n";
        for (size_t j = 0; j < n.size(); ++j)
            os << (j + 1) << " " << n[j] << " " << t[j] << " " << m[j] << " " << N_cum[j] << " "
               << eps[j] << " " << s[j] << "\n";
    }
};

struct generic_point {
    digit_stream stream;
    seed_schedule schedule;
    std::vector<word> typicals;
    uint64_t seed = 0;
};

struct seed_options {
    int levels = 4;
    double tolerance_factor = 0.4; // eps_j = factor · 4^{-j}
    uint64_t seed = 1;
    int k_max = 2;
    int64_t typical_budget = 400;
    int64_t n_cap = 1 << 21;    // block length ceiling (recorded in the schedule)
    int64_t m_probe_start = 64; // adaptive m_j search starts here
    digit approx_cap = 64;      // alphabet cap handed to markov_approximation
    uint64_t cap_scan_limit = 100000000;
};

namespace detail {

/// Smallest probe length where at least half of 20 trials accept; the
/// adaptive stand-in for the almost-uniform convergence thresholds m_j.
inline int64_t discover_m(const markov_measure& mu, double eps, uint64_t seed, uint64_t level,
                          const seed_options& opt) {
    typical_word_options two;
    two.k_max = opt.k_max;
    two.budget = 1;
    for (int64_t probe = opt.m_probe_start; probe <= opt.n_cap; probe *= 2) {
        int accepted = 0;
        for (int trial = 0; trial < 20; ++trial) {
            auto r = try_typical_word(mu, probe, eps, seed ^ 0xabcd,
                                      (level << 8) ^ (7000u + static_cast<uint64_t>(trial)), two);
            if (r.accepted) ++accepted;
        }
        if (accepted * 2 > 20) return probe;
    }
    throw numeric_error("build_seed: no acceptance length under the block ceiling at eps = " +
                        std::to_string(eps));
}

} // namespace detail

/// The digit-capped generic point z = W_1 W_2 ... with W_j a repeated typical
/// word of the j-th Markov approximation; beyond the last level the final
/// word cycles forever. caps(p) bounds the digit allowed at 1-based position p
/// and must be nondecreasing and unbounded.
inline generic_point build_seed(const cylinder_measure& mu, std::function<digit(uint64_t)> caps,
                                seed_options opt = {}) {
    if (!caps) caps = [](uint64_t) { return std::numeric_limits<digit>::max(); };
    const int J = opt.levels;
    if (J < 2) throw std::domain_error("build_seed: need at least 2 levels");

    std::vector<markov_measure> approx;
    approx.reserve(static_cast<size_t>(J));
    for (int j = 1; j <= J; ++j) approx.push_back(markov_approximation(mu, j, opt.approx_cap));

    seed_schedule sched;
    sched.n_cap = opt.n_cap;
    sched.eps.resize(static_cast<size_t>(J));
    sched.m.resize(static_cast<size_t>(J));
    for (int j = 1; j <= J; ++j) {
        sched.eps[static_cast<size_t>(j - 1)] = opt.tolerance_factor * std::pow(0.25, j);
        sched.m[static_cast<size_t>(j - 1)] = detail::discover_m(
            approx[static_cast<size_t>(j - 1)], sched.eps[static_cast<size_t>(j - 1)], opt.seed,
            static_cast<uint64_t>(j), opt);
    }
    sched.n.resize(static_cast<size_t>(J));
    for (int j = 1; j <= J; ++j) {
        int64_t m_next = sched.m[static_cast<size_t>(std::min(j, J - 1))];
        sched.n[static_cast<size_t>(j - 1)] =
            std::min(opt.n_cap, std::max(sched.m[static_cast<size_t>(j - 1)], m_next));
    }

    // sample the typical words; level 1 additionally honors the position caps
    std::vector<word> typicals(static_cast<size_t>(J));
    for (int j = 1; j <= J; ++j) {
        typical_word_options two;
        two.k_max = opt.k_max;
        two.budget = opt.typical_budget;
        if (j == 1) {
            // feasibility: each early position must admit some supported digit
            const auto& mu1 = approx[0];
            digit least = 0;
            word probe(1);
            for (digit a = 1; a <= mu1.alphabet_cap(); ++a) {
                probe[0] = a;
                if (mu1.mass(probe) > 0) {
                    least = a;
                    break;
                }
            }
            for (int64_t i = 1; i <= sched.n[0]; ++i)
                if (caps(static_cast<uint64_t>(i)) < least)
                    throw std::domain_error("build_seed: caps too tight at index " +
                                            std::to_string(i));
            two.position_caps = caps;
        }
        auto res = try_typical_word(approx[static_cast<size_t>(j - 1)],
                                    sched.n[static_cast<size_t>(j - 1)],
                                    sched.eps[static_cast<size_t>(j - 1)], opt.seed,
                                    static_cast<uint64_t>(j), two);
        if (!res.accepted) {
            if (j == 1 && two.position_caps)
                throw std::domain_error(
                    "build_seed: caps too tight at index 1 (no cap-compliant typical word)");
            throw numeric_error("build_seed: typical word budget exhausted at level " +
                                std::to_string(j));
        }
        typicals[static_cast<size_t>(j - 1)] = std::move(res.w);
    }
    sched.s.resize(static_cast<size_t>(J));
    for (int j = 0; j < J; ++j)
        sched.s[static_cast<size_t>(j)] =
            *std::max_element(typicals[static_cast<size_t>(j)].begin(),
                              typicals[static_cast<size_t>(j)].end());

    // repetitions: N_j >= max{N_{j-1}^2 (capped), s_{j+1}}, and block j+1 must
    // start past the first position whose cap admits s_{j+1}
    auto first_cap_position = [&](digit need) -> uint64_t {
        for (uint64_t p = 1; p <= opt.cap_scan_limit; ++p)
            if (caps(p) >= need) return p;
        throw std::domain_error("build_seed: caps too tight at index " +
                                std::to_string(opt.cap_scan_limit) + " (cap never reaches " +
                                std::to_string(need) + ")");
    };
    sched.t.resize(static_cast<size_t>(J));
    sched.N_cum.resize(static_cast<size_t>(J));
    uint64_t prev = 0;
    for (int j = 1; j <= J; ++j) {
        digit s_next = sched.s[static_cast<size_t>(std::min(j, J - 1))];
        long double target = static_cast<long double>(s_next);
        if (j >= 2) {
            long double square = static_cast<long double>(prev) * static_cast<long double>(prev);
            target = std::max(target, std::min(square, seed_schedule::growth_clamp));
        }
        target = std::max(target, static_cast<long double>(first_cap_position(s_next)) - 1.0L);
        int64_t nj = sched.n[static_cast<size_t>(j - 1)];
        long double need = target - static_cast<long double>(prev);
        int64_t tj = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(
                                              need / static_cast<long double>(nj))));
        sched.t[static_cast<size_t>(j - 1)] = tj;
        prev += static_cast<uint64_t>(tj) * static_cast<uint64_t>(nj);
        sched.N_cum[static_cast<size_t>(j - 1)] = prev;
    }
    sched.check();

    generic_point out;
    out.schedule = sched;
    out.typicals = typicals;
    out.seed = opt.seed;
    auto sch = std::make_shared<seed_schedule>(sched);
    auto typ = std::make_shared<std::vector<word>>(typicals);
    out.stream = generator_stream(
        [sch, typ](uint64_t p) -> digit {
            size_t J2 = sch->n.size();
            uint64_t start = 0;
            for (size_t j = 0; j < J2; ++j) {
                if (p < sch->N_cum[j]) {
                    const word& w = (*typ)[j];
                    return w[static_cast<size_t>((p - start) % w.size())];
                }
                start = sch->N_cum[j];
            }
            const word& w = typ->back(); // cycle the last typical word
            return w[static_cast<size_t>((p - sch->N_cum[J2 - 2]) % w.size())];
        },
        "seed");
    return out;
}

// --- verification ---

struct verify_result {
    std::vector<std::pair<int64_t, dstar_result>> trajectory;
    bool strictly_decreasing = true;
    bool nonincreasing = true;
};

inline verify_result verify_generic(const digit_stream& x, const cylinder_measure& mu,
                                    std::vector<int64_t> horizons, int k_max = 2, digit N = 0) {
    if (horizons.empty()) throw std::domain_error("verify_generic: empty horizons");
    std::sort(horizons.begin(), horizons.end());
    if (N == 0) N = mu.alphabet_cap() > 0 ? mu.alphabet_cap() : 50;
    verify_result out;
    orbit_accumulator acc(k_max, N);
    int64_t done = 0;
    for (int64_t h : horizons) {
        acc.extend(x, h - done);
        done = h;
        out.trajectory.push_back({h, d_star_orbit_vs_measure(acc, mu)});
    }
    for (size_t i = 1; i < out.trajectory.size(); ++i) {
        double prev = out.trajectory[i - 1].second.value;
        double cur = out.trajectory[i].second.value;
        if (cur >= prev) out.strictly_decreasing = false;
        if (cur > prev + 1e-12) out.nonincreasing = false;
    }
    return out;
}

// --- the F_z rank-interval family ---

struct f_level {
    int k = 0;
    uint64_t position = 0; // 1-based square position k²
    int64_t lo_rank = 0, hi_rank = 0;
    double log_count = 0.0;
};

struct f_family {
    std::vector<digit_stream> streams;
    measure_ptr companion; // the uniform rank-interval measure λ
    std::vector<f_level> levels;
    double eps = 0.0, delta = 0.0;
};

namespace detail {

class f_companion_measure final : public cylinder_measure {
public:
    f_companion_measure(digit_stream z, std::vector<f_level> levels,
                        std::function<digit(int64_t)> rank_to_digit, bool identity_ranks)
        : z_(std::move(z)),
          levels_(std::move(levels)),
          rank_(std::move(rank_to_digit)),
          identity_(identity_ranks) {}

    double mass(word_view w) const override { return std::exp(log_mass(w)); }
    double log_mass(word_view w) const override {
        double s = 0.0;
        size_t li = 0;
        for (size_t p = 0; p < w.size(); ++p) {
            while (li < levels_.size() && levels_[li].position < p + 1) ++li;
            if (li < levels_.size() && levels_[li].position == p + 1) {
                const auto& lv = levels_[li];
                bool inside;
                if (identity_) {
                    inside = w[p] >= lv.lo_rank && w[p] <= lv.hi_rank;
                } else {
                    inside = false;
                    for (int64_t r = lv.lo_rank; r <= lv.hi_rank; ++r)
                        if (rank_(r) == w[p]) {
                            inside = true;
                            break;
                        }
                }
                if (!inside) return -std::numeric_limits<double>::infinity();
                s -= lv.log_count;
            } else {
                if (w[p] != z_.at(p)) return -std::numeric_limits<double>::infinity();
            }
        }
        return s;
    }
    digit alphabet_cap() const override { return 0; }
    bool shift_invariant() const override { return false; }
    std::string describe() const override { return "f-companion"; }

private:
    digit_stream z_;
    std::vector<f_level> levels_;
    std::function<digit(int64_t)> rank_;
    bool identity_;
};

} // namespace detail

/// Streams agreeing with z off square positions; at position k² the digit is
/// drawn uniformly from the ν-mass rank interval (s_k - s_k^δ, s_k], with
/// s_k = 2^{k²} clamped to the rank table (or to 2^60 when ranks are the
/// identity). Also returns the uniform companion measure λ.
inline f_family sample_F(const generic_point& z, const cylinder_measure& nu, double eps,
                         double delta, int count, uint64_t depth, uint64_t seed,
                         int64_t rank_table_size = 1 << 20) {
    if (!(delta > 0 && delta < 1)) throw std::domain_error("sample_F: delta in (0,1)");
    if (!(eps > 0 && eps < 1)) throw std::domain_error("sample_F: eps in (0,1)");

    // rank -> digit map: identity for mass-sorted measures, else a sort table
    std::function<digit(int64_t)> rank_to_digit;
    int64_t max_rank;
    const bool identity_ranks = nu.digit_masses_sorted();
    if (identity_ranks) {
        rank_to_digit = [](int64_t r) { return static_cast<digit>(r); };
        max_rank = int64_t(1) << 60;
    } else {
        auto table = std::make_shared<std::vector<digit>>();
        std::vector<std::pair<double, digit>> masses;
        word w(1);
        for (digit a = 1; a <= rank_table_size; ++a) {
            w[0] = a;
            masses.push_back({-nu.mass(w), a});
        }
        std::stable_sort(masses.begin(), masses.end());
        table->reserve(masses.size());
        for (auto& [m, a] : masses) table->push_back(a);
        rank_to_digit = [table](int64_t r) { return (*table)[static_cast<size_t>(r - 1)]; };
        max_rank = rank_table_size;
    }

    f_family fam;
    fam.eps = eps;
    fam.delta = delta;
    for (int k = 1; static_cast<uint64_t>(k) * static_cast<uint64_t>(k) <= depth; ++k) {
        f_level lv;
        lv.k = k;
        lv.position = static_cast<uint64_t>(k) * static_cast<uint64_t>(k);
        double log2_sk = std::min<double>(static_cast<double>(k) * k, 60.0);
        int64_t sk = std::min<int64_t>(max_rank, int64_t(1) << static_cast<int>(log2_sk));
        double skd = std::pow(static_cast<double>(sk), delta);
        lv.hi_rank = sk;
        // (s - s^δ, s] ∩ ℕ = {s - ⌈s^δ⌉ + 1, ..., s}, kept in integers so huge
        // s_k do not lose the interval to double rounding
        int64_t span = static_cast<int64_t>(std::ceil(skd));
        lv.lo_rank = std::max<int64_t>(1, sk - span + 1);
        if (lv.lo_rank > lv.hi_rank)
            throw std::domain_error("sample_F: empty rank interval at level " + std::to_string(k));
        double cnt = static_cast<double>(lv.hi_rank - lv.lo_rank + 1);
        lv.log_count = sk > (int64_t(1) << 40) ? delta * std::log(static_cast<double>(sk))
                                               : std::log(cnt);
        fam.levels.push_back(lv);
    }

    auto levels = std::make_shared<std::vector<f_level>>(fam.levels);
    digit_stream zs = z.stream;
    for (int i = 0; i < count; ++i) {
        counter_rng rng(seed, 0xF0 + static_cast<uint64_t>(i));
        auto rk = rank_to_digit;
        fam.streams.push_back(generator_stream(
            [zs, levels, rng, rk](uint64_t p) -> digit {
                uint64_t pos1 = p + 1;
                uint64_t root = static_cast<uint64_t>(std::llround(std::sqrt(double(pos1))));
                if (root * root == pos1 && root >= 1 && root <= levels->size()) {
                    const auto& lv = (*levels)[root - 1];
                    uint64_t span = static_cast<uint64_t>(lv.hi_rank - lv.lo_rank + 1);
                    int64_t r = lv.lo_rank + static_cast<int64_t>(rng.bits(p) % span);
                    return rk(r);
                }
                return zs.at(p);
            },
            "f-sample"));
    }
    fam.companion = std::make_shared<detail::f_companion_measure>(z.stream, fam.levels,
                                                                  rank_to_digit, identity_ranks);
    return fam;
}

/// The digit-value variant used for the Euclidean-metric check: at position k²
/// the digit lies in (a^{k²}, 2a^{k²}]; digits beyond int64 range are exposed
/// through log_at exactly and clamped in at().
inline digit_stream sample_F_digit_interval(const generic_point& z, double a, int64_t count_id,
                                            uint64_t seed) {
    if (!(a > 1.0)) throw std::domain_error("sample_F_digit_interval: a > 1");
    digit_stream zs = z.stream;
    counter_rng rng(seed, 0xFD0 + static_cast<uint64_t>(count_id));
    double ln_a = std::log(a);
    auto is_square = [](uint64_t pos1, uint64_t& root) {
        root = static_cast<uint64_t>(std::llround(std::sqrt(double(pos1))));
        return root * root == pos1;
    };
    auto log_value = [rng, ln_a](uint64_t p, uint64_t root) {
        double u = rng.uniform(p); // digit = a^{k²}(1+u)
        return static_cast<double>(root) * static_cast<double>(root) * ln_a + std::log1p(u);
    };
    return generator_stream(
        [zs, is_square, log_value](uint64_t p) -> digit {
            uint64_t pos1 = p + 1, root = 0;
            if (is_square(pos1, root)) {
                double lv = log_value(p, root);
                if (lv < 60.0 * std::numbers::ln2)
                    return static_cast<digit>(std::floor(std::exp(lv)));
                return digit(1) << 61; // true digit exceeds int64: see log_at
            }
            return zs.at(p);
        },
        "f-digit-interval",
        [zs, is_square, log_value](uint64_t p, digit d) -> double {
            uint64_t pos1 = p + 1, root = 0;
            if (is_square(pos1, root)) return log_value(p, root);
            return std::log(static_cast<double>(d));
        });
}

// --- the Y* block-product family ---

struct ystar_options {
    double tolerance_factor = 0.5; // eps_j = factor · 4^{-j}
    int k_max = 2;
    int64_t typical_budget = 300;
    int64_t n_cap = 50000; // block length ceiling
    int64_t m_probe_start = 64;
    digit approx_cap = 64;
    double infinity_threshold = 1e4; // forwarded to the h(nu|mu) pre-check
};

struct ystar_family {
    std::vector<digit_stream> streams;
    measure_ptr companion; // μ*: product of per-level block masses
    std::vector<int64_t> block_lengths;
    std::vector<uint64_t> boundaries; // N_j for the emitted levels
    std::vector<double> h_level;      // h_{μ_j}
    std::vector<double> hrel_level;   // h(ν|μ_j) per the sampled integral
};

namespace detail {

class ystar_companion final : public cylinder_measure {
public:
    ystar_companion(std::vector<std::shared_ptr<const markov_measure>> levels,
                    std::vector<int64_t> lengths)
        : levels_(std::move(levels)), lengths_(std::move(lengths)) {}

    double mass(word_view w) const override { return std::exp(log_mass(w)); }
    double log_mass(word_view w) const override {
        double s = 0.0;
        size_t pos = 0, level = 0;
        while (pos < w.size()) {
            size_t li = std::min(level, levels_.size() - 1);
            size_t len = static_cast<size_t>(lengths_[li]);
            size_t take = std::min(len, w.size() - pos);
            s += levels_[li]->log_mass(w.subspan(pos, take));
            pos += take;
            ++level;
        }
        return s;
    }
    digit alphabet_cap() const override { return levels_.back()->alphabet_cap(); }
    bool shift_invariant() const override { return false; }
    std::string describe() const override { return "ystar-companion"; }

private:
    std::vector<std::shared_ptr<const markov_measure>> levels_;
    std::vector<int64_t> lengths_;
};

} // namespace detail

/// Streams formed by concatenating independent typical words of the Markov
/// approximations μ_j, accepted under d*, Birkhoff (S_n φ*/n near -h(ν|μ_j))
/// and entropy (SMB) tests; beyond the last level fresh μ_J blocks continue.
inline ystar_family sample_Ystar(const cylinder_measure& mu, const gibbs_model& model, int levels,
                                 int count, uint64_t seed, ystar_options opt = {}) {
    if (levels < 1) throw std::domain_error("sample_Ystar: levels >= 1");
    // pre: finite relative entropy
    {
        auto probe = relative_entropy_integral(model, mu, 2, 0, opt.infinity_threshold);
        if (probe.infinite)
            throw support_error("sample_Ystar: h(nu|mu) flagged infinite upstream");
    }
    ystar_family fam;
    std::vector<std::shared_ptr<const markov_measure>> approx;
    std::vector<double> eps(static_cast<size_t>(levels));
    std::vector<std::vector<acceptance_test>> tests(static_cast<size_t>(levels));
    potential_ptr phi = model.phi_ptr();
    double pressure = model.pressure();
    for (int j = 1; j <= levels; ++j) {
        auto mj = std::make_shared<markov_measure>(markov_approximation(mu, j, opt.approx_cap));
        approx.push_back(mj);
        eps[static_cast<size_t>(j - 1)] = opt.tolerance_factor * std::pow(0.25, j);
        double h_j = entropy_markov(*mj);
        double hrel_j = -model.sampled_potential_integral(*mj);
        fam.h_level.push_back(h_j);
        fam.hrel_level.push_back(hrel_j);
        double tol = std::max(eps[static_cast<size_t>(j - 1)], 0.02);
        acceptance_test birkhoff{
            "birkhoff",
            [phi, pressure](word_view w) {
                return (birkhoff_sum(*phi, w).value -
                        static_cast<double>(w.size()) * pressure) /
                       static_cast<double>(w.size());
            },
            -hrel_j, tol};
        acceptance_test smb{"smb",
                            [mj](word_view w) {
                                return -mj->log_mass(w) / static_cast<double>(w.size());
                            },
                            h_j, tol};
        tests[static_cast<size_t>(j - 1)] = {birkhoff, smb};
    }

    // acceptance lengths and the block schedule
    std::vector<int64_t> m(static_cast<size_t>(levels));
    for (int j = 1; j <= levels; ++j) {
        typical_word_options two;
        two.k_max = opt.k_max;
        two.budget = 1;
        two.tests = tests[static_cast<size_t>(j - 1)];
        int64_t found = 0;
        for (int64_t probe = opt.m_probe_start; probe <= opt.n_cap; probe *= 2) {
            int accepted = 0;
            for (int trial = 0; trial < 20; ++trial) {
                auto r = try_typical_word(*approx[static_cast<size_t>(j - 1)], probe,
                                          eps[static_cast<size_t>(j - 1)], seed ^ 0x5157,
                                          (static_cast<uint64_t>(j) << 9) ^ (8000u + trial), two);
                if (r.accepted) ++accepted;
            }
            if (accepted * 2 > 20) {
                found = probe;
                break;
            }
        }
        if (!found)
            throw numeric_error("sample_Ystar: no acceptance length under the block ceiling");
        m[static_cast<size_t>(j - 1)] = found;
    }
    fam.block_lengths.resize(static_cast<size_t>(levels));
    uint64_t prev = 0;
    for (int j = 1; j <= levels; ++j) {
        int64_t mj = m[static_cast<size_t>(j - 1)];
        int64_t m_next = m[static_cast<size_t>(std::min(j, levels - 1))];
        long double square = static_cast<long double>(prev) * static_cast<long double>(prev);
        int64_t nj = std::max<int64_t>({mj, m_next,
                                        static_cast<int64_t>(std::min(
                                            square, static_cast<long double>(opt.n_cap)))});
        nj = std::min(nj, opt.n_cap);
        fam.block_lengths[static_cast<size_t>(j - 1)] = nj;
        prev += static_cast<uint64_t>(nj);
        fam.boundaries.push_back(prev);
    }

    fam.companion = std::make_shared<detail::ystar_companion>(approx, fam.block_lengths);

    for (int i = 0; i < count; ++i) {
        struct block_state {
            std::vector<word> blocks;
            uint64_t total = 0;
        };
        auto st = std::make_shared<block_state>();
        auto approx_copy = approx;
        auto eps_copy = eps;
        auto tests_copy = tests;
        auto lengths = fam.block_lengths;
        int64_t budget = opt.typical_budget;
        int kmax = opt.k_max;
        uint64_t sd = seed;
        int id = i;
        fam.streams.push_back(generator_stream(
            [st, approx_copy, eps_copy, tests_copy, lengths, budget, kmax, sd,
             id](uint64_t p) mutable -> digit {
                while (p >= st->total) {
                    size_t bi = st->blocks.size();
                    size_t li = std::min(bi, approx_copy.size() - 1);
                    typical_word_options two;
                    two.k_max = kmax;
                    two.budget = budget;
                    two.tests = tests_copy[li];
                    word w = typical_word(
                        *approx_copy[li], lengths[li], eps_copy[li], sd ^ 0x59,
                        (static_cast<uint64_t>(id) << 24) ^ (static_cast<uint64_t>(bi) << 4),
                        two);
                    st->total += w.size();
                    st->blocks.push_back(std::move(w));
                }
                uint64_t start = 0;
                for (const auto& b : st->blocks) {
                    if (p < start + b.size()) return b[static_cast<size_t>(p - start)];
                    start += b.size();
                }
                throw numeric_error("ystar stream: unreachable");
            },
            "ystar-sample"));
    }
    return fam;
}

} // namespace gdim
