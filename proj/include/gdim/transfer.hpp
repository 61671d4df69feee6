// Truncated transfer operators on d-block states over {1..N}:
//
//   M[u -> v] = exp(φ(u · last(v)))   when shift(u) = prefix(v), else 0.
//
// Gurevich pressure is approximated by ln of the Perron root. Power iteration
// runs either on precomputed dense weights (N^{d+1} entries) or, for
// potentials with a head/tail factorization, through Chebyshev interpolation
// of the weight in the tail value, which reproduces the same matrix-vector
// product to machine precision at O(N^d · degree) cost per step.
#pragma once

#include "gdim/measure.hpp"
#include "gdim/potential.hpp"

namespace gdim {

struct transfer_options {
    int max_iterations = 2000;
    double tolerance = 1e-13; // relative eigenvalue stall
    int chebyshev_degree = 24;
    size_t dense_budget = size_t(1) << 26; // max N^{d+1} precomputed weights
    bool with_record = true;
    int orbit_check_depth = 8; // periodic-orbit sums up to this period length
    size_t orbit_budget = 2000000;
    uint64_t constant_sample_seed = 1;
    int constant_sample_size = 400;
    int constant_sample_depth = 6;
};

struct pressure_grid_entry {
    digit N;
    int d;
    double pressure;
    int iterations;
};
struct orbit_sum_entry {
    int period;
    digit cap; // the cap actually enumerated (budget-limited)
    double value;
};
struct pressure_record {
    std::vector<pressure_grid_entry> grid;
    std::vector<orbit_sum_entry> orbit_sums;
};

inline bool pow_within(digit N, int k, size_t budget) {
    size_t p = 1;
    for (int i = 0; i < k; ++i) {
        if (p > budget / static_cast<size_t>(N)) return false;
        p *= static_cast<size_t>(N);
    }
    return p <= budget;
}

namespace detail {

struct cheb_grid {
    std::vector<double> t, delta;
    cheb_grid(int degree, double lo, double hi) {
        int m = degree;
        t.resize(static_cast<size_t>(m) + 1);
        delta.resize(static_cast<size_t>(m) + 1);
        for (int i = 0; i <= m; ++i) {
            double c = 0.5 * (1.0 - std::cos(std::numbers::pi * i / m));
            t[static_cast<size_t>(i)] = lo + (hi - lo) * c;
            double w = (i == 0 || i == m) ? 0.5 : 1.0;
            delta[static_cast<size_t>(i)] = (i % 2 == 0) ? w : -w;
        }
    }
    size_t size() const { return t.size(); }
};

class transfer_engine {
public:
    transfer_engine(potential_ptr phi, digit N, int d, const transfer_options& opt)
        : phi_(std::move(phi)), N_(N), d_(d), opt_(opt) {
        if (N_ < 1) throw std::domain_error("transfer: alphabet cap must be >= 1");
        if (d_ < 1) throw std::domain_error("transfer: block depth must be >= 1");
        nstates_ = pow_size(N_, d_);
        nprefix_ = nstates_ / static_cast<size_t>(N_);
        factored_ = phi_->has_tail_factorization();
        if (factored_)
            init_factored();
        else
            init_dense();
    }

    size_t state_count() const { return nstates_; }
    digit cap() const { return N_; }
    int depth() const { return d_; }

    void apply_left(const std::vector<double>& x, std::vector<double>& y) const {
        factored_ ? apply_left_factored(x, y) : apply_left_dense(x, y);
    }
    void apply_right(const std::vector<double>& x, std::vector<double>& y) const {
        factored_ ? apply_right_factored(x, y) : apply_right_dense(x, y);
    }

    struct eigen_out {
        double lambda = 0.0;
        int iterations = 0;
        double residual = 0.0;
        std::vector<double> vec;
    };

    eigen_out power_iterate(bool left) const {
        std::vector<double> x(nstates_, 1.0 / static_cast<double>(nstates_));
        std::vector<double> y(nstates_);
        double lambda = 0.0, prev = -1.0;
        bool converged = false;
        int it = 0;
        for (; it < opt_.max_iterations; ++it) {
            left ? apply_left(x, y) : apply_right(x, y);
            double tot = 0.0;
            for (double v : y) tot += v;
            if (!(tot > 0) || !std::isfinite(tot))
                throw numeric_error("transfer: non-finite iterate");
            lambda = tot;
            for (auto& v : y) v /= tot;
            std::swap(x, y);
            if (std::abs(lambda - prev) <= opt_.tolerance * std::abs(lambda)) {
                converged = true;
                ++it;
                break;
            }
            prev = lambda;
        }
        if (!converged)
            throw numeric_error("transfer: power iteration exhausted its iteration budget");
        left ? apply_left(x, y) : apply_right(x, y);
        double tot = 0.0;
        for (double v : y) tot += v;
        double res = 0.0;
        for (size_t i = 0; i < nstates_; ++i) res += std::abs(y[i] / tot - x[i]);
        return {tot, it, res, std::move(x)};
    }

    double weight(size_t u, digit a) const {
        if (factored_) return phi_->head_weight(first_digit(u), Z_[next_state(u, a)]);
        return dense_[u * static_cast<size_t>(N_) + static_cast<size_t>(a - 1)];
    }
    size_t next_state(size_t u, digit a) const {
        return (u % nprefix_) * static_cast<size_t>(N_) + static_cast<size_t>(a - 1);
    }
    digit first_digit(size_t u) const { return static_cast<digit>(u / nprefix_) + 1; }

private:
    void init_dense() {
        size_t total = nstates_ * static_cast<size_t>(N_);
        if (total > opt_.dense_budget)
            throw numeric_error(
                "transfer: N^{d+1} weight table exceeds the dense budget and the potential "
                "offers no tail factorization");
        dense_.resize(total);
        word ext(static_cast<size_t>(d_) + 1);
        for (size_t ui = 0; ui < nstates_; ++ui) {
            word wu = word_from_index(ui, d_, N_);
            std::copy(wu.begin(), wu.end(), ext.begin());
            for (digit a = 1; a <= N_; ++a) {
                ext.back() = a;
                double v = phi_->eval(ext);
                if (!std::isfinite(v))
                    throw numeric_error("transfer: potential non-finite on grid word " +
                                        format_word(ext));
                dense_[ui * static_cast<size_t>(N_) + static_cast<size_t>(a - 1)] = std::exp(v);
            }
        }
    }

    void init_factored() {
        auto [lo, hi] = phi_->tail_range();
        grid_ = std::make_shared<cheb_grid>(opt_.chebyshev_degree, lo, hi);
        Z_.resize(nstates_); // tail value of each state word
        parallel_for(0, static_cast<int64_t>(nstates_), [&](int64_t vi) {
            Z_[static_cast<size_t>(vi)] =
                phi_->tail_value(word_from_index(static_cast<size_t>(vi), d_, N_));
        });
        const size_t m1 = grid_->size();
        Wnode_.resize(static_cast<size_t>(N_) * m1);
        for (digit h = 1; h <= N_; ++h)
            for (size_t i = 0; i < m1; ++i)
                Wnode_[static_cast<size_t>(h - 1) * m1 + i] = phi_->head_weight(h, grid_->t[i]);
    }

    void apply_left_dense(const std::vector<double>& x, std::vector<double>& y) const {
        std::fill(y.begin(), y.end(), 0.0);
        for (size_t u = 0; u < nstates_; ++u) {
            double xu = x[u];
            if (xu == 0.0) continue;
            const double* w = dense_.data() + u * static_cast<size_t>(N_);
            size_t base = (u % nprefix_) * static_cast<size_t>(N_);
            for (digit a = 0; a < N_; ++a) y[base + static_cast<size_t>(a)] += xu * w[a];
        }
    }

    void apply_right_dense(const std::vector<double>& x, std::vector<double>& y) const {
        parallel_for(0, static_cast<int64_t>(nstates_), [&](int64_t ui) {
            size_t u = static_cast<size_t>(ui);
            const double* w = dense_.data() + u * static_cast<size_t>(N_);
            size_t base = (u % nprefix_) * static_cast<size_t>(N_);
            double acc = 0.0;
            for (digit a = 0; a < N_; ++a) acc += w[a] * x[base + static_cast<size_t>(a)];
            y[u] = acc;
        });
    }

    // y[v] = Σ_h x[(h, prefix(v))] W(h, Z[v]); g_q(z) = Σ_h x[(h,q)] W(h, z)
    // is interpolated through its node values.
    void apply_left_factored(const std::vector<double>& x, std::vector<double>& y) const {
        const size_t m1 = grid_->size();
        std::vector<double> G(m1 * nprefix_);
        parallel_for(
            0, static_cast<int64_t>(nprefix_),
            [&](int64_t qi) {
                size_t q = static_cast<size_t>(qi);
                for (size_t i = 0; i < m1; ++i) {
                    double acc = 0.0;
                    for (size_t h = 0; h < static_cast<size_t>(N_); ++h)
                        acc += x[h * nprefix_ + q] * Wnode_[h * m1 + i];
                    G[i * nprefix_ + q] = acc;
                }
            },
            64);
        parallel_for(
            0, static_cast<int64_t>(nstates_),
            [&](int64_t vi) {
                size_t v = static_cast<size_t>(vi);
                size_t q = v / static_cast<size_t>(N_);
                y[v] = interpolate(G.data(), nprefix_, q, Z_[v]);
            },
            4096);
    }

    // y[(h,q)] = Σ_a W(h, Z[qN + a]) x[qN + a]
    void apply_right_factored(const std::vector<double>& x, std::vector<double>& y) const {
        const size_t m1 = grid_->size();
        std::vector<double> D(m1 * nprefix_, 0.0);
        parallel_for(
            0, static_cast<int64_t>(nprefix_),
            [&](int64_t qi) {
                size_t q = static_cast<size_t>(qi);
                std::vector<double> basis(m1);
                for (size_t a = 0; a < static_cast<size_t>(N_); ++a) {
                    size_t v = q * static_cast<size_t>(N_) + a;
                    lagrange_basis(Z_[v], basis.data());
                    for (size_t i = 0; i < m1; ++i) D[i * nprefix_ + q] += basis[i] * x[v];
                }
            },
            64);
        parallel_for(
            0, static_cast<int64_t>(N_),
            [&](int64_t hi) {
                size_t h = static_cast<size_t>(hi);
                for (size_t q = 0; q < nprefix_; ++q) {
                    double acc = 0.0;
                    for (size_t i = 0; i < m1; ++i) acc += Wnode_[h * m1 + i] * D[i * nprefix_ + q];
                    y[h * nprefix_ + q] = acc;
                }
            },
            1);
    }

    double interpolate(const double* G, size_t stride, size_t q, double z) const {
        const size_t m1 = grid_->size();
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < m1; ++i) {
            double diff = z - grid_->t[i];
            if (std::abs(diff) < 1e-300) return G[i * stride + q];
            double c = grid_->delta[i] / diff;
            num += c * G[i * stride + q];
            den += c;
        }
        return num / den;
    }
    void lagrange_basis(double z, double* out) const {
        const size_t m1 = grid_->size();
        double den = 0.0;
        for (size_t i = 0; i < m1; ++i) {
            double diff = z - grid_->t[i];
            if (std::abs(diff) < 1e-300) {
                for (size_t j = 0; j < m1; ++j) out[j] = (i == j) ? 1.0 : 0.0;
                return;
            }
            out[i] = grid_->delta[i] / diff;
            den += out[i];
        }
        for (size_t i = 0; i < m1; ++i) out[i] /= den;
    }

    potential_ptr phi_;
    digit N_;
    int d_;
    transfer_options opt_;
    size_t nstates_, nprefix_;
    bool factored_ = false;
    std::vector<double> dense_;
    std::shared_ptr<cheb_grid> grid_;
    std::vector<double> Z_;
    std::vector<double> Wnode_;
};

/// φ on the genuinely periodic point (w)^∞: the word repeated until the
/// canonical-tail substitution error sits far below double precision.
inline double eval_periodic(const potential& phi, word_view w) {
    size_t reps = 80 / w.size() + 2;
    word rep = repeat_word(w, reps);
    return phi.eval(rep);
}

} // namespace detail

struct pressure_result {
    double value = 0.0;
    int iterations = 0;
    double residual = 0.0;
    pressure_record record;
};

/// (1/n) ln Σ over period-n words with digits ≤ cap of exp(S_n φ).
inline double periodic_orbit_sum(const potential& phi, digit cap, int n) {
    double log_acc = -std::numeric_limits<double>::infinity();
    size_t total = pow_size(cap, n);
    for (size_t idx = 0; idx < total; ++idx) {
        word w = word_from_index(idx, n, cap);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += detail::eval_periodic(phi, rotate_word(w, static_cast<size_t>(i)));
        log_acc = log_add_exp(log_acc, s);
    }
    return log_acc / static_cast<double>(n);
}

namespace detail {
inline pressure_record build_record(potential_ptr phi, digit N, int d, double main_pressure,
                                    int main_iters, const transfer_options& opt) {
    pressure_record rec;
    transfer_options sub = opt;
    sub.with_record = false;
    for (int dd = std::max(1, d - 1); dd <= d; ++dd) {
        for (digit NN : {N / 8, N / 4, N / 2, N}) {
            if (NN < 2 || (NN == N && dd == d)) continue;
            if (!pow_within(NN, dd, size_t(1) << 24)) continue;
            transfer_engine e2(phi, NN, dd, sub);
            auto g = e2.power_iterate(true);
            rec.grid.push_back({NN, dd, std::log(g.lambda), g.iterations});
        }
    }
    rec.grid.push_back({N, d, main_pressure, main_iters});
    for (int n = 1; n <= opt.orbit_check_depth; ++n) {
        digit cap = N;
        while (cap > 1 && !pow_within(cap, n, opt.orbit_budget)) cap /= 2;
        rec.orbit_sums.push_back({n, cap, periodic_orbit_sum(*phi, cap, n)});
    }
    return rec;
}
} // namespace detail

inline pressure_result gurevich_pressure(potential_ptr phi, digit N, int d,
                                         transfer_options opt = {}) {
    if (!std::isfinite(phi->variation(1)))
        throw std::domain_error("gurevich_pressure: var_1 must be finite");
    pressure_result out;
    detail::transfer_engine eng(phi, N, d, opt);
    auto eig = eng.power_iterate(true);
    out.value = std::log(eig.lambda);
    out.iterations = eig.iterations;
    out.residual = eig.residual;
    if (opt.with_record)
        out.record = detail::build_record(phi, N, d, out.value, out.iterations, opt);
    return out;
}

// --- Gibbs model: the induced depth-d stationary block chain ---

class gibbs_model {
public:
    static gibbs_model build(potential_ptr phi, digit N, int d, transfer_options opt = {}) {
        gibbs_model m;
        m.phi_ = phi;
        m.N_ = N;
        m.d_ = d;
        m.engine_ = std::make_shared<detail::transfer_engine>(phi, N, d, opt);
        auto l = m.engine_->power_iterate(true);
        auto r = m.engine_->power_iterate(false);
        m.lambda_ = 0.5 * (l.lambda + r.lambda);
        m.pressure_ = std::log(m.lambda_);
        m.residual_ = std::max(l.residual, r.residual);
        m.left_ = std::move(l.vec);
        m.right_ = std::move(r.vec);
        m.finish_masses();
        if (opt.with_record)
            m.record_ = detail::build_record(phi, N, d, m.pressure_, l.iterations, opt);
        m.fit_constant(opt);
        return m;
    }

    digit alphabet_cap() const { return N_; }
    int block_depth() const { return d_; }
    double pressure() const { return pressure_; }
    double lambda() const { return lambda_; }
    double residual() const { return residual_; }
    const pressure_record& record() const { return record_; }
    const potential& phi() const { return *phi_; }
    potential_ptr phi_ptr() const { return phi_; }
    const std::vector<double>& left() const { return left_; }
    const std::vector<double>& right() const { return right_; }

    /// φ - P̂ at the representative of [w] (the P_φ = 0 normalization).
    double normalized_potential(word_view w) const { return phi_->eval(w) - pressure_; }

    /// S_{|w|}(φ - P̂) at the representative of [w].
    double birkhoff_normalized(word_view w) const {
        return birkhoff_sum(*phi_, w).value - static_cast<double>(w.size()) * pressure_;
    }

    double cylinder_log_mass(word_view w) const {
        if (w.empty()) return 0.0;
        for (digit a : w)
            if (a < 1 || a > N_) throw std::domain_error("gibbs_model: digit above cap");
        const size_t n = w.size();
        if (n < static_cast<size_t>(d_)) {
            double m = marginals_[n - 1][word_index(w, N_)];
            return m > 0 ? std::log(m) : -std::numeric_limits<double>::infinity();
        }
        size_t u = word_index(w.first(static_cast<size_t>(d_)), N_);
        double s = std::log(block_mass_[u]);
        for (size_t i = static_cast<size_t>(d_); i < n; ++i) {
            size_t v = engine_->next_state(u, w[i]);
            double q = engine_->weight(u, w[i]) * right_[v] / (lambda_ * right_[u]);
            s += std::log(q);
            u = v;
        }
        return s;
    }

    double cylinder_mass(word_view w) const { return std::exp(cylinder_log_mass(w)); }

    /// Exact entropy of the induced block chain.
    double induced_entropy() const {
        double h = 0.0;
        for (size_t u = 0; u < block_mass_.size(); ++u) {
            if (block_mass_[u] == 0.0) continue;
            double hu = 0.0;
            for (digit a = 1; a <= N_; ++a) {
                size_t v = engine_->next_state(u, a);
                double q = engine_->weight(u, a) * right_[v] / (lambda_ * right_[u]);
                if (q > 0) hu -= q * std::log(q);
            }
            h += block_mass_[u] * hu;
        }
        return h;
    }

    /// ∫ (φ - P̂) dμ with φ read off the (d+1)-word grid the operator saw;
    /// the exact pairing for finite-state variational checks.
    double sampled_potential_integral(const cylinder_measure& mu) const {
        double acc = 0.0;
        for_each_cylinder(mu, d_ + 1, N_,
                          [&](word_view w, double m) { acc += m * normalized_potential(w); });
        return acc;
    }

    double constant_estimate() const { return c_hat_; }

    /// Ĉ over a cylinder sample: max of max(ratio, 1/ratio),
    /// ratio = mass(w) / exp(S_{|w|}φ(x_w) - |w| P̂).
    double constant_estimate_on(const std::vector<word>& sample) const {
        double worst = 1.0;
        for (const auto& w : sample) {
            double lr = cylinder_log_mass(w) - birkhoff_normalized(w);
            worst = std::max(worst, std::exp(std::abs(lr)));
        }
        return worst;
    }

    measure_ptr induced_measure() const;

    void store(std::ostream& os) const {
        os.precision(17);
        os << "gibbs_model\npotential " << phi_->describe() << "\nN " << N_ << "\nd " << d_
           << "\npressure " << pressure_ << "\nlambda " << lambda_ << "\nC_hat " << c_hat_
           << "\nleft";
        for (double v : left_) os << " " << v;
        os << "\nright";
        for (double v : right_) os << " " << v;
        os << "\n";
    }

    /// Rebuild from text; the caller supplies the potential named in the file.
    static gibbs_model load(std::istream& is, potential_ptr phi, transfer_options opt = {}) {
        std::string tok;
        is >> tok;
        if (tok != "gibbs_model") throw config_error("gibbs_model load: bad magic");
        is >> tok;
        std::string id;
        std::getline(is, id);
        gibbs_model m;
        m.phi_ = phi;
        is >> tok >> m.N_ >> tok >> m.d_ >> tok >> m.pressure_ >> tok >> m.lambda_ >> tok >>
            m.c_hat_;
        size_t ns = pow_size(m.N_, m.d_);
        m.left_.resize(ns);
        m.right_.resize(ns);
        is >> tok;
        for (auto& v : m.left_) is >> v;
        is >> tok;
        for (auto& v : m.right_) is >> v;
        if (!is) throw config_error("gibbs_model load: truncated");
        m.engine_ = std::make_shared<detail::transfer_engine>(phi, m.N_, m.d_, opt);
        m.finish_masses();
        return m;
    }

private:
    void finish_masses() {
        block_mass_.resize(left_.size());
        double tot = 0.0;
        for (size_t u = 0; u < left_.size(); ++u) {
            block_mass_[u] = left_[u] * right_[u];
            tot += block_mass_[u];
        }
        for (auto& v : block_mass_) v /= tot;
        marginals_.assign(static_cast<size_t>(d_), {});
        marginals_[static_cast<size_t>(d_ - 1)] = block_mass_;
        for (int k = d_ - 1; k >= 1; --k) {
            size_t sz = pow_size(N_, k);
            std::vector<double> mk(sz, 0.0);
            const auto& deeper = marginals_[static_cast<size_t>(k)];
            for (size_t i = 0; i < deeper.size(); ++i) mk[i / static_cast<size_t>(N_)] += deeper[i];
            marginals_[static_cast<size_t>(k - 1)] = std::move(mk);
        }
    }

    void fit_constant(const transfer_options& opt) {
        counter_rng rng(opt.constant_sample_seed, 0x6b5);
        std::vector<word> sample;
        uint64_t ctr = 0;
        for (int i = 0; i < opt.constant_sample_size; ++i) {
            int len =
                1 + static_cast<int>(rng.bits(ctr++) %
                                     static_cast<uint64_t>(opt.constant_sample_depth));
            word w(static_cast<size_t>(len));
            for (auto& dgt : w)
                dgt = 1 + static_cast<digit>(rng.bits(ctr++) % static_cast<uint64_t>(N_));
            sample.push_back(std::move(w));
        }
        c_hat_ = constant_estimate_on(sample);
    }

    potential_ptr phi_;
    digit N_ = 0;
    int d_ = 0;
    std::shared_ptr<detail::transfer_engine> engine_;
    double lambda_ = 0.0, pressure_ = 0.0, residual_ = 0.0, c_hat_ = 1.0;
    std::vector<double> left_, right_, block_mass_;
    std::vector<std::vector<double>> marginals_;
    pressure_record record_;
};

namespace detail {
class gibbs_induced_measure final : public cylinder_measure {
public:
    explicit gibbs_induced_measure(std::shared_ptr<const gibbs_model> m) : m_(std::move(m)) {}
    double mass(word_view w) const override {
        for (digit a : w)
            if (a > m_->alphabet_cap()) return 0.0;
        return m_->cylinder_mass(w);
    }
    double log_mass(word_view w) const override {
        for (digit a : w)
            if (a > m_->alphabet_cap()) return -std::numeric_limits<double>::infinity();
        return m_->cylinder_log_mass(w);
    }
    digit alphabet_cap() const override { return m_->alphabet_cap(); }
    bool shift_invariant() const override { return true; }
    std::optional<double> exact_entropy() const override { return m_->induced_entropy(); }
    std::string describe() const override {
        return "gibbs:" + m_->phi().describe() + ",N=" + std::to_string(m_->alphabet_cap()) +
               ",d=" + std::to_string(m_->block_depth());
    }

private:
    std::shared_ptr<const gibbs_model> m_;
};
} // namespace detail

inline measure_ptr gibbs_model::induced_measure() const {
    return std::make_shared<detail::gibbs_induced_measure>(std::make_shared<gibbs_model>(*this));
}

} // namespace gdim
