// Continued-fraction coding of the Gauss map: continuants with a log-space
// regime for deep words, basic intervals, the Gauss measure, the potential
// family φ_s(x) = 2s ln x, and the dimension formulas for generic points.
#pragma once

#include "gdim/dimension.hpp"

namespace gdim {

// --- continuants ---
//
// p_{-1}=1, p_0=0, q_{-1}=0, q_0=1, p_k = a_k p_{k-1} + p_{k-2} (same for q).
// Above 1e300 the recursion switches to (ln q, q_{k-1}/q_k), which stays exact
// to double precision and accepts digits given only by their logarithm.

class cf_continuants {
public:
    cf_continuants() = default;

    void push(digit a) { push_log(static_cast<double>(a), std::log(static_cast<double>(a))); }

    /// Push a digit known by value v = exp(la); v may be +inf if la > 709.
    void push_log(double v, double la) {
        ++depth_;
        if (!log_mode_ && depth_ == 1 && (!(la < 690.0) || !std::isfinite(v))) {
            // huge first digit: p_1 = 1, q_1 = a, straight into log space
            log_mode_ = true;
            lp_ = 0.0;
            rp_ = 0.0;
            lq_ = la;
            rq_ = std::exp(-la);
            return;
        }
        if (!log_mode_) {
            double pn = v * p_ + pm_, qn = v * q_ + qm_;
            if (std::isfinite(qn) && qn < 1e300) {
                pm_ = p_;
                p_ = pn;
                qm_ = q_;
                q_ = qn;
                return;
            }
            to_log_mode();
        }
        // ln q_k = ln q_{k-1} + ln(a + q_{k-2}/q_{k-1})
        double step = (la > 700 || !std::isfinite(v)) ? la + std::log1p(rq_ * std::exp(-la))
                                                      : std::log(v + rq_);
        lq_ += step;
        rq_ = 1.0 / ((std::isfinite(v) ? v : std::exp(la)) + rq_);
        double stepp = (la > 700 || !std::isfinite(v)) ? la + std::log1p(rp_ * std::exp(-la))
                                                       : std::log(v + rp_);
        lp_ += stepp;
        rp_ = 1.0 / ((std::isfinite(v) ? v : std::exp(la)) + rp_);
    }

    int depth() const { return depth_; }
    bool log_mode() const { return log_mode_; }
    double q() const { return log_mode_ ? std::exp(lq_) : q_; }
    double q_prev_over_q() const { return log_mode_ ? rq_ : (q_ > 0 ? qm_ / q_ : 0.0); }
    double log_q() const { return log_mode_ ? lq_ : std::log(q_); }

    /// ln of the basic interval length 1/(q_n (q_n + q_{n-1})).
    double log_interval_length() const {
        if (depth_ == 0) return 0.0;
        return -(2.0 * log_q() + std::log1p(q_prev_over_q()));
    }
    double interval_length() const { return std::exp(log_interval_length()); }

    /// Interval endpoints p/q and (p+p')/(q+q') in increasing order; valid
    /// while the convergents still fit doubles (they freeze afterwards).
    std::pair<double, double> endpoints() const {
        double lo, hi;
        if (!log_mode_) {
            lo = p_ / q_;
            hi = (p_ + pm_) / (q_ + qm_);
        } else {
            lo = std::exp(lp_ - lq_);
            hi = lo; // interval shorter than 1 ulp
        }
        if (lo > hi) std::swap(lo, hi);
        return {lo, hi};
    }

private:
    void to_log_mode() {
        lq_ = std::log(q_);
        rq_ = qm_ / q_;
        lp_ = std::log(p_);
        rp_ = pm_ / p_;
        log_mode_ = true;
    }

    double pm_ = 1.0, p_ = 0.0, qm_ = 0.0, q_ = 1.0;
    double lp_ = 0.0, rp_ = 0.0, lq_ = 0.0, rq_ = 0.0;
    bool log_mode_ = false;
    int depth_ = 0;
};

/// κ of the canonical-tail extension of w: fold 1/(a + z) back through the
/// word from the fixed point of the repeated last digit.
inline double cf_value_canonical(word_view w) {
    if (w.empty()) throw std::domain_error("cf_value_canonical: empty word");
    double t = static_cast<double>(w.back());
    double z = 0.5 * (std::sqrt(t * t + 4.0) - t); // [0; t, t, t, ...]
    for (size_t i = w.size(); i-- > 0;) z = 1.0 / (static_cast<double>(w[i]) + z);
    return z;
}

// --- encoding ---

/// First n partial quotients of x ∈ (0,1); throws on (numerically) rational x
/// and on digits beyond the overflow guard.
inline word cf_encode(double x, int n, digit overflow_guard = digit(1) << 50) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("cf_encode: x must lie in (0,1)");
    word w;
    w.reserve(static_cast<size_t>(n));
    double y = x;
    for (int i = 0; i < n; ++i) {
        if (y <= 0.0 || y >= 1.0)
            throw std::domain_error("cf_encode: rational truncation detected after digit " +
                                    std::to_string(i));
        double inv = 1.0 / y;
        if (inv > static_cast<double>(overflow_guard) + 1.0)
            throw std::domain_error("cf_encode: digit exceeds overflow guard");
        digit a = static_cast<digit>(std::floor(inv));
        if (a < 1) a = 1;
        w.push_back(a);
        y = inv - std::floor(inv);
    }
    return w;
}

inline digit_stream cf_digit_stream(double x, digit overflow_guard = digit(1) << 50) {
    struct impl : detail::stream_impl {
        double y;
        digit guard;
        digit generate(uint64_t) override {
            if (y <= 0.0 || y >= 1.0) throw numeric_error("cf stream: rational truncation");
            double inv = 1.0 / y;
            if (inv > static_cast<double>(guard) + 1.0)
                throw numeric_error("cf stream: digit exceeds overflow guard");
            digit a = static_cast<digit>(std::floor(inv));
            if (a < 1) a = 1;
            y = inv - std::floor(inv);
            return a;
        }
        std::string provenance() const override { return "cf-encode"; }
    };
    auto im = std::make_shared<impl>();
    im->y = x;
    im->guard = overflow_guard;
    return digit_stream(im);
}

/// Length of the rank-n basic interval Δ(ω) = 1/(q_n (q_n + q_{n-1})).
inline double basic_interval_length(word_view w) {
    if (w.empty()) throw std::domain_error("basic_interval_length: empty word");
    cf_continuants c;
    for (digit a : w) c.push(a);
    return c.interval_length();
}

inline double log_basic_interval_length(word_view w) {
    if (w.empty()) throw std::domain_error("log_basic_interval_length: empty word");
    cf_continuants c;
    for (digit a : w) c.push(a);
    return c.log_interval_length();
}

// --- the Gauss measure (density 1/(ln 2) · 1/(1+x)) ---

class gauss_measure final : public cylinder_measure {
public:
    double mass(word_view w) const override {
        if (w.empty()) return 1.0;
        cf_continuants c;
        for (digit a : w) c.push(a);
        auto [lo, hi] = c.endpoints();
        return std::log1p((hi - lo) / (1.0 + lo)) / std::numbers::ln2;
    }
    double log_mass(word_view w) const override {
        if (w.empty()) return 0.0;
        cf_continuants c;
        for (digit a : w) c.push(a);
        auto [lo, hi] = c.endpoints();
        double len = hi - lo;
        if (!c.log_mode() && len > 1e-12)
            return std::log(std::log1p(len / (1.0 + lo))) - std::log(std::numbers::ln2);
        // deep words: mass = length / (ln2 (1+ξ)), ξ in the interval
        return c.log_interval_length() - std::log1p(lo) - std::log(std::numbers::ln2);
    }
    digit alphabet_cap() const override { return 0; }
    bool shift_invariant() const override { return true; }
    bool digit_masses_sorted() const override { return true; }
    std::string describe() const override { return "gauss"; }
};

// --- the potential family φ_s = 2s ln κ ---

class gauss_potential final : public potential {
public:
    explicit gauss_potential(double s) : s_(s) {
        if (!(s > 0.5)) throw std::domain_error("gauss_potential: requires s > 1/2");
        // var bounds from continuant growth: spread of ln κ over an n-cylinder
        // is at most 2/(p_n q_n) <= 2/(F_{n-1} F_{n+1})
        fib_.assign(92, 0.0);
        fib_[1] = 1.0;
        for (size_t i = 2; i < fib_.size(); ++i) fib_[i] = fib_[i - 1] + fib_[i - 2];
    }

    double s() const { return s_; }

    double eval(word_view w) const override { return 2.0 * s_ * std::log(cf_value_canonical(w)); }

    double variation(int n) const override {
        if (n < 1) throw std::domain_error("variation: n >= 1");
        if (n == 1) return 2.0 * s_ * std::numbers::ln2;
        if (n + 1 < static_cast<int>(fib_.size()))
            return 4.0 * s_ / (fib_[static_cast<size_t>(n - 1)] * fib_[static_cast<size_t>(n + 1)]);
        // golden-ratio asymptotics past the table
        double g = 0.5 * (std::sqrt(5.0) - 1.0);
        return 4.0 * s_ * std::pow(g, 2.0 * n);
    }

    double variation_tail(int from) const override {
        // geometric majorant with ratio g^2 ≈ 0.382
        double g2 = std::pow(0.5 * (std::sqrt(5.0) - 1.0), 2.0);
        return variation(std::max(from, 1)) / (1.0 - g2);
    }

    bool has_tail_factorization() const override { return true; }
    /// z = κ(suffix with canonical tail) ∈ (0, 1)
    double tail_value(word_view suffix) const override { return cf_value_canonical(suffix); }
    /// exp(φ_s(h · suffix)) = (1/(h+z))^{2s}
    double head_weight(digit head, double z) const override {
        double r = 1.0 / (static_cast<double>(head) + z);
        return s_ == 1.0 ? r * r : std::pow(r, 2.0 * s_);
    }
    std::pair<double, double> tail_range() const override { return {0.0, 1.0}; }

    std::string describe() const override { return "gauss_potential:s=" + std::to_string(s_); }

private:
    double s_;
    std::vector<double> fib_;
};

// --- dimension of generic points in the Gauss system ---

struct cf_dimension_options {
    digit model_N = 1000; // transfer operator caps; model_N = 0 skips the
    int model_d = 2;      // model (s = 1 only, P = 0 analytic)
    digit alpha_rank = 100000;
    int integral_k = 2;
    digit integral_cap = 10000;
    int entropy_k = 2;
    digit entropy_cap = 10000;
    double infinity_threshold = 1e4;
    transfer_options transfer;
};

struct cf_dimension_report {
    double s = 1.0;
    double alpha = 0.5;
    bool alpha_pinned = false; // s = 1 branch pins α = 1/2
    double h_ell = 0.0;
    bool h_exact = false;
    double integral = 0.0; // P̂-normalized h(ν_s|ℓ) = P_{φ_s} - 2s ∫ ln x dℓ
    bool integral_infinite = false;
    double pressure = 0.0;
    double ratio = 0.0; // h_ell / integral
    dimension_value formula;
    double euclidean_dimension = 0.0; // s = 1: max{1/2, h/(-2∫ln x dℓ)}
    bool has_euclidean = false;
    digit model_N = 0;
    int model_d = 0;

    void write_kv(std::ostream& os) const {
        os.precision(17);
        os << "s " << s << "\nalpha " << alpha << "\nalpha_pinned " << (alpha_pinned ? 1 : 0)
           << "\nh_ell " << h_ell << "\nh_exact " << (h_exact ? 1 : 0) << "\nintegral "
           << integral << "\nintegral_infinite " << (integral_infinite ? 1 : 0) << "\npressure "
           << pressure << "\nratio " << ratio << "\ndimension " << formula.value << "\nbranch "
           << (formula.alpha_branch ? "alpha" : "beta") << "\neuclidean "
           << (has_euclidean ? euclidean_dimension : -1.0) << "\nmodel_N " << model_N
           << "\nmodel_d " << model_d << "\n";
    }
};

inline cf_dimension_report dim_generic_cf(const cylinder_measure& ell, double s,
                                          cf_dimension_options opt = {}) {
    if (!(s > 0.5)) throw std::domain_error("dim_generic_cf: requires s > 1/2");
    if (!ell.shift_invariant()) throw std::domain_error("dim_generic_cf: ell must be invariant");
    cf_dimension_report rep;
    rep.s = s;
    auto phi = std::make_shared<gauss_potential>(s);

    std::optional<gibbs_model> model;
    if (opt.model_N > 0) {
        model = gibbs_model::build(phi, opt.model_N, opt.model_d, opt.transfer);
        rep.pressure = model->pressure();
        rep.model_N = opt.model_N;
        rep.model_d = opt.model_d;
    } else if (s != 1.0) {
        throw config_error("dim_generic_cf: skipping the model needs s = 1 (P known analytically)");
    }

    // α_s: pinned 1/2 at s = 1 (Gauss measure branch); estimated from the
    // model's 1-cylinder masses otherwise.
    if (s == 1.0) {
        rep.alpha = 0.5;
        rep.alpha_pinned = true;
    } else {
        measure_ptr nu = model->induced_measure();
        auto a = convergence_exponent(*nu, std::min<digit>(opt.alpha_rank, opt.model_N));
        rep.alpha = a.alpha;
    }

    // h_ell: exact when the family knows it, else cylinder entropy at caps.
    if (auto h = ell.exact_entropy()) {
        rep.h_ell = *h;
        rep.h_exact = true;
    } else {
        rep.h_ell = entropy_cylinder(ell, opt.entropy_k, opt.entropy_cap).value;
    }

    // h(ν_s|ℓ) = P_{φ_s} - 2s ∫ ln x dℓ, via the normalized integral form.
    if (model) {
        auto ri = relative_entropy_integral(*model, ell, opt.integral_k, opt.integral_cap,
                                            opt.infinity_threshold);
        rep.integral = ri.value;
        rep.integral_infinite = ri.infinite;
    } else {
        // s = 1, P = 0: raw φ_1 integral
        double acc = 0.0;
        digit cap = opt.integral_cap;
        for_each_cylinder(ell, opt.integral_k, cap,
                          [&](word_view w, double m) { acc -= m * phi->eval(w); });
        rep.integral = acc;
        rep.integral_infinite = false;
        if (const auto* po = dynamic_cast<const periodic_orbit_measure*>(&ell)) {
            // exact single-orbit integral
            rep.integral = -detail::eval_periodic(*phi, po->period());
        }
    }

    double beta = 0.0;
    if (rep.integral_infinite)
        beta = 0.0; // dim = α_s branch
    else if (rep.h_ell == 0.0)
        beta = 0.0;
    else
        beta = rep.h_ell / rep.integral;
    rep.ratio = beta;
    rep.formula = dimension_formula(rep.alpha, std::clamp(beta, 0.0, 1.0));
    // keep the raw ratio visible even when it pokes past 1 numerically
    if (beta > 1.0) rep.formula.value = std::max(rep.alpha, beta);

    if (s == 1.0) {
        rep.has_euclidean = true;
        rep.euclidean_dimension = rep.formula.value;
    }
    return rep;
}

// --- Wegmann consecutive-length ratio check ---

struct wegmann_result {
    std::vector<std::pair<uint64_t, double>> ratios;      // (n, L_n / L_{n+1})
    std::vector<std::pair<uint64_t, double>> log_lengths; // (n, ln λ(Δ(x|_1^n)))
    bool verdict = false;   // entered (1-tol, 1+tol) and stayed
    uint64_t entered_at = 0;
};

/// Scans ln λ(Δ(x|_1^n)) along the stream, using exact log-digits so huge
/// rank-construction digits are handled without overflow.
inline wegmann_result wegmann_check(const digit_stream& x, const std::vector<uint64_t>& depths,
                                    double tol = 0.05) {
    if (depths.empty()) throw std::domain_error("wegmann_check: empty schedule");
    uint64_t max_n = *std::max_element(depths.begin(), depths.end());
    cf_continuants c;
    std::vector<double> L(max_n + 2, 0.0); // L[n] = ln length at depth n
    for (uint64_t i = 0; i < max_n + 1; ++i) {
        double la = x.log_at(i);
        // past exact-int64 range the stream's digit is defined by its log
        double v = la < 42.0 ? static_cast<double>(x.at(i)) : std::exp(la);
        c.push_log(v, la);
        L[i + 1] = c.log_interval_length();
    }
    wegmann_result out;
    for (uint64_t n : depths) {
        out.ratios.push_back({n, L[n] / L[n + 1]});
        out.log_lengths.push_back({n, L[n]});
    }
    for (size_t i = 0; i < out.ratios.size(); ++i) {
        bool ok = true;
        for (size_t j = i; j < out.ratios.size(); ++j)
            if (std::abs(out.ratios[j].second - 1.0) > tol) {
                ok = false;
                break;
            }
        if (ok) {
            out.verdict = true;
            out.entered_at = out.ratios[i].first;
            break;
        }
    }
    return out;
}

} // namespace gdim
