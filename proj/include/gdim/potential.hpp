// Potentials evaluated on cylinder representatives. The representative of [w]
// is w followed by its last digit repeated forever (canonical tail), so the
// evaluation error against any point of [w] is bounded by var_{|w|}.
#pragma once

#include "gdim/word.hpp"

namespace gdim {

class potential {
public:
    virtual ~potential() = default;

    /// φ at the canonical-tail representative of [w]; w nonempty.
    virtual double eval(word_view w) const = 0;

    /// Declared upper bound on var_n φ.
    virtual double variation(int n) const = 0;

    /// Closed-form Σ_{j >= from} var_j φ (summability certificate).
    virtual double variation_tail(int from) const = 0;

    /// Optional factorization exp(φ(w)) = head_weight(w_1, tail_value(w_2..)):
    /// lets the transfer operator act in O(N^d · degree) instead of N^{d+1}.
    virtual bool has_tail_factorization() const { return false; }
    virtual double tail_value(word_view suffix) const {
        (void)suffix;
        throw std::logic_error("potential: no tail factorization");
    }
    virtual double head_weight(digit head, double z) const {
        (void)head;
        (void)z;
        throw std::logic_error("potential: no tail factorization");
    }
    /// Range of tail_value over all suffixes, for interpolation nodes.
    virtual std::pair<double, double> tail_range() const { return {0.0, 1.0}; }

    /// Largest letter the potential is defined on, 0 if unbounded.
    virtual digit finite_alphabet() const { return 0; }

    virtual std::string describe() const = 0;
};

using potential_ptr = std::shared_ptr<const potential>;

/// Σ_{j=a}^{b} var_j from the declared bounds (helper for finite stretches).
inline double variation_partial_sum(const potential& phi, int a, int b) {
    double s = 0.0;
    for (int j = a; j <= b; ++j) s += phi.variation(j);
    return s;
}

// --- locally constant families ---

/// φ(x) = table[x_1]; the Bernoulli-type potential ln p_{x_1}.
class depth1_potential final : public potential {
public:
    explicit depth1_potential(std::vector<double> values, std::string name = "depth1")
        : v_(std::move(values)), name_(std::move(name)) {
        if (v_.empty()) throw std::domain_error("depth1_potential: empty table");
    }
    static depth1_potential log_weights(const std::vector<double>& p, std::string name = "") {
        std::vector<double> v(p.size());
        for (size_t i = 0; i < p.size(); ++i) {
            if (p[i] <= 0) throw std::domain_error("depth1_potential: weights must be positive");
            v[i] = std::log(p[i]);
        }
        return depth1_potential(std::move(v), name.empty() ? "bernoulli-log" : std::move(name));
    }
    double eval(word_view w) const override {
        if (w.empty()) throw std::domain_error("potential eval on empty word");
        digit d = w[0];
        if (d < 1 || d > static_cast<digit>(v_.size()))
            throw numeric_error("depth1_potential: digit above table range");
        return v_[static_cast<size_t>(d - 1)];
    }
    double variation(int) const override { return 0.0; }
    double variation_tail(int) const override { return 0.0; }
    digit finite_alphabet() const override { return static_cast<digit>(v_.size()); }
    std::string describe() const override { return name_; }

private:
    std::vector<double> v_;
    std::string name_;
};

/// φ(x) = f(x_1 .. x_r) for a caller-supplied f on r-words.
class locally_constant_potential final : public potential {
public:
    locally_constant_potential(int depth, std::function<double(word_view)> f,
                               std::vector<double> var_below, std::string name)
        : depth_(depth), f_(std::move(f)), var_(std::move(var_below)), name_(std::move(name)) {
        if (depth_ < 1) throw std::domain_error("locally_constant_potential: depth >= 1");
        if (static_cast<int>(var_.size()) < depth_ - 1)
            throw std::domain_error("locally_constant_potential: need var bounds below depth");
    }
    double eval(word_view w) const override {
        if (w.empty()) throw std::domain_error("potential eval on empty word");
        if (static_cast<int>(w.size()) >= depth_)
            return f_(w.first(static_cast<size_t>(depth_)));
        // canonical tail: pad with the last digit
        word padded(w.begin(), w.end());
        padded.resize(static_cast<size_t>(depth_), w.back());
        return f_(padded);
    }
    double variation(int n) const override {
        return n >= depth_ ? 0.0 : var_.at(static_cast<size_t>(n - 1));
    }
    double variation_tail(int from) const override {
        double s = 0.0;
        for (int j = from; j < depth_; ++j) s += variation(j);
        return s;
    }
    std::string describe() const override { return name_; }

private:
    int depth_;
    std::function<double(word_view)> f_;
    std::vector<double> var_;
    std::string name_;
};

/// S_{|w|} φ at the representative of [w]: Σ_i φ(w|_{i+1}^{|w|}), using the
/// canonical tail of each suffix. The reported bound covers the substitution
/// of suffix representatives for true orbit points.
struct birkhoff_result {
    double value = 0.0;
    double error_bound = 0.0;
};

inline birkhoff_result birkhoff_sum(const potential& phi, word_view w) {
    birkhoff_result out;
    for (size_t i = 0; i < w.size(); ++i) {
        out.value += phi.eval(w.subspan(i));
        out.error_bound += phi.variation(static_cast<int>(w.size() - i));
    }
    return out;
}

} // namespace gdim
