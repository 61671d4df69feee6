// Lazy pull-based digit streams with deterministic replay from a seed.
//
// A stream memoizes the prefix it has generated; any index can be asked for
// and the stream grows on demand. Sampling impls draw from a counter_rng keyed
// by the digit position, so identical seeds give identical streams.
#pragma once

#include <fstream>
#include <functional>
#include <memory>

#include "gdim/measure.hpp"

namespace gdim {

namespace detail {

struct stream_impl {
    virtual ~stream_impl() = default;
    // generate the digit at index (0-based); called with idx == cache.size()
    virtual digit generate(uint64_t idx) = 0;
    virtual double log_digit(uint64_t idx, digit d) const {
        (void)idx;
        return std::log(static_cast<double>(d));
    }
    virtual std::string provenance() const { return "stream"; }
    std::vector<digit> cache;
};

} // namespace detail

class digit_stream {
public:
    digit_stream() = default;
    explicit digit_stream(std::shared_ptr<detail::stream_impl> impl) : impl_(std::move(impl)) {}

    /// 0-based digit access (position n of a sequence x = x_1 x_2 ... is at(n-1)).
    digit at(uint64_t idx) const {
        auto& impl = *impl_;
        while (impl.cache.size() <= idx) {
            digit d = impl.generate(impl.cache.size());
            if (d < 1) throw numeric_error("digit_stream: generator emitted digit < 1");
            impl.cache.push_back(d);
        }
        return impl.cache[idx];
    }

    /// ln of the digit at idx; exact even when the digit magnitude exceeds
    /// what at() can represent honestly (rank constructions with huge digits).
    double log_at(uint64_t idx) const {
        digit d = at(idx);
        return impl_->log_digit(idx, d);
    }

    word prefix(uint64_t n) const {
        word w(n);
        for (uint64_t i = 0; i < n; ++i) w[i] = at(i);
        return w;
    }

    std::string provenance() const { return impl_ ? impl_->provenance() : "null"; }
    bool valid() const { return impl_ != nullptr; }

private:
    std::shared_ptr<detail::stream_impl> impl_;
};

// --- concrete streams ---

inline digit_stream periodic_stream(word w) {
    struct impl : detail::stream_impl {
        word w;
        digit generate(uint64_t idx) override { return w[idx % w.size()]; }
        std::string provenance() const override { return "periodic:" + format_word(w); }
    };
    check_word(w);
    if (w.empty()) throw std::domain_error("periodic_stream: empty word");
    auto p = std::make_shared<impl>();
    p->w = std::move(w);
    return digit_stream(p);
}

inline digit_stream word_stream(word w, digit pad = 0) {
    struct impl : detail::stream_impl {
        word w;
        digit pad;
        digit generate(uint64_t idx) override {
            if (idx < w.size()) return w[idx];
            if (pad >= 1) return pad;
            throw numeric_error("word_stream: exhausted before horizon");
        }
        std::string provenance() const override { return "word"; }
    };
    auto p = std::make_shared<impl>();
    p->w = std::move(w);
    p->pad = pad;
    return digit_stream(p);
}

/// i.i.d. letters from a finite weight vector (digits 1..K).
inline digit_stream bernoulli_stream(std::vector<double> p, uint64_t seed,
                                     uint64_t stream_id = 0) {
    struct impl : detail::stream_impl {
        std::vector<double> p;
        counter_rng rng{0, 0};
        digit generate(uint64_t idx) override {
            double u = rng.uniform(idx), acc = 0.0;
            for (size_t a = 0; a + 1 < p.size(); ++a) {
                acc += p[a];
                if (u < acc) return static_cast<digit>(a + 1);
            }
            return static_cast<digit>(p.size());
        }
        std::string provenance() const override { return "bernoulli-sample"; }
    };
    auto im = std::make_shared<impl>();
    im->p = std::move(p);
    im->rng = counter_rng(seed, 0x42 ^ stream_id);
    return digit_stream(im);
}

/// i.i.d. letters with P(a) = (6/π²) a^{-2}; inversion by cumulative walk.
inline digit_stream inverse_square_stream(uint64_t seed, uint64_t stream_id = 0) {
    struct impl : detail::stream_impl {
        counter_rng rng{0, 0};
        digit generate(uint64_t idx) override {
            double u = rng.uniform(idx), acc = 0.0;
            for (digit a = 1; a < (digit(1) << 40); ++a) {
                acc += inverse_square_bernoulli::prob(a);
                if (u < acc) return a;
            }
            return digit(1) << 40; // P ~ 5e-13; beyond the walk guard
        }
        std::string provenance() const override { return "inverse-square-sample"; }
    };
    auto im = std::make_shared<impl>();
    im->rng = counter_rng(seed, 0x5a ^ stream_id);
    return digit_stream(im);
}

/// Stationary path of a Markov measure.
inline digit_stream markov_stream(std::shared_ptr<const markov_measure> mu, uint64_t seed,
                                  uint64_t stream_id = 0) {
    struct impl : detail::stream_impl {
        std::shared_ptr<const markov_measure> mu;
        counter_rng rng{0, 0};
        size_t state = 0;
        digit generate(uint64_t idx) override {
            const int l = mu->order();
            if (idx == 0) {
                state = mu->sample_initial_state(rng.uniform(~uint64_t(0)));
                // emit the initial state word digit by digit
            }
            if (idx < static_cast<uint64_t>(l)) {
                word w = word_from_index(state, l, mu->alphabet_cap());
                return w[idx];
            }
            size_t cur = state_from_cache(idx);
            digit a = mu->sample_next(cur, rng.uniform(idx));
            return a;
        }
        size_t state_from_cache(uint64_t idx) {
            const int l = mu->order();
            size_t s = 0;
            for (uint64_t j = idx - static_cast<uint64_t>(l); j < idx; ++j)
                s = s * static_cast<size_t>(mu->alphabet_cap()) +
                    static_cast<size_t>(cache[j] - 1);
            return s;
        }
        std::string provenance() const override { return "markov-sample:" + mu->describe(); }
    };
    auto im = std::make_shared<impl>();
    im->mu = std::move(mu);
    im->rng = counter_rng(seed, 0x77 ^ stream_id);
    return digit_stream(im);
}

/// Generic generator-backed stream (used by the constructions).
inline digit_stream generator_stream(std::function<digit(uint64_t)> gen, std::string provenance,
                                     std::function<double(uint64_t, digit)> log_digit = nullptr) {
    struct impl : detail::stream_impl {
        std::function<digit(uint64_t)> gen;
        std::function<double(uint64_t, digit)> logd;
        std::string prov;
        digit generate(uint64_t idx) override { return gen(idx); }
        double log_digit(uint64_t idx, digit d) const override {
            return logd ? logd(idx, d) : std::log(static_cast<double>(d));
        }
        std::string provenance() const override { return prov; }
    };
    auto im = std::make_shared<impl>();
    im->gen = std::move(gen);
    im->logd = std::move(log_digit);
    im->prov = std::move(provenance);
    return digit_stream(im);
}

// --- stream file io: one digit per line, '#' provenance header ---

inline void store_stream(std::ostream& os, const digit_stream& s, uint64_t n,
                         const std::string& extra_header = "") {
    os << "# gdim digit stream\n# provenance: " << s.provenance() << "\n";
    if (!extra_header.empty()) os << "# " << extra_header << "\n";
    os << "# count: " << n << "\n";
    for (uint64_t i = 0; i < n; ++i) os << s.at(i) << "\n";
}

inline digit_stream load_stream(std::istream& is) {
    auto digits = std::make_shared<std::vector<digit>>();
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        digits->push_back(static_cast<digit>(std::stoll(line)));
    }
    return generator_stream(
        [digits](uint64_t idx) {
            if (idx >= digits->size())
                throw numeric_error("stream file exhausted before horizon");
            return (*digits)[idx];
        },
        "file");
}

} // namespace gdim
