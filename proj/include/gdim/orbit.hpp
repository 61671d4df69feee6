// Empirical orbit measures: window counts τ_u for u ∈ Σ_N^k, k ≤ k_max,
// with explicit overflow accounting for windows that leave the capped grid.
#pragma once

#include <unordered_map>

#include "gdim/stream.hpp"

namespace gdim {

class orbit_accumulator {
public:
    orbit_accumulator(int k_max, digit N) : k_max_(k_max), N_(N), n_(0) {
        if (k_max_ < 1) throw std::domain_error("orbit_accumulator: k_max must be >= 1");
        if (N_ < 1) throw std::domain_error("orbit_accumulator: alphabet cap must be >= 1");
        int bits = 0;
        digit v = N_;
        while (v > 0) {
            ++bits;
            v >>= 1;
        }
        if (bits * k_max_ > 62)
            throw std::domain_error("orbit_accumulator: N^k_max exceeds the 62-bit key budget");
        key_bits_ = bits;
        counts_.resize(static_cast<size_t>(k_max_));
        overflow_.assign(static_cast<size_t>(k_max_), 0);
    }

    int k_max() const { return k_max_; }
    digit alphabet_cap() const { return N_; }
    int64_t horizon() const { return n_; }

    /// Slide the accumulator over `count` more digits of x (indices resume
    /// where the previous call stopped).
    void extend(const digit_stream& x, int64_t count) {
        int64_t target = n_ + count;
        for (int64_t pos = n_; pos < target; ++pos) x.at(static_cast<uint64_t>(pos));
        for (int k = 1; k <= k_max_; ++k) {
            auto& map = counts_[static_cast<size_t>(k - 1)];
            // windows j (0-based start) fully inside the new horizon
            int64_t first = std::max<int64_t>(0, n_ - k + 1);
            int64_t last = target - k; // inclusive
            for (int64_t j = first; j <= last; ++j) {
                uint64_t key = 0;
                bool over = false;
                for (int i = 0; i < k; ++i) {
                    digit d = x.at(static_cast<uint64_t>(j + i));
                    if (d > N_) {
                        over = true;
                        break;
                    }
                    key = (key << key_bits_) | static_cast<uint64_t>(d);
                }
                if (over)
                    ++overflow_[static_cast<size_t>(k - 1)];
                else
                    ++map[key];
            }
        }
        n_ = target;
    }

    int64_t window_count(int k) const { return n_ - k + 1; }
    int64_t overflow(int k) const { return overflow_.at(static_cast<size_t>(k - 1)); }

    int64_t count(word_view u) const {
        int k = static_cast<int>(u.size());
        if (k < 1 || k > k_max_) throw std::domain_error("orbit_accumulator: bad word depth");
        for (digit d : u)
            if (d > N_) return 0;
        uint64_t key = 0;
        for (digit d : u) key = (key << key_bits_) | static_cast<uint64_t>(d);
        const auto& map = counts_[static_cast<size_t>(k - 1)];
        auto it = map.find(key);
        return it == map.end() ? 0 : it->second;
    }

    /// Empirical frequency p(u) = τ_u / (n - k + 1).
    double frequency(word_view u) const {
        int k = static_cast<int>(u.size());
        return static_cast<double>(count(u)) / static_cast<double>(window_count(k));
    }

    /// Merge counts of an accumulator built over a disjoint stream.
    orbit_accumulator& operator+=(const orbit_accumulator& other) {
        if (other.k_max_ != k_max_ || other.N_ != N_)
            throw std::domain_error("orbit_accumulator: cap mismatch in merge");
        for (int k = 1; k <= k_max_; ++k) {
            for (const auto& [key, c] : other.counts_[static_cast<size_t>(k - 1)])
                counts_[static_cast<size_t>(k - 1)][key] += c;
            overflow_[static_cast<size_t>(k - 1)] += other.overflow_[static_cast<size_t>(k - 1)];
        }
        n_ += other.n_;
        return *this;
    }

    template <class F>
    void for_each(int k, F&& f) const {
        word u(static_cast<size_t>(k));
        for (const auto& [key, c] : counts_.at(static_cast<size_t>(k - 1))) {
            uint64_t v = key;
            for (int i = k - 1; i >= 0; --i) {
                u[static_cast<size_t>(i)] =
                    static_cast<digit>(v & ((uint64_t(1) << key_bits_) - 1));
                v >>= key_bits_;
            }
            f(word_view(u), c);
        }
    }

    void store(std::ostream& os) const {
        os << "n " << n_ << "\nk_max " << k_max_ << "\nN " << N_ << "\noverflow";
        for (int k = 1; k <= k_max_; ++k) os << " " << overflow(k);
        os << "\nword count\n";
        for (int k = 1; k <= k_max_; ++k)
            for_each(k, [&](word_view u, int64_t c) { os << format_word(u) << " " << c << "\n"; });
    }

private:
    int k_max_;
    digit N_;
    int64_t n_;
    int key_bits_;
    std::vector<std::unordered_map<uint64_t, int64_t>> counts_;
    std::vector<int64_t> overflow_;
};

/// Window counts of x|_1^n on the capped grid; the stream must reach n digits.
inline orbit_accumulator accumulate_orbit(const digit_stream& x, int64_t n, int k_max, digit N) {
    if (n < k_max) throw std::domain_error("accumulate_orbit: horizon shorter than k_max");
    orbit_accumulator acc(k_max, N);
    acc.extend(x, n);
    return acc;
}

} // namespace gdim
