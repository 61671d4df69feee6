// Finite words over the countable alphabet of positive integers.
#pragma once

#include <charconv>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gdim/common.hpp"

namespace gdim {

using word = std::vector<digit>;
using word_view = std::span<const digit>;

inline void check_word(word_view w) {
    for (digit d : w)
        if (d < 1) throw std::domain_error("word digits must be >= 1");
}

/// Comma-separated decimal digits; the empty word prints as "".
inline std::string format_word(word_view w) {
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(w[i]);
    }
    return out;
}

inline word parse_word(const std::string& text) {
    word w;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        digit d = 0;
        auto first = text.data() + pos, last = text.data() + comma;
        auto res = std::from_chars(first, last, d);
        if (res.ec != std::errc{} || res.ptr != last || d < 1)
            throw config_error("parse_word: bad digit in '" + text + "'");
        w.push_back(d);
        pos = comma + 1;
    }
    return w;
}

inline word rotate_word(word_view w, size_t shift) {
    word out(w.size());
    for (size_t i = 0; i < w.size(); ++i) out[i] = w[(i + shift) % w.size()];
    return out;
}

inline word repeat_word(word_view w, size_t times) {
    word out;
    out.reserve(w.size() * times);
    for (size_t t = 0; t < times; ++t) out.insert(out.end(), w.begin(), w.end());
    return out;
}

// Dense index of a k-word over {1..N}: mixed-radix, first digit most significant.
inline size_t word_index(word_view w, digit N) {
    size_t idx = 0;
    for (digit d : w) idx = idx * static_cast<size_t>(N) + static_cast<size_t>(d - 1);
    return idx;
}

inline word word_from_index(size_t idx, int k, digit N) {
    word w(static_cast<size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
        w[static_cast<size_t>(i)] = static_cast<digit>(idx % static_cast<size_t>(N)) + 1;
        idx /= static_cast<size_t>(N);
    }
    return w;
}

inline size_t pow_size(digit N, int k) {
    size_t p = 1;
    for (int i = 0; i < k; ++i) {
        if (p > (static_cast<size_t>(1) << 62) / static_cast<size_t>(N))
            throw numeric_error("pow_size: N^k does not fit in a size_t");
        p *= static_cast<size_t>(N);
    }
    return p;
}

} // namespace gdim
