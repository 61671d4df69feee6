// Shared utilities: error taxonomy, counter-based RNG, deterministic
// parallel_for, and a few numeric helpers used across the library.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gdim {

using std::int64_t;
using std::size_t;
using std::uint64_t;

// Alphabet letters are positive integers; int64 so rank-interval constructions
// can emit digits up to 2^60.
using digit = int64_t;

inline constexpr double kInvBasel = 6.0 / (std::numbers::pi * std::numbers::pi);

// --- error taxonomy (CLI exit codes: config=2, numeric=3, support=4) ---

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct support_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- counter-based RNG ---
//
// All sampling in the library is keyed by (seed, stream, counter) so that any
// digit of any stream can be regenerated independently of evaluation order.

namespace detail {
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace detail

class counter_rng {
public:
    counter_rng(uint64_t seed, uint64_t stream) : state_(mix(seed, stream)) {}

    uint64_t bits(uint64_t counter) const {
        return detail::splitmix64(state_ ^ detail::splitmix64(counter));
    }
    /// Uniform double in (0, 1).
    double uniform(uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }
    counter_rng fork(uint64_t substream) const {
        counter_rng r(0, 0);
        r.state_ = detail::splitmix64(state_ ^ (substream * 0x9e3779b97f4a7c15ULL + 1));
        return r;
    }

private:
    static uint64_t mix(uint64_t seed, uint64_t stream) {
        return detail::splitmix64(detail::splitmix64(seed) ^ (stream + 0x165667b19e3779f9ULL));
    }
    uint64_t state_;
};

// --- deterministic parallel_for ---
//
// Work is cut into a fixed chunk grid independent of the worker count, and
// chunk results are combined in index order, so floating-point reductions are
// byte-stable across GDIM_WORKERS settings.

inline int default_workers() {
    if (const char* env = std::getenv("GDIM_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

inline int& worker_count() {
    static int w = default_workers();
    return w;
}

template <class Body>
void parallel_for(int64_t begin, int64_t end, Body&& body, int64_t grain = 1) {
    const int64_t n = end - begin;
    if (n <= 0) return;
    int workers = std::max(1, worker_count());
    if (workers == 1 || n <= grain) {
        for (int64_t i = begin; i < end; ++i) body(i);
        return;
    }
    constexpr int64_t kChunks = 64;
    const int64_t chunk = std::max<int64_t>(grain, (n + kChunks - 1) / kChunks);
    std::vector<std::thread> pool;
    std::atomic<int64_t> next{begin};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&] {
        try {
            for (;;) {
                int64_t lo = next.fetch_add(chunk);
                if (lo >= end) return;
                int64_t hi = std::min(end, lo + chunk);
                for (int64_t i = lo; i < hi; ++i) body(i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
            next.store(end);
        }
    };
    int nthreads = static_cast<int>(std::min<int64_t>(workers, (n + chunk - 1) / chunk));
    pool.reserve(nthreads - 1);
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// --- numeric helpers ---

inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// Partial Basel sum Σ_{m=1..N} m^{-2}.
inline double basel_partial(int64_t N) {
    double s = 0.0;
    for (int64_t m = N; m >= 1; --m) s += 1.0 / (static_cast<double>(m) * static_cast<double>(m));
    return s;
}

struct line_fit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i).
inline line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw numeric_error("fit_line: need at least two points");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw numeric_error("fit_line: degenerate abscissae");
    line_fit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

} // namespace gdim
