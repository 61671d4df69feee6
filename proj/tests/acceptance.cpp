// Acceptance suite: one check per shipped guarantee, one line per check.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <vector>

#include "gdim/gdim.hpp"

using namespace gdim;

namespace {

struct checker {
    int failures = 0;
    int index = 0;

    void run(const std::string& name, std::function<std::string()> body) {
        ++index;
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = body();
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", ok ? "PASS" : "FAIL", index,
                    name.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

struct check_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& what) {
    if (!cond) throw check_failure(what);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

markov_measure order1(const std::vector<std::vector<double>>& P) {
    return markov_measure::order1(P, markov_measure::stationary_of(P));
}

transfer_options quiet() {
    transfer_options o;
    o.with_record = false;
    return o;
}

} // namespace

int main() {
    checker c;

    c.run("Gauss convergence exponent", [] {
        auto t0 = std::chrono::steady_clock::now();
        gauss_measure g;
        auto a = convergence_exponent(g, 100000);
        expect(std::abs(a.alpha - 0.5) <= 0.01,
               "alpha = " + fmt(a.alpha) + " missed 0.500 +/- 0.01");
        double secs = elapsed_since(t0);
        expect(secs < 5.0, "runtime " + fmt(secs) + "s exceeded 5s");
        return "alpha = " + fmt(a.alpha);
    });

    c.run("Gauss pressure magnitude and truncation trend", [] {
        auto t0 = std::chrono::steady_clock::now();
        auto phi = std::make_shared<gauss_potential>(1.0);
        std::vector<digit> caps{250, 500, 1000, 2000};
        std::vector<double> p;
        for (digit N : caps) p.push_back(gurevich_pressure(phi, N, 2, quiet()).value);
        expect(std::abs(p[2]) <= 1e-2, "|P(1000,2)| = " + fmt(std::abs(p[2])) + " above 1e-2");
        for (size_t i = 1; i < p.size(); ++i)
            expect(std::abs(p[i]) < std::abs(p[i - 1]),
                   "|P| not shrinking at N = " + std::to_string(caps[i]));
        double secs = elapsed_since(t0);
        expect(secs < 60.0, "runtime " + fmt(secs) + "s exceeded 60s");
        return "|P| = " + fmt(std::abs(p[0])) + " > " + fmt(std::abs(p[1])) + " > " +
               fmt(std::abs(p[2])) + " > " + fmt(std::abs(p[3]));
    });

    c.run("Rokhlin consistency for the Gauss measure", [] {
        const double target = std::numbers::pi * std::numbers::pi / (6 * std::numbers::ln2);
        gauss_measure g;
        cf_dimension_options opt; // N=1000, d=2, k=2, caps 1e4
        auto rep = dim_generic_cf(g, 1.0, opt);
        expect(std::abs(rep.h_ell - target) / target <= 0.02,
               "h = " + fmt(rep.h_ell) + " not within 2% of " + fmt(target));
        expect(std::abs(rep.integral - target) / target <= 0.02,
               "integral = " + fmt(rep.integral) + " not within 2% of " + fmt(target));
        expect(std::abs(rep.h_ell - rep.integral) / rep.integral <= 0.02,
               "h and integral disagree by more than 2%");
        expect(std::abs(rep.formula.value - 1.0) <= 0.02,
               "dimension = " + fmt(rep.formula.value) + " missed 1.00 +/- 0.02");
        return "h = " + fmt(rep.h_ell) + ", integral = " + fmt(rep.integral) +
               ", dim = " + fmt(rep.formula.value);
    });

    c.run("degenerate branch at the golden point", [] {
        auto t0 = std::chrono::steady_clock::now();
        periodic_orbit_measure golden(word{1});
        cf_dimension_options opt;
        opt.model_N = 0;
        auto rep = dim_generic_cf(golden, 1.0, opt);
        expect(rep.h_ell == 0.0, "h_ell not exactly 0");
        expect(rep.formula.value == 0.5, "dimension not exactly 1/2");
        double secs = elapsed_since(t0);
        expect(secs < 1.0, "runtime " + fmt(secs) + "s exceeded 1s");
        return "dim = 0.5 exactly, h = 0 exactly";
    });

    c.run("relative-entropy identity", [] {
        counter_rng rng(505, 0);
        uint64_t ctr = 0;
        // Bernoulli/Bernoulli pairs: exact additivity at every depth
        for (int trial = 0; trial < 10; ++trial) {
            double p = 0.1 + 0.8 * rng.uniform(ctr++);
            double q = 0.1 + 0.8 * rng.uniform(ctr++);
            bernoulli_measure mu({p, 1 - p}), nu({q, 1 - q});
            double closed = -(p * std::log(q) + (1 - p) * std::log(1 - q));
            for (int k = 1; k <= 5; ++k) {
                double sum = relative_entropy_sum(nu, mu, k, 2).value;
                expect(std::abs(sum - closed) <= 1e-12,
                       "additivity broke at k = " + std::to_string(k));
            }
        }
        // Markov/Gauss-model pairs: sum vs integral within the variation bound
        auto phi = std::make_shared<gauss_potential>(1.0);
        std::vector<gibbs_model> models;
        models.push_back(gibbs_model::build(phi, 64, 2, quiet()));
        models.push_back(gibbs_model::build(phi, 128, 2, quiet()));
        const int k = 6;
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            double a = 0.1 + 0.8 * rng.uniform(ctr++);
            double b = 0.1 + 0.8 * rng.uniform(ctr++);
            auto mu = order1({{a, 1 - a}, {b, 1 - b}});
            const auto& model = models[static_cast<size_t>(trial % 2)];
            auto nu = model.induced_measure();
            double sum = relative_entropy_sum(*nu, mu, k, 2).value;
            auto integral = relative_entropy_integral(model, mu, k, 2);
            double bound = (std::log(model.constant_estimate()) +
                            variation_partial_sum(*phi, 1, k)) /
                           static_cast<double>(k);
            double gap = std::abs(sum - integral.value);
            worst = std::max(worst, gap / bound);
            expect(gap <= bound, "sum/integral gap " + fmt(gap) + " above bound " + fmt(bound));
        }
        return "exact at 1e-12 on products; worst Markov/Gauss gap at " + fmt(worst) +
               " of the bound";
    });

    c.run("Markov approximation", [] {
        hmm_measure mu({{0.2, 0.6, 0.2}, {0.5, 0.1, 0.4}, {0.25, 0.25, 0.5}},
                       {1.0 / 3, 1.0 / 3, 1.0 / 3}, {1, 1, 2});
        // exact agreement on cylinders of length <= j, depth <= 6
        for (int j = 1; j <= 6; ++j) {
            auto mj = markov_approximation(mu, j, 2);
            word w;
            std::function<void(int)> rec = [&](int depth) {
                if (depth > 0)
                    expect(std::abs(mj.mass(w) - mu.mass(w)) <= 1e-12,
                           "disagreement at depth " + std::to_string(depth) +
                               ", j = " + std::to_string(j));
                if (depth == j) return;
                for (digit a = 1; a <= 2; ++a) {
                    w.push_back(a);
                    rec(depth + 1);
                    w.pop_back();
                }
            };
            rec(0);
            // d*(mu_j, mu) <= 2^{-j} + tail
            auto r = d_star(mj, mu, 8, 2);
            expect(r.value <= std::pow(0.5, j) + 1e-12,
                   "d* = " + fmt(r.value) + " above 2^-" + std::to_string(j));
        }
        // entropy gap nonincreasing on a depth-5 table measure
        auto base = order1({{0.85, 0.15}, {0.3, 0.7}});
        auto table = table_measure::truncate(base, 5, 2);
        double h_mu = entropy_cylinder(table, 5, 2).value;
        std::vector<double> gap;
        for (int j = 1; j <= 5; ++j)
            gap.push_back(std::abs(entropy_markov(markov_approximation(table, j, 2)) - h_mu));
        for (size_t i = 1; i < gap.size(); ++i)
            expect(gap[i] <= gap[i - 1] + 1e-12, "entropy gap increased at j = " +
                                                     std::to_string(i + 1));
        return "exact to depth 6, d* bounds hold, entropy gaps " + fmt(gap.front()) + " -> " +
               fmt(gap.back());
    });

    c.run("seed construction under linear digit caps", [] {
        auto t0 = std::chrono::steady_clock::now();
        auto mu = order1({{0.6, 0.3, 0.1}, {0.2, 0.5, 0.3}, {0.3, 0.3, 0.4}});
        seed_options opt;
        opt.levels = 3;
        opt.seed = 42;
        auto z = build_seed(mu, [](uint64_t p) { return static_cast<digit>(p); }, opt);
        for (uint64_t p = 0; p < 1000000; ++p)
            if (z.stream.at(p) > static_cast<digit>(p + 1))
                throw check_failure("cap violated at position " + std::to_string(p + 1));
        auto v = verify_generic(z.stream, mu, {1000, 10000, 100000}, 2, 3);
        expect(v.strictly_decreasing, "d* trajectory not strictly decreasing");
        double last = v.trajectory.back().second.value;
        expect(last < 0.05, "final d* = " + fmt(last) + " not below 0.05");
        double secs = elapsed_since(t0);
        expect(secs < 120.0, "runtime " + fmt(secs) + "s exceeded 120s");
        return "caps hold to 1e6; d* = " + fmt(v.trajectory[0].second.value) + " > " +
               fmt(v.trajectory[1].second.value) + " > " + fmt(last);
    });

    c.run("Cantor lower-bound witnesses", [] {
        // Y* over a Markov mu and Bernoulli-potential nu
        auto mu = order1({{0.75, 0.25}, {0.35, 0.65}});
        auto phi = std::make_shared<depth1_potential>(
            depth1_potential::log_weights({0.4, 0.6}));
        auto model = gibbs_model::build(phi, 2, 2, quiet());
        auto fam = sample_Ystar(mu, model, 3, 50, 2025);
        double h_mu = entropy_markov(mu);
        double h_rel = -model.sampled_potential_integral(mu);
        double bound = h_mu / h_rel - 0.05;
        std::vector<uint64_t> depths;
        for (uint64_t n = 1000; n <= 10000; n += 1000) depths.push_back(n);
        auto nu = model.induced_measure();
        int good = 0;
        for (const auto& s : fam.streams) {
            auto r = local_dimension(s, *nu, *fam.companion, depths);
            if (r.liminf_proxy >= bound) ++good;
        }
        expect(good >= 45, "only " + std::to_string(good) + "/50 Y* samples cleared " +
                               fmt(bound));
        // F_z over the inverse-square metric measure
        auto mu2 = order1({{0.7, 0.3}, {0.4, 0.6}});
        seed_options sopt;
        sopt.levels = 2;
        sopt.seed = 7;
        auto z = build_seed(mu2, nullptr, sopt);
        inverse_square_bernoulli nu2;
        const double eps = 0.9, delta = 0.9;
        auto ffam = sample_F(z, nu2, eps, delta, 20, 10000, 77);
        auto alpha = convergence_exponent(nu2, 100000);
        double fb = alpha.alpha * (1 - eps) * delta / (1 + eps) - 0.05;
        double worst = 1e9;
        for (const auto& s : ffam.streams) {
            auto r = local_dimension(s, nu2, *ffam.companion, depths);
            worst = std::min(worst, r.liminf_proxy);
            expect(r.liminf_proxy >= fb,
                   "F_z proxy " + fmt(r.liminf_proxy) + " below " + fmt(fb));
        }
        return std::to_string(good) + "/50 Y* above " + fmt(bound) + "; min F_z proxy " +
               fmt(worst) + " above " + fmt(fb);
    });

    c.run("covering-sum diagnostic", [] {
        covering_options opt;
        opt.j = 1;
        opt.N = 2;
        opt.n_min = 8;
        opt.n_max = 16;
        bernoulli_measure skew({0.9, 0.1}), fair({0.5, 0.5});
        opt.eps = 0.04;
        auto be = covering_sum_diagnostic(skew, fair, opt);
        double target = -(0.9 * std::log(0.9) + 0.1 * std::log(0.1)) / std::numbers::ln2;
        expect(be.crossed, "no transition found for the Besicovitch-Eggleston pair");
        expect(std::abs(be.gamma_star - target) <= 0.1,
               "gamma* = " + fmt(be.gamma_star) + " missed " + fmt(target) + " +/- 0.1");
        opt.eps = 0.05;
        auto id = covering_sum_diagnostic(fair, fair, opt);
        expect(id.crossed && std::abs(id.gamma_star - 1.0) <= 0.1,
               "gamma* = " + fmt(id.gamma_star) + " missed 1 +/- 0.1");
        return "gamma* = " + fmt(be.gamma_star) + " vs " + fmt(target) +
               "; identity pair at " + fmt(id.gamma_star);
    });

    c.run("entropy-dimension agreement", [] {
        counter_rng rng(606, 0);
        uint64_t ctr = 0;
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            double a = 0.15 + 0.7 * rng.uniform(ctr++);
            double b = 0.15 + 0.7 * rng.uniform(ctr++);
            double q = 0.2 + 0.6 * rng.uniform(ctr++);
            auto mu = order1({{a, 1 - a}, {b, 1 - b}});
            bernoulli_measure nu({q, 1 - q});
            auto grid = entropy_dimension_grid(nu, mu, {6, 12}, {2, 20});
            double h_rel = -(mu.mass(word{1}) * std::log(q) +
                             mu.mass(word{2}) * std::log(1 - q));
            double closed = entropy_dimension_closed(entropy_markov(mu), h_rel);
            double rel = std::abs(grid.beta - closed) / closed;
            worst = std::max(worst, rel);
            expect(rel <= 0.05, "grid " + fmt(grid.beta) + " vs closed " + fmt(closed) +
                                    " off by " + fmt(100 * rel) + "%");
        }
        // the two stated corners
        bernoulli_measure nu({0.5, 0.5});
        auto same = entropy_dimension_grid(nu, nu, {4, 8}, {2});
        expect(std::abs(same.beta - 1.0) <= 1e-12, "mu = nu corner not 1");
        periodic_orbit_measure point(word{1});
        auto zero = entropy_dimension_grid(nu, point, {4, 8}, {2});
        expect(zero.zero_entropy_mu && zero.beta == 0.0, "periodic corner not 0");
        double alpha_hat = 0.37; // any alpha: the formula must return it exactly
        expect(dimension_formula(alpha_hat, zero.beta).value == alpha_hat,
               "periodic mu does not fall back to alpha");
        expect(dimension_formula(0.5, same.beta).value == 1.0, "mu = nu does not give 1");
        return "worst grid/closed gap " + fmt(100 * worst) + "%";
    });

    c.run("d* metric-space property suite", [] {
        counter_rng rng(707, 0);
        uint64_t ctr = 0;
        auto random_measure = [&]() -> measure_ptr {
            std::vector<std::pair<double, measure_ptr>> parts;
            double rest = 1.0;
            int k = 2 + static_cast<int>(rng.bits(ctr++) % 3);
            for (int i = 0; i < k; ++i) {
                double coef = (i + 1 == k) ? rest : rest * rng.uniform(ctr++);
                rest -= (i + 1 == k) ? 0.0 : coef;
                word w;
                int len = 1 + static_cast<int>(rng.bits(ctr++) % 3);
                for (int j = 0; j < len; ++j)
                    w.push_back(1 + static_cast<digit>(rng.bits(ctr++) % 4));
                parts.push_back({coef, std::make_shared<periodic_orbit_measure>(w)});
            }
            return std::make_shared<mixture_measure>(std::move(parts));
        };
        for (int trial = 0; trial < 30; ++trial) {
            auto A = random_measure(), B = random_measure(), C = random_measure();
            double ab = d_star(*A, *B, 6, 4).value;
            expect(ab == d_star(*B, *A, 6, 4).value, "symmetry broke");
            expect(ab <= d_star(*A, *C, 6, 4).value + d_star(*C, *B, 6, 4).value + 1e-12,
                   "triangle inequality broke");
            double alpha = rng.uniform(ctr++);
            auto M1 = random_measure(), M2 = random_measure();
            auto L1 = random_measure(), L2 = random_measure();
            mixture_measure mixA({{alpha, M1}, {1 - alpha, M2}});
            mixture_measure mixB({{alpha, L1}, {1 - alpha, L2}});
            double lhs = d_star(mixA, mixB, 6, 4).value;
            double rhs = alpha * d_star(*M1, *L1, 6, 4).value +
                         (1 - alpha) * d_star(*M2, *L2, 6, 4).value;
            expect(lhs <= rhs + 1e-12, "sub-linearity broke");
        }
        // Bowen closeness at n = 1000, split n0 = 20: literal form (identical
        // prefixes are identical accumulators) and the nontrivial form where
        // the orbits part ways over the final n0 positions
        const int64_t n = 1000;
        const double n0 = 20;
        double bound = (n - n0) / n * std::pow(2.0, -(n0 + 1)) + n0 / n;
        auto mu = order1({{0.6, 0.4}, {0.2, 0.8}});
        auto prefix = markov_stream(std::make_shared<markov_measure>(mu), 99)
                          .prefix(static_cast<uint64_t>(n));
        auto ax = accumulate_orbit(word_stream(prefix, 1), n, 4, 2);
        auto ay = accumulate_orbit(word_stream(prefix, 2), n, 4, 2);
        double same = d_star_orbits(ax, ay).value;
        expect(same <= bound, "Bowen bound broke on equal prefixes");
        word wx = prefix, wy = prefix;
        for (size_t i = wx.size() - static_cast<size_t>(n0); i < wx.size(); ++i) {
            wx[i] = 1;
            wy[i] = 2;
        }
        auto bx = accumulate_orbit(word_stream(wx), n, 4, 2);
        auto by = accumulate_orbit(word_stream(wy), n, 4, 2);
        double got = d_star_orbits(bx, by).value;
        expect(got <= bound, "Bowen bound broke on a divergent tail: " + fmt(got) + " > " +
                                 fmt(bound));
        return "symmetry exact, triangle/sub-linearity within 1e-12, Bowen " + fmt(got) +
               " <= " + fmt(bound);
    });

    if (c.failures == 0)
        std::printf("all %d acceptance criteria passed\n", c.index);
    else
        std::printf("%d of %d acceptance criteria FAILED\n", c.failures, c.index);
    return c.failures;
}
