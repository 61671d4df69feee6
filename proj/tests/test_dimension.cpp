#include <catch2/catch_amalgamated.hpp>

#include "gdim/gdim.hpp"

using namespace gdim;
using Catch::Approx;

namespace {

// test-only: geometric 1-cylinder masses nu([n]) = 2^{-n}, i.i.d. product
struct geometric_measure final : cylinder_measure {
    double mass(word_view w) const override { return std::exp(log_mass(w)); }
    double log_mass(word_view w) const override {
        double s = 0.0;
        for (digit d : w) s -= static_cast<double>(d) * std::numbers::ln2;
        return s;
    }
    digit alphabet_cap() const override { return 0; }
    bool shift_invariant() const override { return true; }
    bool digit_masses_sorted() const override { return true; }
    std::string describe() const override { return "geometric"; }
};

markov_measure two_state(double a, double b, double c, double d) {
    std::vector<std::vector<double>> P{{a, b}, {c, d}};
    return markov_measure::order1(P, markov_measure::stationary_of(P));
}

transfer_options quiet() {
    transfer_options o;
    o.with_record = false;
    return o;
}

} // namespace

TEST_CASE("convergence exponent of inverse-square masses is 1/2") {
    inverse_square_bernoulli nu;
    auto a = convergence_exponent(nu, 100000);
    REQUIRE(a.alpha == Approx(0.5).margin(0.01));
    // the inf-test diagnostic: Σ n^{-2t} diverges below 1/2, converges above
    REQUIRE(a.partial_sum_above < 60.0);
    REQUIRE(a.partial_sum_below > a.partial_sum_above);
}

TEST_CASE("convergence exponent of geometric masses collapses to 0") {
    geometric_measure nu;
    auto a = convergence_exponent(nu, 100000);
    REQUIRE(a.alpha <= 0.05);
}

TEST_CASE("convergence exponent is stable under finite digit relabeling") {
    // permute the first few digit masses of the inverse-square measure
    struct permuted final : cylinder_measure {
        double mass(word_view w) const override { return std::exp(log_mass(w)); }
        double log_mass(word_view w) const override {
            double s = 0.0;
            for (digit d : w) {
                digit e = d;
                if (d == 1) e = 7;
                else if (d == 7) e = 1;
                else if (d == 3) e = 12;
                else if (d == 12) e = 3;
                s += std::log(inverse_square_bernoulli::prob(e));
            }
            return s;
        }
        digit alphabet_cap() const override { return 0; }
        bool shift_invariant() const override { return true; }
        std::string describe() const override { return "permuted"; }
    };
    inverse_square_bernoulli plain;
    permuted perm;
    auto a0 = convergence_exponent(plain, 100000);
    auto a1 = convergence_exponent(perm, 100000);
    REQUIRE(std::abs(a0.alpha - a1.alpha) < 0.01);
}

TEST_CASE("convergence exponent error paths") {
    inverse_square_bernoulli nu;
    REQUIRE_THROWS_AS(convergence_exponent(nu, 100), numeric_error); // < 8 dyadic ranks
    periodic_orbit_measure point(word{1});
    REQUIRE_THROWS_AS(convergence_exponent(point, 100000), numeric_error); // zero masses
}

TEST_CASE("relative entropy sums") {
    SECTION("h(nu|nu) = h_nu for the fair coin") {
        bernoulli_measure b({0.5, 0.5});
        for (int k : {1, 4, 9})
            REQUIRE(relative_entropy_sum(b, b, k, 2).value ==
                    Approx(std::numbers::ln2).epsilon(1e-12));
    }
    SECTION("cross-entropy of product measures is additive") {
        bernoulli_measure mu({0.9, 0.1}), nu({0.5, 0.5});
        for (int k : {1, 3, 8})
            REQUIRE(relative_entropy_sum(nu, mu, k, 2).value ==
                    Approx(std::numbers::ln2).epsilon(1e-12));
    }
    SECTION("point measure concentrates on one cylinder") {
        periodic_orbit_measure mu(word{1});
        bernoulli_measure nu({0.25, 0.75});
        for (int k : {1, 5})
            REQUIRE(relative_entropy_sum(nu, mu, k, 2).value ==
                    Approx(-std::log(0.25)).epsilon(1e-12));
    }
    SECTION("support mismatch is an error") {
        periodic_orbit_measure mu(word{2});
        periodic_orbit_measure nu(word{1});
        REQUIRE_THROWS_AS(relative_entropy_sum(nu, mu, 2, 2), support_error);
    }
}

TEST_CASE("relative entropy integral") {
    SECTION("Bernoulli potential against Bernoulli measure is the exact cross-entropy") {
        auto phi = std::make_shared<depth1_potential>(
            depth1_potential::log_weights({0.6, 0.4}));
        auto model = gibbs_model::build(phi, 2, 2, quiet());
        bernoulli_measure mu({0.3, 0.7});
        auto r = relative_entropy_integral(model, mu, 4);
        REQUIRE(r.value ==
                Approx(-(0.3 * std::log(0.6) + 0.7 * std::log(0.4))).margin(1e-11));
        REQUIRE_FALSE(r.infinite);
    }
    SECTION("golden-point measure against the Gauss model") {
        auto phi = std::make_shared<gauss_potential>(1.0);
        auto model = gibbs_model::build(phi, 250, 2, quiet());
        periodic_orbit_measure golden(word{1});
        auto r = relative_entropy_integral(model, golden, 6);
        double expect = -2.0 * std::log(0.5 * (std::sqrt(5.0) - 1.0)); // 0.9624
        REQUIRE(r.value == Approx(expect).margin(0.02));
        REQUIRE(expect == Approx(0.9624).margin(1e-4));
    }
    SECTION("sum and integral forms agree within the variation bound") {
        auto phi = std::make_shared<gauss_potential>(1.0);
        auto model = gibbs_model::build(phi, 64, 2, quiet());
        auto nu = model.induced_measure();
        counter_rng rng(41, 2);
        uint64_t ctr = 0;
        const int k = 6;
        for (int trial = 0; trial < 10; ++trial) {
            double a = 0.1 + 0.8 * rng.uniform(ctr++);
            double b = 0.1 + 0.8 * rng.uniform(ctr++);
            std::vector<std::vector<double>> P{{a, 1 - a}, {b, 1 - b}};
            auto mu = markov_measure::order1(P, markov_measure::stationary_of(P));
            double sum_form = relative_entropy_sum(*nu, mu, k, 2).value;
            auto int_form = relative_entropy_integral(model, mu, k, 2);
            double bound = (std::log(model.constant_estimate()) +
                            variation_partial_sum(*phi, 1, k)) /
                           static_cast<double>(k);
            REQUIRE(std::abs(sum_form - int_form.value) <= bound);
        }
    }
    SECTION("heavy-tail measure trips the divergence flag at a desk threshold") {
        auto phi = std::make_shared<gauss_potential>(1.0);
        auto model = gibbs_model::build(phi, 200, 2, quiet());
        log_heavy_bernoulli mu;
        auto r = relative_entropy_integral(model, mu, 3, 200, /*threshold=*/1.5);
        REQUIRE(r.infinite);
        REQUIRE(r.cap_trend.size() == 3);
        // a finite pair does not trip it even at the same low threshold
        bernoulli_measure fin({0.5, 0.5});
        auto rf = relative_entropy_integral(model, fin, 3, 200, 1.5);
        REQUIRE_FALSE(rf.infinite);
    }
}

TEST_CASE("entropy dimension grid") {
    SECTION("mu = nu gives ratio 1 everywhere") {
        bernoulli_measure b({0.5, 0.5});
        auto g = entropy_dimension_grid(b, b, {2, 4, 8}, {2});
        for (const auto& row : g.ratios)
            for (double r : row) REQUIRE(r == Approx(1.0).epsilon(1e-12));
        REQUIRE(g.beta == Approx(1.0).epsilon(1e-12));
        REQUIRE(g.stable);
    }
    SECTION("periodic mu has zero entropy dimension") {
        periodic_orbit_measure p(word{1});
        bernoulli_measure nu({0.5, 0.5});
        auto g = entropy_dimension_grid(nu, p, {2, 6}, {2});
        REQUIRE(g.zero_entropy_mu);
        REQUIRE(g.beta == 0.0);
    }
    SECTION("Markov vs fair coin at depth 12") {
        auto mu = two_state(0.9, 0.1, 0.5, 0.5);
        bernoulli_measure nu({0.5, 0.5});
        auto g = entropy_dimension_grid(nu, mu, {6, 12}, {2, 20});
        REQUIRE(g.beta == Approx(0.5576).margin(0.01));
        double closed = entropy_dimension_closed(entropy_markov(mu), std::numbers::ln2);
        REQUIRE(std::abs(g.beta - closed) / closed < 0.05);
    }
}

TEST_CASE("entropy dimension closed form") {
    REQUIRE(entropy_dimension_closed(0.0, 1.0) == 0.0);
    REQUIRE(entropy_dimension_closed(0.7, 0.7) == 1.0);
    REQUIRE(entropy_dimension_closed(0.38645, 0.69315) == Approx(0.5576).margin(2e-4));
    REQUIRE(entropy_dimension_closed(0.5, 123.0, /*infinite=*/true) == 0.0);
    REQUIRE(entropy_dimension_closed(0.0, 0.0, false, /*mu_equals_nu=*/true) == 1.0);
    REQUIRE_THROWS_AS(entropy_dimension_closed(0.7, 0.5), std::domain_error);
}

TEST_CASE("dimension formula") {
    REQUIRE(dimension_formula(0.5, 1.0).value == 1.0);
    REQUIRE(dimension_formula(0.5, 0.0).value == 0.5);
    REQUIRE(dimension_formula(0.5, 0.0).alpha_branch);
    auto v = dimension_formula(0.5, 0.5576);
    REQUIRE(v.value == Approx(0.5576));
    REQUIRE_FALSE(v.alpha_branch);
    REQUIRE_THROWS_AS(dimension_formula(-0.2, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(dimension_formula(0.2, 1.5), std::domain_error);
    // monotone in both arguments, and exactly equal to one of them
    counter_rng rng(7, 7);
    uint64_t ctr = 0;
    for (int t = 0; t < 50; ++t) {
        double a = rng.uniform(ctr++), b = rng.uniform(ctr++);
        double v1 = dimension_formula(a, b).value;
        REQUIRE((v1 == a || v1 == b));
        REQUIRE(dimension_formula(std::min(1.0, a + 0.1), b).value >= v1);
        REQUIRE(dimension_formula(a, std::min(1.0, b + 0.1)).value >= v1);
    }
}

TEST_CASE("local dimension along streams") {
    SECTION("SMB: sampling nu against itself tends to ratio 1") {
        bernoulli_measure nu({0.5, 0.3, 0.2});
        auto x = bernoulli_stream({0.5, 0.3, 0.2}, 2024);
        std::vector<uint64_t> depths;
        for (uint64_t n = 1000; n <= 10000; n += 1000) depths.push_back(n);
        auto r = local_dimension(x, nu, nu, depths);
        REQUIRE(std::abs(r.ratios.back().second - 1.0) < 0.05);
        REQUIRE(r.liminf_proxy == Approx(1.0).margin(0.05));
    }
    SECTION("constant stream has a constant ratio") {
        bernoulli_measure nu({0.25, 0.75}), ref({0.6, 0.4});
        auto x = periodic_stream(word{1});
        auto r = local_dimension(x, nu, ref, {10, 100, 1000});
        double expect = std::log(0.6) / std::log(0.25);
        for (auto& [n, v] : r.ratios) REQUIRE(v == Approx(expect).epsilon(1e-9));
    }
    SECTION("zero mass along the stream raises support_error") {
        periodic_orbit_measure nu(word{2});
        auto x = periodic_stream(word{1});
        bernoulli_measure ref({0.5, 0.5});
        REQUIRE_THROWS_AS(local_dimension(x, nu, ref, {4}), support_error);
    }
}

TEST_CASE("covering-sum diagnostic at the frozen acceptance settings") {
    covering_options opt;
    opt.j = 1;
    opt.N = 2;
    opt.n_min = 8;
    opt.n_max = 16;
    SECTION("fair-coin fixed point") {
        bernoulli_measure mu({0.5, 0.5});
        opt.eps = 0.05;
        auto r = covering_sum_diagnostic(mu, mu, opt);
        REQUIRE(r.crossed);
        REQUIRE(r.gamma_star == Approx(1.0).margin(0.1));
    }
    SECTION("Besicovitch-Eggleston pair") {
        bernoulli_measure mu({0.9, 0.1}), nu({0.5, 0.5});
        opt.eps = 0.04;
        auto r = covering_sum_diagnostic(mu, nu, opt);
        REQUIRE(r.crossed);
        double target = -(0.9 * std::log(0.9) + 0.1 * std::log(0.1)) / std::numbers::ln2;
        REQUIRE(target == Approx(0.469).margin(5e-4));
        REQUIRE(r.gamma_star == Approx(target).margin(0.1));
    }
    SECTION("vacuous constraint admits every word") {
        bernoulli_measure mu({0.5, 0.5});
        opt.eps = 0.45;
        auto r = covering_sum_diagnostic(mu, mu, opt);
        REQUIRE(r.crossed);
        REQUIRE(r.gamma_star == Approx(1.0).margin(0.1));
    }
    SECTION("too-small eps leaves the family empty") {
        bernoulli_measure mu({0.9, 0.1});
        opt.eps = 0.003;
        REQUIRE_THROWS_AS(covering_sum_diagnostic(mu, mu, opt), numeric_error);
    }
    SECTION("sampled mode approximates the exhaustive transition") {
        bernoulli_measure mu({0.5, 0.5});
        opt.eps = 0.05;
        opt.sample_budget = 4000;
        opt.seed = 9;
        auto r = covering_sum_diagnostic(mu, mu, opt);
        REQUIRE(r.crossed);
        REQUIRE(r.gamma_star == Approx(1.0).margin(0.15));
    }
}

TEST_CASE("infinite branch keeps beta below alpha") {
    // heavy-tail example: most mass parked on the fixed point, a sliver on the
    // divergent-log-moment tail; h(nu|mu) is infinite while the grid ratio
    // stays small
    auto phi = std::make_shared<gauss_potential>(1.0);
    auto model = gibbs_model::build(phi, 200, 2, quiet());
    auto mu = mixture_measure(
        {{0.98, std::make_shared<periodic_orbit_measure>(word{1})},
         {0.02, std::make_shared<log_heavy_bernoulli>()}});
    auto flag = relative_entropy_integral(model, mu, 3, 200, 0.95);
    REQUIRE(flag.infinite);
    auto nu = model.induced_measure();
    auto g = entropy_dimension_grid(*nu, mu, {2, 3}, {50, 200});
    gauss_measure exact_nu;
    auto a = convergence_exponent(exact_nu, 100000);
    REQUIRE(g.beta <= a.alpha + 0.05);
}

TEST_CASE("dimension report serializes to key-value text") {
    dimension_report rep;
    rep.h_mu = 0.25;
    rep.formula = dimension_formula(0.5, 0.25);
    std::ostringstream os;
    rep.write_kv(os);
    REQUIRE(os.str().find("dimension 0.5") != std::string::npos);
    REQUIRE(os.str().find("branch alpha") != std::string::npos);
}

TEST_CASE("relative entropy strictly dominates entropy away from nu") {
    // h(nu|mu) >= h_mu, with equality only at mu = nu
    auto phi = std::make_shared<depth1_potential>(depth1_potential::log_weights({0.45, 0.55}));
    transfer_options q;
    q.with_record = false;
    auto model = gibbs_model::build(phi, 2, 2, q);
    counter_rng rng(88, 3);
    uint64_t ctr = 0;
    for (int trial = 0; trial < 12; ++trial) {
        double a = 0.1 + 0.8 * rng.uniform(ctr++);
        double b = 0.1 + 0.8 * rng.uniform(ctr++);
        std::vector<std::vector<double>> P{{a, 1 - a}, {b, 1 - b}};
        auto mu = markov_measure::order1(P, markov_measure::stationary_of(P));
        double h_mu = entropy_markov(mu);
        double h_rel = -model.sampled_potential_integral(mu);
        REQUIRE(h_rel >= h_mu - 1e-12);
        bool is_nu = std::abs(a - 0.45) < 1e-9 && std::abs(b - 0.45) < 1e-9;
        if (!is_nu) REQUIRE(h_rel > h_mu + 1e-6);
    }
    // equality at mu = nu itself
    auto nu = model.induced_measure();
    double h_nu = *nu->exact_entropy();
    REQUIRE(-model.sampled_potential_integral(*nu) == Approx(h_nu).margin(1e-9));
}
