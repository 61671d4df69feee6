// Experiment runner: thermodynamic-formalism quantities on the countable full
// shift as reproducible command-line experiments. Every report embeds the
// config echo and RNG seed, so identical invocations produce identical bytes.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "gdim/gdim.hpp"

using namespace gdim;
using nlohmann::json;

namespace {

// ---- measure / potential specs ----

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

measure_ptr parse_measure(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (kind == "gauss") return std::make_shared<gauss_measure>();
        if (kind == "zeta") return std::make_shared<inverse_square_bernoulli>();
        if (kind == "heavy") return std::make_shared<log_heavy_bernoulli>();
        if (kind == "golden") return std::make_shared<periodic_orbit_measure>(word{1});
        if (kind == "bernoulli") return std::make_shared<bernoulli_measure>(parse_doubles(rest));
        if (kind == "periodic") return std::make_shared<periodic_orbit_measure>(parse_word(rest));
        if (kind == "markov") {
            // rows separated by '/': markov:0.9,0.1/0.5,0.5
            std::vector<std::vector<double>> P;
            std::stringstream ss(rest);
            std::string row;
            while (std::getline(ss, row, '/')) P.push_back(parse_doubles(row));
            return std::make_shared<markov_measure>(
                markov_measure::order1(P, markov_measure::stationary_of(P)));
        }
        if (kind == "markovfile") {
            std::ifstream is(rest);
            if (!is) throw config_error("cannot open measure file " + rest);
            return std::make_shared<markov_measure>(markov_measure::load(is));
        }
        if (kind == "tablefile") {
            std::ifstream is(rest);
            if (!is) throw config_error("cannot open table file " + rest);
            return std::make_shared<table_measure>(table_measure::load(is, true));
        }
    } catch (const std::invalid_argument& e) {
        throw config_error("bad measure spec '" + spec + "': " + e.what());
    } catch (const std::out_of_range& e) {
        throw config_error("bad measure spec '" + spec + "': " + e.what());
    }
    throw config_error("unknown measure spec '" + spec + "'");
}

potential_ptr parse_potential(const std::string& spec, double s) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (kind == "gauss") return std::make_shared<gauss_potential>(s);
        if (kind == "bernoulli")
            return std::make_shared<depth1_potential>(
                depth1_potential::log_weights(parse_doubles(rest)));
    } catch (const std::invalid_argument& e) {
        throw config_error("bad potential spec '" + spec + "': " + e.what());
    }
    throw config_error("unknown potential spec '" + spec + "'");
}

// ---- output plumbing: buffered, written only on success ----

struct output_set {
    std::string base;
    std::map<std::string, std::string> files; // suffix -> contents
    std::string echo;

    std::ostringstream& buffer(const std::string& suffix) {
        auto [it, fresh] = buffers_.try_emplace(suffix);
        if (fresh && suffix.ends_with(".txt")) it->second << echo;
        return it->second;
    }
    void flush() {
        if (base.empty()) return;
        for (auto& [suffix, os] : buffers_) {
            std::ofstream f(base + suffix);
            if (!f) throw config_error("cannot write output file " + base + suffix);
            f << os.str();
        }
    }
    void print_summary(const std::string& suffix = ".txt") {
        auto it = buffers_.find(suffix);
        if (it != buffers_.end()) std::cout << it->second.str();
    }

private:
    std::map<std::string, std::ostringstream> buffers_;
};

std::string config_echo(const std::string& cmd,
                        const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream os;
    os << "# gdim " << cmd << "\n";
    for (const auto& [k, v] : kv) os << "# " << k << " = " << v << "\n";
    return os.str();
}

std::vector<int64_t> parse_horizons(const std::string& s) {
    std::vector<int64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"thermodynamic formalism on the countable full shift"};
    app.require_subcommand(1);
    int workers = 0;
    app.add_option("--workers", workers, "worker threads (default: GDIM_WORKERS or all cores)");

    // ---- pressure ----
    auto* cmd_pressure = app.add_subcommand("pressure", "Gurevich pressure over a (N,d) grid");
    std::string p_pot = "gauss";
    double p_s = 1.0;
    digit p_N = 1000;
    int p_d = 2;
    std::string p_out;
    cmd_pressure->add_option("--potential", p_pot, "gauss | bernoulli:p1,p2,...");
    cmd_pressure->add_option("--s", p_s, "potential parameter (gauss)");
    cmd_pressure->add_option("--N", p_N, "alphabet cap");
    cmd_pressure->add_option("--d", p_d, "block depth");
    cmd_pressure->add_option("--out", p_out, "output file base");

    // ---- dim ----
    auto* cmd_dim = app.add_subcommand("dim", "dimension formula max{alpha, beta} for (mu, nu)");
    std::string d_mu = "bernoulli:0.5,0.5", d_pot = "bernoulli:0.5,0.5", d_out;
    double d_s = 1.0;
    digit d_N = 64;
    int d_d = 2, d_k = 8;
    digit d_alpha_rank = 100000;
    uint64_t d_seed = 1;
    cmd_dim->add_option("--mu", d_mu, "invariant measure spec ('nu' = the Gibbs measure itself)");
    cmd_dim->add_option("--nu-potential", d_pot, "potential of the metric-defining Gibbs measure");
    cmd_dim->add_option("--s", d_s, "potential parameter");
    cmd_dim->add_option("--N", d_N, "model alphabet cap");
    cmd_dim->add_option("--d", d_d, "model block depth");
    cmd_dim->add_option("--k", d_k, "entropy depth");
    cmd_dim->add_option("--alpha-rank", d_alpha_rank, "1-cylinder ranks for alpha");
    cmd_dim->add_option("--seed", d_seed, "rng seed (echoed)");
    cmd_dim->add_option("--out", d_out, "output file base");

    // ---- seed ----
    auto* cmd_seed = app.add_subcommand("seed", "construct a digit-capped generic point");
    std::string s_mu = "markov:0.6,0.3,0.1/0.2,0.5,0.3/0.3,0.3,0.4", s_caps = "linear", s_out;
    int s_levels = 3;
    uint64_t s_seed = 1, s_horizon = 100000;
    cmd_seed->add_option("--mu", s_mu, "target invariant measure");
    cmd_seed->add_option("--caps", s_caps, "digit caps: linear | scaled:<c> | none");
    cmd_seed->add_option("--levels", s_levels, "construction levels");
    cmd_seed->add_option("--seed", s_seed, "rng seed");
    cmd_seed->add_option("--horizon", s_horizon, "digits to emit");
    cmd_seed->add_option("--out", s_out, "output file base");

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "d* trajectory of a stream against mu");
    std::string v_mu = "bernoulli:0.5,0.5", v_stream, v_horizons = "1000,10000,100000", v_out;
    int v_kmax = 2;
    digit v_cap = 0;
    cmd_verify->add_option("--mu", v_mu, "target measure");
    cmd_verify->add_option("--stream", v_stream, "digit file (one digit per line)")->required();
    cmd_verify->add_option("--horizons", v_horizons, "comma-separated horizons");
    cmd_verify->add_option("--k-max", v_kmax, "accumulator depth");
    cmd_verify->add_option("--cap", v_cap, "alphabet cap (default mu's)");
    cmd_verify->add_option("--out", v_out, "output file base");

    // ---- cantor ----
    auto* cmd_cantor = app.add_subcommand("cantor", "Cantor-set witnesses: Y* or F_z samples");
    std::string c_mode = "ystar", c_mu = "markov:0.75,0.25/0.35,0.65",
                c_pot = "bernoulli:0.4,0.6", c_nu = "zeta", c_out;
    double c_s = 1.0, c_eps = 0.9, c_delta = 0.9;
    digit c_N = 2;
    int c_d = 2, c_levels = 3, c_count = 10;
    uint64_t c_seed = 1, c_depth = 10000;
    cmd_cantor->add_option("--mode", c_mode, "ystar | fz");
    cmd_cantor->add_option("--mu", c_mu, "target invariant measure");
    cmd_cantor->add_option("--nu-potential", c_pot, "Gibbs potential (ystar mode)");
    cmd_cantor->add_option("--nu", c_nu, "metric measure (fz mode)");
    cmd_cantor->add_option("--s", c_s, "potential parameter");
    cmd_cantor->add_option("--N", c_N, "model alphabet cap (ystar mode)");
    cmd_cantor->add_option("--d", c_d, "model block depth (ystar mode)");
    cmd_cantor->add_option("--eps", c_eps, "epsilon (fz mode)");
    cmd_cantor->add_option("--delta", c_delta, "delta (fz mode)");
    cmd_cantor->add_option("--levels", c_levels, "levels");
    cmd_cantor->add_option("--count", c_count, "streams to sample");
    cmd_cantor->add_option("--depth", c_depth, "depth per stream");
    cmd_cantor->add_option("--seed", c_seed, "rng seed");
    cmd_cantor->add_option("--out", c_out, "output file base");

    // ---- cfdim ----
    auto* cmd_cfdim = app.add_subcommand("cfdim", "dimension of Gauss-system generic points");
    std::string f_ell = "gauss", f_out;
    double f_s = 1.0;
    digit f_N = 1000;
    int f_d = 2;
    digit f_icap = 10000, f_ecap = 10000;
    int f_ik = 2, f_ek = 2;
    cmd_cfdim->add_option("--ell", f_ell, "S-invariant measure: gauss | golden | markov:... ");
    cmd_cfdim->add_option("--s", f_s, "potential parameter (> 1/2)");
    cmd_cfdim->add_option("--model-N", f_N, "transfer cap (0 skips the model, s = 1 only)");
    cmd_cfdim->add_option("--model-d", f_d, "transfer block depth");
    cmd_cfdim->add_option("--integral-cap", f_icap, "cap for the integral form");
    cmd_cfdim->add_option("--integral-k", f_ik, "depth for the integral form");
    cmd_cfdim->add_option("--entropy-cap", f_ecap, "cap for cylinder entropy");
    cmd_cfdim->add_option("--entropy-k", f_ek, "depth for cylinder entropy");
    cmd_cfdim->add_option("--out", f_out, "output file base");

    // config files are expanded into the argument list before parsing; every
    // option takes its last occurrence, so explicit flags override the file
    std::vector<std::string> args;
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config") {
            if (i + 1 >= argc) throw config_error("--config needs a path");
            config_path = argv[++i];
            continue;
        }
        args.push_back(std::move(a));
    }
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw config_error("cannot open config file " + config_path);
        if (args.empty()) throw config_error("--config needs a subcommand");
        std::vector<std::string> injected;
        std::string line;
        while (std::getline(is, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                size_t b = s.find_first_not_of(" \t");
                size_t e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
            if (key.empty()) throw config_error("config file: empty key in line '" + line + "'");
            injected.push_back("--" + key);
            injected.push_back(value);
        }
        args.insert(args.begin() + 1, injected.begin(), injected.end());
    }
    for (auto* sub : app.get_subcommands({})) {
        for (auto* o : sub->get_options()) o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--config", "config file of key=value lines (flags override it)");
    }
    for (auto* o : app.get_options()) o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        std::exit(app.exit(e) == 0 ? 0 : 2);
    }
    if (workers > 0) worker_count() = workers;

    if (cmd_pressure->parsed()) {
        output_set out;
        out.base = p_out;
        out.echo = config_echo("pressure", {{"potential", p_pot},
                                            {"s", std::to_string(p_s)},
                                            {"N", std::to_string(p_N)},
                                            {"d", std::to_string(p_d)}});
        auto phi = parse_potential(p_pot, p_s);
        if (phi->finite_alphabet() > 0) p_N = std::min(p_N, phi->finite_alphabet());
        auto res = gurevich_pressure(phi, p_N, p_d);
        auto& txt = out.buffer(".txt");
        txt.precision(17);
        txt << "pressure " << res.value << "\niterations " << res.iterations << "\nresidual "
            << res.residual << "\n";
        auto& csv = out.buffer("_grid.csv");
        csv.precision(17);
        csv << "N,d,pressure,iterations\n";
        for (const auto& e : res.record.grid)
            csv << e.N << "," << e.d << "," << e.pressure << "," << e.iterations << "\n";
        csv << "period,cap,orbit_sum,\n";
        for (const auto& e : res.record.orbit_sums)
            csv << e.period << "," << e.cap << "," << e.value << ",\n";
        json j{{"pressure", res.value}, {"iterations", res.iterations},
               {"residual", res.residual}, {"N", p_N}, {"d", p_d}, {"potential", p_pot}};
        out.buffer(".json") << j.dump(2) << "\n";
        out.flush();
        out.print_summary();
        return 0;
    }

    if (cmd_dim->parsed()) {
        output_set out;
        out.base = d_out;
        out.echo = config_echo("dim", {{"mu", d_mu},
                                       {"nu_potential", d_pot},
                                       {"s", std::to_string(d_s)},
                                       {"N", std::to_string(d_N)},
                                       {"d", std::to_string(d_d)},
                                       {"k", std::to_string(d_k)},
                                       {"seed", std::to_string(d_seed)}});
        auto phi = parse_potential(d_pot, d_s);
        if (phi->finite_alphabet() > 0) d_N = std::min(d_N, phi->finite_alphabet());
        auto model = gibbs_model::build(phi, d_N, d_d);
        auto nu = model.induced_measure();
        measure_ptr mu = (d_mu == "nu") ? nu : parse_measure(d_mu);
        if (!mu->shift_invariant()) throw support_error("dim: mu must be shift-invariant");
        {
            double inside = 0.0;
            word w(1);
            for (digit a = 1; a <= d_N; ++a) {
                w[0] = a;
                inside += mu->mass(w);
            }
            if (inside < 0.5)
                throw support_error("dim: mu support escapes the nu-model alphabet");
        }

        dimension_report rep;
        rep.N = d_N;
        rep.d = d_d;
        rep.k = d_k;
        rep.mu_equals_nu = (d_mu == "nu");
        if (d_N >= 16384) {
            rep.alpha = convergence_exponent(*nu, std::min<digit>(d_alpha_rank, d_N));
        } else {
            // finitely many positive 1-cylinder masses: alpha is exactly 0
            rep.alpha.alpha = 0.0;
        }
        if (auto h = mu->exact_entropy())
            rep.h_mu = *h;
        else
            rep.h_mu = entropy_cylinder(*mu, d_k, d_N).value;
        auto ri = relative_entropy_integral(model, *mu, d_k);
        rep.h_rel_integral = ri.value;
        rep.h_rel_infinite = ri.infinite;
        rep.h_rel_sum = relative_entropy_sum(*nu, *mu, d_k, d_N).value;
        {
            std::vector<int> ks{std::max(2, d_k / 2), d_k};
            std::vector<digit> Ns{std::max<digit>(2, d_N / 4), d_N};
            rep.beta_grid = entropy_dimension_grid(*nu, *mu, ks, Ns);
        }
        rep.beta_closed = entropy_dimension_closed(rep.h_mu, rep.h_rel_integral,
                                                   rep.h_rel_infinite, rep.mu_equals_nu);
        rep.formula = dimension_formula(rep.alpha.alpha, rep.beta_closed);
        auto& txt = out.buffer(".txt");
        rep.write_kv(txt);
        json j{{"alpha", rep.alpha.alpha},
               {"alpha_slope", rep.alpha.slope},
               {"alpha_points",
                json{{"log_n", rep.alpha.log_n}, {"neg_log_mass", rep.alpha.neg_log_mass}}},
               {"alpha_partial_sums",
                json{{"below", rep.alpha.partial_sum_below},
                     {"above", rep.alpha.partial_sum_above}}},
               {"h_mu", rep.h_mu},
               {"h_rel_sum", rep.h_rel_sum},
               {"h_rel_integral", rep.h_rel_integral},
               {"h_rel_infinite", rep.h_rel_infinite},
               {"beta_grid", rep.beta_grid.beta},
               {"beta_grid_ratios", rep.beta_grid.ratios},
               {"beta_grid_k", rep.beta_grid.k_list},
               {"beta_grid_N", rep.beta_grid.N_list},
               {"beta_stable", rep.beta_grid.stable},
               {"beta_stability_gap", rep.beta_grid.stability_gap},
               {"beta_closed", rep.beta_closed},
               {"dimension", rep.formula.value},
               {"branch", std::string(rep.formula.alpha_branch ? "alpha" : "beta")},
               {"N", d_N},
               {"d", d_d},
               {"k", d_k},
               {"mass_defect", rep.mass_defect}};
        out.buffer(".json") << j.dump(2) << "\n";
        out.flush();
        out.print_summary();
        return 0;
    }

    if (cmd_seed->parsed()) {
        output_set out;
        out.base = s_out;
        out.echo = config_echo("seed", {{"mu", s_mu},
                                        {"caps", s_caps},
                                        {"levels", std::to_string(s_levels)},
                                        {"seed", std::to_string(s_seed)},
                                        {"horizon", std::to_string(s_horizon)}});
        auto mu = parse_measure(s_mu);
        std::function<digit(uint64_t)> caps;
        if (s_caps == "linear")
            caps = [](uint64_t p) { return static_cast<digit>(p); };
        else if (s_caps.starts_with("scaled:")) {
            double c = std::stod(s_caps.substr(7));
            caps = [c](uint64_t p) {
                return std::max<digit>(1, static_cast<digit>(c * static_cast<double>(p)));
            };
        } else if (s_caps != "none")
            throw config_error("seed: unknown caps spec '" + s_caps + "'");
        seed_options opt;
        opt.levels = s_levels;
        opt.seed = s_seed;
        auto z = build_seed(*mu, caps, opt);
        auto& txt = out.buffer(".txt");
        z.schedule.store(txt);
        auto& stream_file = out.buffer("_stream.txt");
        store_stream(stream_file, z.stream, s_horizon, out.echo.substr(2, out.echo.size() - 3));
        out.flush();
        out.print_summary();
        return 0;
    }

    if (cmd_verify->parsed()) {
        output_set out;
        out.base = v_out;
        out.echo = config_echo("verify", {{"mu", v_mu},
                                          {"stream", v_stream},
                                          {"horizons", v_horizons},
                                          {"k_max", std::to_string(v_kmax)}});
        auto mu = parse_measure(v_mu);
        std::ifstream is(v_stream);
        if (!is) throw config_error("verify: cannot open stream file " + v_stream);
        auto x = load_stream(is);
        auto res = verify_generic(x, *mu, parse_horizons(v_horizons), v_kmax, v_cap);
        auto& txt = out.buffer(".txt");
        txt.precision(17);
        txt << "strictly_decreasing " << res.strictly_decreasing << "\nnonincreasing "
            << res.nonincreasing << "\n";
        auto& csv = out.buffer("_trajectory.csv");
        csv.precision(17);
        csv << "horizon,dstar,tail\n";
        for (auto& [h, r] : res.trajectory)
            csv << h << "," << r.value << "," << r.tail << "\n";
        out.flush();
        out.print_summary();
        return 0;
    }

    if (cmd_cantor->parsed()) {
        output_set out;
        out.base = c_out;
        out.echo = config_echo("cantor", {{"mode", c_mode},
                                          {"mu", c_mu},
                                          {"count", std::to_string(c_count)},
                                          {"depth", std::to_string(c_depth)},
                                          {"seed", std::to_string(c_seed)}});
        auto mu = parse_measure(c_mu);
        std::vector<uint64_t> depths;
        for (uint64_t n = c_depth / 10; n <= c_depth; n += c_depth / 10) depths.push_back(n);
        auto& csv = out.buffer("_proxy.csv");
        csv.precision(17);
        csv << "stream,liminf_proxy\n";
        auto& txt = out.buffer(".txt");
        txt.precision(17);
        if (c_mode == "ystar") {
            auto phi = parse_potential(c_pot, c_s);
            if (phi->finite_alphabet() > 0) c_N = std::min(c_N, phi->finite_alphabet());
            auto model = gibbs_model::build(phi, c_N, c_d);
            auto fam = sample_Ystar(*mu, model, c_levels, c_count, c_seed);
            auto nu = model.induced_measure();
            double h_mu = fam.h_level.empty() ? 0.0 : fam.h_level.back();
            double h_rel = fam.hrel_level.empty() ? 1.0 : fam.hrel_level.back();
            txt << "bound " << (h_mu / h_rel) << "\n";
            for (int i = 0; i < c_count; ++i) {
                auto r = local_dimension(fam.streams[size_t(i)], *nu, *fam.companion, depths);
                csv << i << "," << r.liminf_proxy << "\n";
                auto& sf = out.buffer("_stream" + std::to_string(i) + ".txt");
                store_stream(sf, fam.streams[size_t(i)], c_depth);
            }
        } else if (c_mode == "fz") {
            seed_options sopt;
            sopt.levels = std::max(2, c_levels - 1);
            sopt.seed = c_seed;
            auto z = build_seed(*mu, nullptr, sopt);
            auto nu = parse_measure(c_nu);
            auto fam = sample_F(z, *nu, c_eps, c_delta, c_count, c_depth, c_seed);
            txt << "levels " << fam.levels.size() << "\n";
            for (int i = 0; i < c_count; ++i) {
                auto r = local_dimension(fam.streams[size_t(i)], *nu, *fam.companion, depths);
                csv << i << "," << r.liminf_proxy << "\n";
                auto& sf = out.buffer("_stream" + std::to_string(i) + ".txt");
                store_stream(sf, fam.streams[size_t(i)], c_depth);
            }
        } else {
            throw config_error("cantor: unknown mode '" + c_mode + "'");
        }
        out.flush();
        out.print_summary();
        return 0;
    }

    if (cmd_cfdim->parsed()) {
        output_set out;
        out.base = f_out;
        out.echo = config_echo("cfdim", {{"ell", f_ell},
                                         {"s", std::to_string(f_s)},
                                         {"model_N", std::to_string(f_N)},
                                         {"model_d", std::to_string(f_d)}});
        auto ell = parse_measure(f_ell);
        cf_dimension_options opt;
        opt.model_N = f_N;
        opt.model_d = f_d;
        opt.integral_cap = f_icap;
        opt.integral_k = f_ik;
        opt.entropy_cap = f_ecap;
        opt.entropy_k = f_ek;
        auto rep = dim_generic_cf(*ell, f_s, opt);
        auto& txt = out.buffer(".txt");
        rep.write_kv(txt);
        json j{{"s", rep.s},
               {"alpha", rep.alpha},
               {"h_ell", rep.h_ell},
               {"integral", rep.integral},
               {"pressure", rep.pressure},
               {"dimension", rep.formula.value},
               {"branch", std::string(rep.formula.alpha_branch ? "alpha" : "beta")}};
        out.buffer(".json") << j.dump(2) << "\n";
        out.flush();
        out.print_summary();
        return 0;
    }
    return 0;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const support_error& e) {
        std::cerr << "support mismatch: " << e.what() << "\n";
        return 4;
    }
}
