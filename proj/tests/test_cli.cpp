#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gdim/gdim.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(GDIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct temp_dir {
    fs::path path;
    temp_dir() {
        path = fs::temp_directory_path() / ("gdim_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~temp_dir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cli: pressure on a normalized weight vector") {
    temp_dir tmp;
    auto base = (tmp.path / "p").string();
    REQUIRE(run_cli("pressure --potential bernoulli:0.5,0.3,0.2 --d 2 --out " + base) == 0);
    auto txt = slurp(base + ".txt");
    REQUIRE(txt.find("pressure ") != std::string::npos);
    auto pos = txt.find("pressure ");
    double p = std::stod(txt.substr(pos + 9));
    REQUIRE(std::abs(p) < 1e-12);
    REQUIRE(fs::exists(base + "_grid.csv"));
    REQUIRE(fs::exists(base + ".json"));
}

TEST_CASE("cli: malformed specs exit 2 and write nothing") {
    temp_dir tmp;
    auto base = (tmp.path / "x").string();
    REQUIRE(run_cli("pressure --potential bogus:1,2 --out " + base) == 2);
    REQUIRE_FALSE(fs::exists(base + ".txt"));
    REQUIRE(run_cli("dim --mu bernoulli:0.5,0.7 --out " + base) == 2); // weights not normalized
    REQUIRE_FALSE(fs::exists(base + ".txt"));
    REQUIRE(run_cli("cfdim --ell golden --s 0.8 --model-N 0") == 2);
}

TEST_CASE("cli: support mismatch exits 4") {
    REQUIRE(run_cli("dim --mu periodic:3 --nu-potential bernoulli:0.5,0.5") == 4);
}

TEST_CASE("cli: replay is byte-identical") {
    temp_dir tmp;
    auto b1 = (tmp.path / "a").string();
    auto b2 = (tmp.path / "b").string();
    std::string args =
        "dim --mu markov:0.9,0.1/0.5,0.5 --nu-potential bernoulli:0.5,0.5 --k 6 --seed 11 --out ";
    REQUIRE(run_cli(args + b1) == 0);
    REQUIRE(run_cli(args + b2) == 0);
    REQUIRE(slurp(b1 + ".txt") == slurp(b2 + ".txt"));
    REQUIRE(slurp(b1 + ".json") == slurp(b2 + ".json"));
    REQUIRE(!slurp(b1 + ".txt").empty());
}

TEST_CASE("cli: config file supplies defaults, flags override") {
    temp_dir tmp;
    auto cfg = tmp.path / "run.ini";
    {
        std::ofstream f(cfg);
        f << "potential=bernoulli:0.25,0.75\nd=2\n";
    }
    auto base = (tmp.path / "c").string();
    REQUIRE(run_cli("pressure --config " + cfg.string() + " --out " + base) == 0);
    REQUIRE(slurp(base + ".txt").find("bernoulli:0.25,0.75") != std::string::npos);
    // command line wins over the file
    REQUIRE(run_cli("pressure --config " + cfg.string() +
                    " --potential bernoulli:0.5,0.5 --out " + base) == 0);
    REQUIRE(slurp(base + ".txt").find("bernoulli:0.5,0.5") != std::string::npos);
}

TEST_CASE("cli: cfdim golden degenerate branch") {
    temp_dir tmp;
    auto base = (tmp.path / "g").string();
    REQUIRE(run_cli("cfdim --ell golden --model-N 0 --out " + base) == 0);
    auto txt = slurp(base + ".txt");
    REQUIRE(txt.find("dimension 0.5\n") != std::string::npos);
    REQUIRE(txt.find("branch alpha") != std::string::npos);
}

TEST_CASE("cli: seed then verify pipeline") {
    temp_dir tmp;
    auto sbase = (tmp.path / "s").string();
    REQUIRE(run_cli("seed --mu markov:0.6,0.3,0.1/0.2,0.5,0.3/0.3,0.3,0.4 --caps linear "
                    "--levels 3 --seed 9 --horizon 100000 --out " +
                    sbase) == 0);
    REQUIRE(fs::exists(sbase + "_stream.txt"));
    auto vbase = (tmp.path / "v").string();
    REQUIRE(run_cli("verify --mu markov:0.6,0.3,0.1/0.2,0.5,0.3/0.3,0.3,0.4 --stream " + sbase +
                    "_stream.txt --horizons 1000,10000,100000 --out " + vbase) == 0);
    auto csv = slurp(vbase + "_trajectory.csv");
    // decreasing d* trajectory
    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line); // header
    std::vector<double> vals;
    while (std::getline(ss, line)) {
        auto c1 = line.find(','), c2 = line.rfind(',');
        vals.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    REQUIRE(vals.size() == 3);
    REQUIRE(vals[2] < vals[0]);
}

TEST_CASE("cli: cantor ystar emits streams and proxies") {
    temp_dir tmp;
    auto base = (tmp.path / "y").string();
    REQUIRE(run_cli("cantor --mode ystar --mu markov:0.75,0.25/0.35,0.65 "
                    "--nu-potential bernoulli:0.4,0.6 --N 2 --levels 2 --count 2 "
                    "--depth 4000 --seed 5 --out " +
                    base) == 0);
    REQUIRE(fs::exists(base + "_stream0.txt"));
    REQUIRE(fs::exists(base + "_stream1.txt"));
    auto csv = slurp(base + "_proxy.csv");
    REQUIRE(csv.find("liminf_proxy") != std::string::npos);
}

TEST_CASE("cli: cfdim on the Gauss measure at reduced caps") {
    temp_dir tmp;
    auto base = (tmp.path / "cf").string();
    REQUIRE(run_cli("cfdim --ell gauss --model-N 125 --integral-cap 2000 --entropy-cap 2000 "
                    "--out " +
                    base) == 0);
    auto txt = slurp(base + ".txt");
    REQUIRE(txt.find("dimension ") != std::string::npos);
    auto pos = txt.find("\ndimension ");
    double dim = std::stod(txt.substr(pos + 11));
    REQUIRE(dim > 0.9);
    REQUIRE(dim < 1.1);
    REQUIRE(fs::exists(base + ".json"));
}

TEST_CASE("cli: numeric failures exit 3") {
    temp_dir tmp;
    auto sfile = tmp.path / "short.txt";
    {
        std::ofstream f(sfile);
        f << "1\n2\n1\n";
    }
    // horizon far beyond the stream file: stream exhaustion is a numeric error
    REQUIRE(run_cli("verify --mu bernoulli:0.5,0.5 --stream " + sfile.string() +
                    " --horizons 1000") == 3);
}
