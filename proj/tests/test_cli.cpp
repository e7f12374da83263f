#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lpplab_cli/cli.hpp"

using lpplab::cli::run_command;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string tmp_path(const std::string& name) { return "/tmp/lpplab_test_" + name; }

}  // namespace

TEST_CASE("exit codes: usage errors are 2, success is 0") {
    CHECK(run_command({"covariance", "--no-such-flag", "7"}) == 2);
    CHECK(run_command({"not-a-command"}) == 2);
    CHECK(run_command({}) == 2);
    CHECK(run_command({"covariance", "--n", "-5"}) == 2);
    CHECK(run_command({"oracle-check", "--max-sum", "4", "--cases", "20", "--seed", "1", "--out",
                       tmp_path("oracle.txt")}) == 0);
}

TEST_CASE("covariance CSV is byte-identical across thread counts") {
    const std::vector<std::string> base = {"covariance", "--n",      "200", "--r",
                                           "100",        "--replicas", "40",  "--seed",
                                           "3",          "--format", "csv"};
    std::vector<std::string> outs;
    for (const std::string threads : {"1", "4", "8"}) {
        auto args = base;
        args.push_back("--threads");
        args.push_back(threads);
        args.push_back("--out");
        args.push_back(tmp_path("cov_t" + threads + ".csv"));
        REQUIRE(run_command(args) == 0);
        outs.push_back(slurp(tmp_path("cov_t" + threads + ".csv")));
    }
    CHECK(outs[0] == outs[1]);
    CHECK(outs[0] == outs[2]);
    CHECK(outs[0].find("replica,seed,x_r,x_n,u0_a,umax_a,tf_r,overlap") != std::string::npos);
    CHECK(outs[0].find("seed=3") != std::string::npos);  // config echo
    CHECK(outs[0].find("v0.1.0") != std::string::npos);  // version string
}

TEST_CASE("repeat runs with one config produce identical artifacts") {
    const std::vector<std::string> args = {"events", "--n", "120",  "--r",        "24",
                                           "--replicas", "10", "--seed", "5",
                                           "--which", "large_tf,barrier", "--phi", "2",
                                           "--barrier-l", "1", "--out", tmp_path("ev.csv")};
    REQUIRE(run_command(args) == 0);
    const std::string first = slurp(tmp_path("ev.csv"));
    REQUIRE(run_command(args) == 0);
    CHECK(first == slurp(tmp_path("ev.csv")));
    CHECK(first.find("replica,seed,large_tf,barrier") != std::string::npos);
}

TEST_CASE("exponent JSON carries the slope and config echo") {
    REQUIRE(run_command({"exponent", "--n", "120", "--tau", "0.3,0.4,0.5", "--ic", "flat",
                         "--replicas", "500", "--seed", "7", "--format", "json", "--out",
                         tmp_path("exp.json")}) == 0);
    const auto j = nlohmann::json::parse(slurp(tmp_path("exp.json")));
    CHECK(j.contains("slope"));
    CHECK(j["config"]["n"] == "120");
    CHECK(j["config"]["ic"] == "flat");
    CHECK(j["seeds"]["master"] == 7);
    CHECK(j["estimates"].size() == 3);  // one per tau
    CHECK(j.contains("runtime_seconds"));
    CHECK(j["version"] == "0.1.0");
}

TEST_CASE("geodesic CSV rows are a monotone lattice path") {
    REQUIRE(run_command({"geodesic", "--n", "64", "--seed", "9", "--format", "csv", "--out",
                         tmp_path("geo.csv")}) == 0);
    std::ifstream f(tmp_path("geo.csv"));
    std::string line;
    std::getline(f, line);  // banner
    std::getline(f, line);  // config
    std::getline(f, line);
    CHECK(line == "v1,v2");
    long long px = 0, py = 0;
    bool first = true;
    int rows = 0;
    while (std::getline(f, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const long long x = std::stoll(line.substr(0, comma));
        const long long y = std::stoll(line.substr(comma + 1));
        if (!first) {
            const bool step_right = (x == px + 1 && y == py);
            const bool step_up = (x == px && y == py + 1);
            CHECK((step_right || step_up));
        }
        px = x;
        py = y;
        first = false;
        ++rows;
    }
    CHECK(rows == 64 * 2 + 1);
    CHECK(px == 64);
    CHECK(py == 64);
}

TEST_CASE("profile CSV covers a symmetric scaled grid") {
    REQUIRE(run_command({"profile", "--n", "60", "--kind", "point", "--half-width", "12",
                         "--replicas", "2", "--seed", "11", "--out", tmp_path("prof.csv")}) == 0);
    const std::string content = slurp(tmp_path("prof.csv"));
    CHECK(content.find("replica,x,value") != std::string::npos);
    // 2 replicas x 25 grid points
    int rows = 0;
    for (const char ch : content) rows += (ch == '\n');
    CHECK(rows == 3 + 2 * 25);
}

TEST_CASE("tails output is well-formed for both centerings") {
    for (const std::string center : {"mean", "4n"}) {
        REQUIRE(run_command({"tails", "--n", "80", "--replicas", "200", "--seed", "13",
                             "--thresholds", "0,1,2", "--center", center, "--format", "json",
                             "--out", tmp_path("tails.json")}) == 0);
        const auto j = nlohmann::json::parse(slurp(tmp_path("tails.json")));
        CHECK(j["tails"].size() == 3);
        CHECK(j["config"]["center"] == center);
    }
}

TEST_CASE("brownian two-peak report includes the analytic bound") {
    REQUIRE(run_command({"brownian", "--op", "two-peak", "--bm-m", "1", "--eps", "0.02",
                         "--replicas", "500", "--step", "0.005", "--seed", "17", "--format",
                         "json", "--out", tmp_path("bm.json")}) == 0);
    const auto j = nlohmann::json::parse(slurp(tmp_path("bm.json")));
    REQUIRE(j["estimates"].size() == 1);
    CHECK(j["estimates"][0].contains("bound"));
    CHECK(j["estimates"][0]["estimate"].get<double>() <= 1.0);
}

TEST_CASE("config file values are read and flags override them") {
    {
        std::ofstream cfg(tmp_path("cfg.ini"));
        cfg << "n=90\nreplicas=5\nseed=21\n";
    }
    REQUIRE(run_command({"covariance", "--config", tmp_path("cfg.ini"), "--r", "30",
                         "--weights-only", "--out", tmp_path("cfg_out.csv")}) == 0);
    const std::string content = slurp(tmp_path("cfg_out.csv"));
    CHECK(content.find("n=90") != std::string::npos);
    CHECK(content.find("seed=21") != std::string::npos);

    REQUIRE(run_command({"covariance", "--config", tmp_path("cfg.ini"), "--n", "100", "--r", "30",
                         "--weights-only", "--out", tmp_path("cfg_out2.csv")}) == 0);
    CHECK(slurp(tmp_path("cfg_out2.csv")).find("n=100") != std::string::npos);
}

TEST_CASE("runtime failures exit with 1") {
    // unwritable output path
    CHECK(run_command({"covariance", "--n", "40", "--r", "20", "--replicas", "2", "--out",
                       "/nonexistent_dir/x.csv"}) == 1);
}
