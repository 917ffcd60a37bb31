#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chainscope/cli.hpp"
#include "chainscope/report.hpp"

using namespace chainscope;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

struct TempDir {
    std::filesystem::path path = std::filesystem::temp_directory_path() / "chainscope_cli_test";
    TempDir() { std::filesystem::create_directories(path); }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("ladder grammar") {
    const auto g = parse_ladder("0.5:0.001:geometric:12");
    REQUIRE(g.size() == 12);
    CHECK(g.front() == 0.5);
    CHECK(g.back() == 0.001);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]));
    CHECK(parse_ladder("1:2:linear:3") == std::vector<double>{1, 1.5, 2});
    CHECK(parse_ladder("1/2,1/4,1e-3") == std::vector<double>{0.5, 0.25, 0.001});
    for (const char* bad : {"", "1:2:3", "1:2:cubic:3", "0:1:geometric:3", "1:2:linear:0", "a,b"})
        CHECK_THROWS(parse_ladder(bad));
}

TEST_CASE("JSON emitter") {
    Json j;
    j["schema"] = 1;
    j["x"] = 0.1;
    j["list"] = {1, 2, 3};
    j["nan"] = std::nan("");
    j["s"] = "a\"b";
    const std::string s = dump_json(j);
    CHECK(s.find("\"x\": 0.10000000000000001") != std::string::npos);
    CHECK(s.find("\"list\": [1, 2, 3]") != std::string::npos);
    CHECK(s.find("\"nan\": null") != std::string::npos);
    CHECK(s.find("\"a\\\"b\"") != std::string::npos);
    CHECK(Json::parse(s)["x"].get<double>() == 0.1);
    const std::string t = format_table({"a", "long"}, {{"xxx", "1"}});
    CHECK(t == "a    long\n---  ----\nxxx  1\n");
}

TEST_CASE("oracle subcommands") {
    Run r = run({"oracle", "rotation", "--alpha", "1/3", "--eps", "0.001", "--json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["result"]["r"] == "3");
    CHECK(j["manifest"]["command"] == "oracle rotation");
    r = run({"oracle", "doubling", "--eps", "0.1", "--delta", "0.2", "--json"});
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["result"]["r"] == 4);
    r = run({"oracle", "cf", "--alpha", "pi-3", "--terms", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("15/106") != std::string::npos);
    r = run({"oracle", "odometer", "--eps", "0.1", "--json"});
    CHECK(Json::parse(r.out)["result"]["k"] == 8);
    r = run({"oracle", "subshift", "--matrix", "11;10", "--json"});
    j = Json::parse(r.out);
    CHECK(j["result"]["primitivity_exponent"] == 2);
}

TEST_CASE("exit codes and hints") {
    Run r = run({"structure", "--bogus"});
    CHECK(r.code == 2);
    r = run({});
    CHECK(r.code == 2);
    r = run({"frobnicate"});
    CHECK(r.code == 2);
    r = run({"recurrence", "--system", "doubling", "--eps", "1e-6"});
    CHECK(r.code == 3);
    CHECK(r.err.find("hint:") != std::string::npos);
    r = run({"oracle", "cf", "--alpha", "0.61803", "--terms", "40"});
    CHECK(r.code == 4);
    CHECK(r.err.find("hint:") != std::string::npos);
    r = run({"oracle", "rotation", "--alpha", "3/2", "--eps", "0.1"});
    CHECK(r.code == 2);
    r = run({"mixing", "--graph", "/nonexistent/g.adj", "--cover", "/nonexistent/c.cov", "--delta", "0.1"});
    CHECK(r.code == 1);
    r = run({"reproduce", "no-such-scenario"});
    CHECK(r.code == 2);
    r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("reproduce") != std::string::npos);
}

TEST_CASE("build, analyze and reload a graph") {
    TempDir tmp;
    Run r = run({"build-graph", "--system", "two-circle", "--param", "gap=0.25", "--cells", "64", "--eps", "0.1", "--out",
                 tmp / "g.adj", "--cover-out", tmp / "c.cov"});
    REQUIRE(r.code == 0);
    r = run({"structure", "--graph", tmp / "g.adj", "--json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["result"]["k"] == 2);
    CHECK(j["result"]["transitive"] == true);
    r = run({"recurrence", "--graph", tmp / "g.adj", "--json"});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["result"]["r_max"].get<int>() % 2 == 0);
    r = run({"mixing", "--graph", tmp / "g.adj", "--cover", tmp / "c.cov", "--delta", "0.2", "--json"});
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["result"]["diverged"] == true);
    CHECK(j["result"]["period"] == 2);
    r = run({"mixing", "--graph", tmp / "g.adj", "--delta", "0.2"});
    CHECK(r.code == 2);
    r = run({"build-graph", "--system", "doubling", "--eps", "0.05", "--out", tmp / "d.bin"});
    REQUIRE(r.code == 0);
    r = run({"structure", "--graph", tmp / "d.bin", "--json"});
    CHECK(Json::parse(r.out)["result"]["k"] == 1);
}

TEST_CASE("config files") {
    TempDir tmp;
    std::ofstream(tmp / "torus.cfg") << "# two rotations\nsystem = product\na.system = rotation\na.alpha = 1/3\n"
                                        "b.system = rotation\nb.alpha = 1/2\n";
    Run r = run({"recurrence", "--config", tmp / "torus.cfg", "--eps", "0.005", "--cells", "2304", "--json"});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["result"]["r_max"] == 6);
}

TEST_CASE("structure ladder and entropy grid") {
    TempDir tmp;
    Run r = run({"structure", "--system", "odometer", "--param", "L=8", "--eps-ladder", "0.5:0.015625:geometric:6",
                 "--out", tmp / "ladder.json"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("adding-machine-evidence(J=(2,2,2,2,2,2))") != std::string::npos);
    const Json j = Json::parse(slurp(tmp / "ladder.json"));
    CHECK(j["result"]["rungs"][5]["k"] == 64);
    for (const char* key : {"eps", "k", "transitive", "cells", "mode", "eps_lo", "eps_hi"})
        CHECK(j["result"]["rungs"][0].contains(key));
    r = run({"entropy", "--system", "doubling", "--delta-ladder", "0.1:0.001:geometric:3", "--eps-ladder", "1/1024",
             "--cells", "4096", "--mode", "inner", "--csv", tmp / "h.csv", "--path-growth"});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(tmp / "h.csv");
    CHECK(csv.rfind("delta,eps,m,h_bound\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("equal manifests give byte-identical reports") {
    TempDir tmp;
    const std::vector<std::string> base{"recurrence", "--system", "rotation", "--param", "alpha=golden", "--eps", "0.01",
                                        "--sample", "100", "--seed", "5"};
    auto with = [&](std::vector<std::string> extra) {
        auto a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        return a;
    };
    REQUIRE(run(with({"--out", tmp / "a.json", "--jobs", "1"})).code == 0);
    REQUIRE(run(with({"--out", tmp / "b.json", "--jobs", "4"})).code == 0);
    CHECK(slurp(tmp / "a.json") == slurp(tmp / "b.json"));
    CHECK(slurp(tmp / "a.json").find("wall_seconds") == std::string::npos);
    REQUIRE(run(with({"--out", tmp / "c.json", "--timings"})).code == 0);
    CHECK(slurp(tmp / "c.json").find("wall_seconds") != std::string::npos);
    const Json j = Json::parse(slurp(tmp / "a.json"));
    CHECK(j["manifest"]["seed"] == 5);
    CHECK(j["result"]["r_max_is_lower_bound"] == true);
}

TEST_CASE("reproduce scenarios print oracle, estimate and verdict") {
    Run r = run({"reproduce", "doubling-r", "--eps", "0.1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    r = run({"reproduce", "doubling-r", "--eps", "0.1", "--json"});
    const Json j = Json::parse(r.out);
    CHECK(j["result"]["rows"][0]["oracle"] == 4);
    CHECK(j["result"]["verdict"] == "PASS");
    r = run({"reproduce", "odometer-ladder"});
    CHECK(r.code == 0);
    CHECK(r.out.find("adding-machine-evidence") != std::string::npos);
}
