#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "laas/workload.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("laas-cli-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int run(std::initializer_list<std::string> args) {
    std::vector<std::string> v{"laas"};
    v.insert(v.end(), args);
    std::vector<char*> argv;
    for (auto& s : v) argv.push_back(s.data());
    return laas::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen, sim and check round trip") {
    TempDir d;
    CHECK(run({"gen", "-n", "300", "-s", "4", "--cloud", "64", "-r", "5:50", "--seed", "3", "-o", d / "t.csv"}) == 0);
    auto trace = laas::read_trace_file(d / "t.csv");
    CHECK(trace.size() == 300);
    CHECK(run({"gen", "-n", "300", "-s", "4", "--cloud", "64", "-r", "5:50", "--seed", "3", "-o", d / "t2.csv"}) == 0);
    CHECK(slurp(d / "t.csv") == slurp(d / "t2.csv"));

    CHECK(run({"sim", "-m", "4,4,4", "-w", "1,4,4", "-c", d / "t.csv", "--log", d / "isol.log", "--csv", d / "r.csv",
               "--verify"}) == 0);
    CHECK(slurp(d / "isol.log").rfind("# alg laas\n", 0) == 0);
    CHECK(slurp(d / "r.csv").rfind("algorithm,obtained,placed,", 0) == 0);
    CHECK(run({"check", "-n", "4", "-k", "4", "-1", "16", "-2", "16", "-3", "16", "-l", d / "isol.log"}) == 0);

    CHECK(run({"sim", "-m", "4,4,4", "-w", "1,4,4", "-c", d / "t.csv", "--alg", "unconstrained", "--log",
               d / "u.log"}) == 0);
    CHECK(run({"check", "-n", "4", "-k", "4", "-1", "16", "-2", "16", "-3", "16", "-l", d / "u.log"}) == 0);
}

TEST_CASE("checker rejects a forged log") {
    TempDir d;
    std::ofstream(d / "bad.log") << "# alg laas\nADD 1 0 H:0,4 L1:0.0 L2:\n";
    CHECK(run({"check", "-n", "4", "-k", "4", "-1", "4", "-2", "4", "-3", "1", "-l", d / "bad.log"}) == 2);
    CHECK(run({"check", "-n", "4", "-k", "4", "-1", "4", "-2", "4", "-3", "1", "-l", d / "missing.log"}) == 2);
}

TEST_CASE("exit codes") {
    TempDir d;
    CHECK(run({}) == 1);
    CHECK(run({"frobnicate"}) == 1);
    CHECK(run({"sim", "-m", "4,4", "-w", "1,4"}) == 1);
    CHECK(run({"namemap", "-m", "4,0", "-w", "1,4"}) == 1);
    CHECK(run({"gen", "-n", "5", "-r", "9:2", "--seed", "1"}) == 1);
    CHECK(run({"gen", "-n", "5", "--dist", "poisson", "--seed", "1"}) == 1);
    CHECK(run({"sim", "-m", "4,4", "-w", "1,4", "-c", d / "none.csv", "--log", d / "l"}) == 2);

    // A request larger than the cloud stalls the simulation.
    std::ofstream(d / "big.csv") << "1,2,0,10\n2,99,0,10\n";
    CHECK(run({"sim", "-m", "4,4", "-w", "1,4", "-c", d / "big.csv", "--log", d / "l"}) == 2);
    CHECK(run({"sim", "-m", "4,4", "-w", "1,4", "-c", d / "big.csv", "--alg", "bogus", "--log", d / "l"}) == 1);
}

TEST_CASE("namemap output loads back") {
    TempDir d;
    CHECK(run({"namemap", "-m", "4,8,1", "-w", "1,4,1", "-o", d / "map.csv"}) == 0);
    CHECK(slurp(d / "map.csv") == slurp(LAAS_SOURCE_DIR "/data/pgft_m4_8_w1_4.csv"));
    std::ofstream(d / "t.csv") << "1,3,0,10\n";
    CHECK(run({"sim", "-m", "4,8,1", "-w", "1,4,1", "-c", d / "t.csv", "--name-map", d / "map.csv", "--log",
               d / "l"}) == 0);
    CHECK(run({"sim", "-m", "4,4", "-w", "1,4", "-c", d / "t.csv", "--name-map", d / "map.csv", "--log", d / "l"}) !=
          0);
}

TEST_CASE("sweep and latency commands") {
    TempDir d;
    CHECK(run({"sweep", "-m", "4,4", "-w", "1,4", "--means", "2,4", "--algs", "laas,simple", "--seeds", "1,2",
               "--count", "100", "-o", d / "s.csv"}) == 0);
    std::istringstream in(slurp(d / "s.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 1 + 2 * 2 * 2);
    std::ofstream(d / "t.csv") << "1,3,0,10\n2,9,0,10\n";
    CHECK(run({"latency", "-m", "4,4", "-w", "1,4", "-c", d / "t.csv"}) == 0);
}

TEST_CASE("test mode demands explicit seeds") {
    TempDir d;
    ::setenv("LAAS_TEST_MODE", "1", 1);
    CHECK(run({"gen", "-n", "5", "-o", d / "t.csv"}) == 1);
    CHECK(run({"sweep", "-m", "4,4", "-w", "1,4", "--means", "2", "--count", "10", "-o", d / "s.csv"}) == 1);
    CHECK(run({"gen", "-n", "5", "--seed", "4", "-o", d / "t.csv"}) == 0);
    // The seed may also precede the subcommand.
    CHECK(run({"--seed", "4", "gen", "-n", "5", "-o", d / "t2.csv"}) == 0);
    CHECK(slurp(d / "t.csv") == slurp(d / "t2.csv"));
    ::unsetenv("LAAS_TEST_MODE");
}

}
