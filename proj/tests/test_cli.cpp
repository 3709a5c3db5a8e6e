#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ovp/runner.hpp"

using namespace ovp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ovp_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int counter() {
        static int c = 0;
        return ++c;
    }
};

const char* kLineScenario = R"(
[problem]
a = 0
b = 1
A = 0
B = 1
L = v^2
L_v = 2*v
L_vv = 2
mu = 2
f = -10
g = 10
[solver]
n = 101
)";

Scenario line_scenario(const std::string& out_dir) {
    Scenario sc = parse_scenario_text(std::string(kLineScenario) + "\n[output]\ndir = " +
                                      out_dir + "\n");
    return sc;
}

}  // namespace

TEST_CASE("solve writes solution.csv, energy.txt and a manifest") {
    TempDir tmp;
    Scenario sc = line_scenario((tmp.path / "run").string());
    RunFlags flags;
    flags.command_line = "test solve";
    CHECK(run_on_scenario("solve", sc, flags) == 0);

    const std::string csv = slurp(tmp.path / "run" / "solution.csv");
    CHECK(csv.rfind("x,u,f,g,slope\n", 0) == 0);
    // straight-line solution: u column equals x at the last row
    CHECK(csv.find("1,1,-10,10,") != std::string::npos);
    const std::string energy = slurp(tmp.path / "run" / "energy.txt");
    CHECK(std::stod(energy) == doctest::Approx(1.0).epsilon(1e-9));  // J = 1
    const std::string manifest = slurp(tmp.path / "run" / "manifest.txt");
    CHECK(manifest.find("scenario_hash = ") != std::string::npos);
    CHECK(manifest.find("seed = 42") != std::string::npos);
}

TEST_CASE("outputs are deterministic for a fixed seed") {
    TempDir tmp;
    Scenario sc1 = line_scenario((tmp.path / "a").string());
    Scenario sc2 = line_scenario((tmp.path / "b").string());
    RunFlags flags;
    flags.command_line = "test determinism";
    CHECK(run_on_scenario("solve", sc1, flags) == 0);
    CHECK(run_on_scenario("solve", sc2, flags) == 0);
    CHECK(slurp(tmp.path / "a" / "solution.csv") == slurp(tmp.path / "b" / "solution.csv"));
    CHECK(slurp(tmp.path / "a" / "energy.txt") == slurp(tmp.path / "b" / "energy.txt"));
}

TEST_CASE("plot emits svg files") {
    TempDir tmp;
    Scenario sc = line_scenario((tmp.path / "p").string());
    RunFlags flags;
    CHECK(run_on_scenario("plot", sc, flags) == 0);
    const std::string svg = slurp(tmp.path / "p" / "solution.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(fs::exists(tmp.path / "p" / "pipeline.svg"));
}

TEST_CASE("sweep runs every point into its own subdirectory") {
    TempDir tmp;
    std::string text = std::string(kLineScenario) +
                       "\n[sweep]\naction = solve\nsolver.n = 11, 21, 31\n[output]\ndir = " +
                       (tmp.path / "sw").string() + "\n";
    Scenario sc = parse_scenario_text(text);
    RunFlags flags;
    flags.jobs = 2;
    CHECK(run_on_scenario("sweep", sc, flags) == 0);
    for (const char* sub : {"point_0000", "point_0001", "point_0002"})
        CHECK(fs::exists(tmp.path / "sw" / sub / "solution.csv"));
}

TEST_CASE("sweep output does not depend on the job count") {
    TempDir tmp;
    auto run_with_jobs = [&](const std::string& dir, int jobs) {
        std::string text = std::string(kLineScenario) +
                           "\n[sweep]\naction = solve\nsolver.n = 11, 21\n[output]\ndir = " +
                           (tmp.path / dir).string() + "\n";
        Scenario sc = parse_scenario_text(text);
        RunFlags flags;
        flags.jobs = jobs;
        REQUIRE(run_on_scenario("sweep", sc, flags) == 0);
    };
    run_with_jobs("j1", 1);
    run_with_jobs("j3", 3);
    for (const char* sub : {"point_0000", "point_0001"})
        CHECK(slurp(tmp.path / "j1" / sub / "solution.csv") ==
              slurp(tmp.path / "j3" / sub / "solution.csv"));
}

TEST_CASE("verify reports are byte-identical for a fixed seed") {
    TempDir tmp;
    std::string checks = R"(
[checks]
pairs_per_scale = 10
scales = 3
k_grid = 0, 1, 2
refinement_ladder = 51, 101, 201
)";
    auto scenario_for = [&](const std::string& dir) {
        return parse_scenario_text(std::string(kLineScenario) + checks +
                                   "[output]\ndir = " + (tmp.path / dir).string() + "\n");
    };
    RunFlags flags;
    REQUIRE(run_on_scenario("verify", scenario_for("v1"), flags) == 0);
    REQUIRE(run_on_scenario("verify", scenario_for("v2"), flags) == 0);
    CHECK(slurp(tmp.path / "v1" / "report.csv") == slurp(tmp.path / "v2" / "report.csv"));
    CHECK(slurp(tmp.path / "v1" / "report.txt") == slurp(tmp.path / "v2" / "report.txt"));
}

TEST_CASE("solver non-convergence maps to exit code 3") {
    TempDir tmp;
    // one iteration on an active-obstacle problem cannot converge
    std::string text = R"(
[problem]
a = 0
b = 1
A = 0
B = 0
L = v^2
L_v = 2*v
L_vv = 2
mu = 2
f = 0.5 - 4*(x - 0.5)^2
g = 10
[solver]
n = 201
max_iter = 1
tol = 1e-14
)";
    Scenario sc = parse_scenario_text(text + "[output]\ndir = " +
                                      (tmp.path / "nc").string() + "\n");
    RunFlags flags;
    CHECK(run_on_scenario("solve", sc, flags) == 3);
}

TEST_CASE("bad subcommand and parse failures map to exit codes") {
    TempDir tmp;
    Scenario sc = line_scenario((tmp.path / "x").string());
    RunFlags flags;
    CHECK(run_on_scenario("nonsense", sc, flags) == 1);
    // missing file
    CHECK(run_subcommand("solve", (tmp.path / "missing.ini").string(), flags) == 2);
    // invalid scenario content
    const fs::path bad = tmp.path / "bad.ini";
    std::ofstream(bad) << "[problem]\na = 0\nb = 1\nA = 0\nB = 0\nL = v^2 +\nmu = 2\nf "
                          "= -1\ng = 1\n";
    CHECK(run_subcommand("solve", bad.string(), flags) == 2);
}
