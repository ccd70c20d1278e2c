#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lanemden/cli.hpp"

namespace fs = std::filesystem;
using lanemden::cli::run;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "lanemden_cli_tests") {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("solve writes solution and report, exit 0") {
    TempDir tmp;
    const auto prefix = tmp.file("run1");
    const int code = run({"solve", "--p", "1", "--q", "8", "--domain", "disk", "--grid", "128",
                          "--out", prefix});
    CHECK(code == 0);
    CHECK(fs::exists(prefix + ".solution.json"));
    CHECK(fs::exists(prefix + ".report.json"));

    const auto loaded = lanemden::load_solution(prefix + ".solution.json");
    const auto* s = std::get_if<lanemden::SolutionPair<lanemden::RadialGrid>>(&loaded);
    REQUIRE(s != nullptr);
    CHECK(s->converged);
    CHECK(s->exponents.q() == 8.0);

    SECTION("report carries the lower bound flag for p=1") {
        std::ifstream in(prefix + ".report.json");
        nlohmann::json j;
        in >> j;
        CHECK(j.at("lower_bound_check").get<bool>());
        CHECK(j.at("schema") == "1");
        CHECK(j.at("provenance").get<std::string>().find("--q 8") != std::string::npos);
    }
}

TEST_CASE("invalid exponents exit 1 with a superlinearity message") {
    TempDir tmp;
    const int code = run({"solve", "--p", "1", "--q", "0.5", "--out", tmp.file("bad")});
    CHECK(code == 1);
}

TEST_CASE("usage errors exit 1") {
    CHECK(run({"solve", "--q", "2"}) == 1);       // missing --p
    CHECK(run({"nosuchcommand"}) == 1);
    CHECK(run({"sweep", "--mode", "fixed-p"}) == 1);  // no q list
}

TEST_CASE("non-convergence exits 2 and still writes the best iterate") {
    TempDir tmp;
    const auto prefix = tmp.file("stall");
    const int code = run({"solve", "--p", "3", "--q", "3", "--grid", "64", "--max-iter", "1",
                          "--out", prefix});
    CHECK(code == 2);
    CHECK(fs::exists(prefix + ".solution.json"));
    const auto loaded = lanemden::load_solution(prefix + ".solution.json");
    const auto* s = std::get_if<lanemden::SolutionPair<lanemden::RadialGrid>>(&loaded);
    REQUIRE(s != nullptr);
    CHECK(!s->converged);
    CHECK(s->u.max() > 0.0);
}

TEST_CASE("verify on a stored solution") {
    TempDir tmp;
    const auto prefix = tmp.file("vrf");
    REQUIRE(run({"solve", "--p", "2", "--q", "3", "--grid", "256", "--out", prefix}) == 0);

    CHECK(run({"verify", "--in", prefix + ".solution.json", "--checks",
               "pohozaev,energy,flux"}) == 0);
    CHECK(run({"verify", "--in", prefix + ".solution.json", "--checks", "brezis-merle",
               "--delta", "6.283185307"}) == 0);
    CHECK(run({"verify", "--in", prefix + ".solution.json"}) == 0);  // all checks
    CHECK(run({"verify", "--in", prefix + ".solution.json", "--checks", "nosuch"}) == 1);
}

TEST_CASE("verify can solve fresh from flags") {
    CHECK(run({"verify", "--p", "1", "--q", "4", "--grid", "128", "--checks",
               "comparison,jensen,lower-bound"}) == 0);
    CHECK(run({"verify", "--checks", "energy"}) == 1);  // neither --in nor exponents
}

TEST_CASE("sweep exports csv and json") {
    TempDir tmp;
    const auto prefix = tmp.file("sw");
    const int code = run({"sweep", "--mode", "fixed-p", "--p", "1", "--q-dyadic", "2:4",
                          "--domain", "disk", "--grid", "128", "--out", prefix});
    CHECK(code == 0);
    REQUIRE(fs::exists(prefix + ".csv"));
    REQUIRE(fs::exists(prefix + ".json"));

    std::ifstream in(prefix + ".csv");
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "p,q,M,N,energy,p_energy,L1_u,L1_v,L1_uq,L1_uq1,pohozaev_rel,energy_id_rel,converged");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);  // q = 4, 8, 16

    const auto table = lanemden::import_table_json(prefix + ".json");
    CHECK(table.rows.size() == 3);
    CHECK(table.rows[0].q == 4.0);
}

TEST_CASE("sweep accepts an explicit q list and rect domains solve") {
    TempDir tmp;
    CHECK(run({"sweep", "--mode", "diagonal", "--q-list", "2,3", "--domain", "disk", "--grid",
               "128", "--out", tmp.file("diag")}) == 0);
    CHECK(run({"solve", "--p", "2", "--q", "2", "--domain", "rect", "--a", "1", "--b", "1",
               "--grid", "24", "--out", tmp.file("rect")}) == 0);
}

TEST_CASE("eigen subcommand") {
    CHECK(run({"eigen", "--domain", "disk", "--grid", "256"}) == 0);
    CHECK(run({"eigen", "--domain", "rect", "--a", "1", "--b", "1", "--grid", "32"}) == 0);
}
