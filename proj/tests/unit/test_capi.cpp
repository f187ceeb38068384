#include "arithdyn/arithdyn.h"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name)
{
    auto dir = fs::temp_directory_path() / ("arithdyn_capi_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string &args)
{
    const std::string cmd = std::string(ARITHDYN_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("map handles")
{
    ad_map *m = nullptr;
    REQUIRE(ad_map_from_json(R"({"dimension": 2, "components": ["x1^3 + x2", "x2^2 + 1"]})", &m) == AD_OK);
    CHECK(ad_map_dimension(m) == 2);

    uint64_t deg[4];
    CHECK(ad_map_degree_matrix(m, deg, 4) == AD_OK);
    CHECK(deg[0] == 3);
    CHECK(deg[1] == 0);
    CHECK(deg[2] == 1);
    CHECK(deg[3] == 2);
    CHECK(ad_map_degree_matrix(m, deg, 3) == AD_INVALID_ARGUMENT);

    uint64_t delta = 0;
    CHECK(ad_map_dynamical_degree(m, &delta) == AD_OK);
    CHECK(delta == 3);

    size_t needed = 0;
    CHECK(ad_map_component_text(m, 1, nullptr, 0, &needed) == AD_OK);
    std::string buf(needed, '\0');
    CHECK(ad_map_component_text(m, 1, buf.data(), buf.size(), &needed) == AD_OK);
    CHECK(std::string(buf.c_str()) == "x1^3 + x2");
    CHECK(ad_map_component_text(m, 3, nullptr, 0, &needed) == AD_INVALID_ARGUMENT);
    ad_map_free(m);

    const char *comps[] = {"x1*x2 + 1", "x2^2"};
    REQUIRE(ad_map_from_components(2, comps, &m) == AD_OK);
    CHECK(ad_map_dynamical_degree(m, &delta) == AD_OK);
    CHECK(delta == 2);
    ad_map_free(m);
    ad_map_free(nullptr);
}

TEST_CASE("errors carry structured diagnostics")
{
    ad_map *m = nullptr;
    const char *bad[] = {"x2", "x2^2"};
    CHECK(ad_map_from_components(2, bad, &m) == AD_CONFIG_ERROR);
    CHECK(m == nullptr);
    const auto d = nlohmann::json::parse(ad_last_diagnostic());
    CHECK(d["error"] == "NotDominant");
    CHECK(d["component"] == 1);
    CHECK(std::string(ad_last_error()).find("f1") != std::string::npos);

    CHECK(ad_map_from_json("{", &m) == AD_CONFIG_ERROR);
    CHECK(ad_map_from_json(nullptr, &m) == AD_INVALID_ARGUMENT);
    const char *not_tri[] = {"x1 + x2", "x1^2"};
    CHECK(ad_map_from_components(2, not_tri, &m) == AD_CONFIG_ERROR);
    CHECK(nlohmann::json::parse(ad_last_diagnostic())["error"] == "NotTriangular");
}

TEST_CASE("experiment runs")
{
    const auto dir = scratch("run");
    std::ofstream(dir / "cfg.json")
        << R"({"map": {"dimension": 2, "components": ["x1^3 + x2", "x2^2 + 1"]}, "n_max": 4, "samples": 3})";
    const auto out = (dir / "out").string();
    CHECK(ad_run_experiment((dir / "cfg.json").c_str(), out.c_str(), 1, 42) == AD_OK);
    const auto summary = nlohmann::json::parse(ad_last_summary());
    CHECK(summary["seed"] == 42);
    CHECK(summary["all_passed"] == true);
    CHECK(fs::exists(dir / "out" / "summary.json"));

    CHECK(ad_run_experiment((dir / "missing.json").c_str(), nullptr, 0, 0) == AD_CONFIG_ERROR);

    std::ofstream(dir / "pts.csv") << "x1\n1\n2\n3\n";
    CHECK(ad_density((dir / "pts.csv").c_str(), 2, (dir / "dens").c_str()) == AD_OK);
    std::ofstream(dir / "dup.csv") << "x1\n1\n1\n";
    CHECK(ad_density((dir / "dup.csv").c_str(), 2, (dir / "dens2").c_str()) == AD_CONFIG_ERROR);
    CHECK(nlohmann::json::parse(ad_last_diagnostic())["error"] == "DuplicatePoints");

    std::ofstream(dir / "map.json") << R"({"dimension": 1, "components": ["x1^2 + 1"]})";
    CHECK(ad_degrees((dir / "map.json").c_str(), 5, (dir / "deg").c_str()) == AD_OK);
    CHECK(nlohmann::json::parse(ad_last_summary())["delta_exact"] == 2);
}

TEST_CASE("cli exit codes")
{
    const auto dir = scratch("cli");
    std::ofstream(dir / "good.json")
        << R"({"map": {"dimension": 2, "components": ["x1^3 + x2", "x2^2 + 1"]}, "n_max": 3, "samples": 2})";
    std::ofstream(dir / "bad.json") << R"({"map": {"dimension": 2, "components": ["x2", "x2^2"]}})";
    std::ofstream(dir / "tight.json")
        << R"({"map": {"dimension": 2, "components": ["x1^3 + x2", "x2^2 + 1"]}, "n_max": 8, "samples": 2,
              "limits": {"max_coefficient_bits": 200}})";
    std::ofstream(dir / "map.json") << R"({"dimension": 1, "components": ["x1^2"]})";
    std::ofstream(dir / "pts.csv") << "x1,x2\n0,0\n1,1\n2,4\n-1,1\n3,9\n5,25\n";

    const std::string out = " --out-dir " + (dir / "o").string();
    CHECK(run_cli(out + " run --config " + (dir / "good.json").string()) == 0);
    CHECK(run_cli(out + " run --config " + (dir / "bad.json").string()) == 4);
    CHECK(run_cli(out + " run --config " + (dir / "tight.json").string()) == 3);
    CHECK(run_cli(out + " degrees --map " + (dir / "map.json").string() + " --nmax 4") == 0);
    // Six points on a parabola share a conic: the check fails.
    CHECK(run_cli(out + " density --points " + (dir / "pts.csv").string() + " --degree 2") == 2);
    CHECK(run_cli(out + " --seed 3 run --config " + (dir / "good.json").string()) == 0);
    CHECK(run_cli("run") == 4);
}
