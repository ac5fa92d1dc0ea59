#include "vsg/run.hpp"

#include "vsg/config.hpp"
#include "vsg/defaults.hpp"
#include "vsg/outputs.hpp"

#include "doctest.h"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace vsg;
using nlohmann::json;

namespace {

const char* kMinimalConfig = R"({
  "schema_version": 1,
  "defaults": "paper",
  "cca": { "sags": [0.57] },
  "scenarios": [ { "name": "s", "sag": 0.7, "clearing": { "type": "never" } } ]
})";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("vsg_cli_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path write_config(const std::filesystem::path& dir, const std::string& text) {
    const auto path = dir / "config.json";
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("reference defaults reproduce the nameplate values exactly") {
    const ReferenceDefaults d;
    CHECK(d.vg_rms == 220.0);
    CHECK(d.f0 == 50.0);
    CHECK(d.vn == 311.0);
    CHECK(d.damping_d == 509.3);
    CHECK(d.inertia_h == 7.85);
    CHECK(d.droop_kq == 0.0003);
    CHECK(d.p_ref == 100e3);
    CHECK(d.q_ref == 0.0);
    CHECK(d.lg == 3e-3);
    CHECK(d.rg == 0.2);

    const VsgParams p = reference_vsg();
    CHECK(p.inertia_2h == 2.0 * 7.85);
    CHECK(p.omega0 == 2.0 * std::numbers::pi * 50.0);
    const GridParams g = reference_grid();
    CHECK(g.vg == 220.0 * std::numbers::sqrt2);
    CHECK(g.xg == 2.0 * std::numbers::pi * 50.0 * 3e-3);

    const RunConfig cfg = load_config(kMinimalConfig, {});
    CHECK(cfg.vsg.damping_d == 509.3);
    CHECK(cfg.grid.rg == 0.2);
}

TEST_CASE("validation errors name the offending field") {
    const std::string bad = R"({"defaults":"paper","integrator":{"step":-1e-4}})";
    CHECK_THROWS_WITH_AS(load_config(bad, {}), "integrator.step: must be > 0", ConfigError);

    const std::string bare_voltage = R"({"defaults":"paper","grid":{"voltage":311.0}})";
    CHECK_THROWS_AS(load_config(bare_voltage, {}), ConfigError);

    const std::string bad_sweep = R"({"defaults":"paper","sweep":{"parameter":"lf","values":[1]}})";
    CHECK_THROWS_AS(load_config(bad_sweep, {}), ConfigError);
}

TEST_CASE("voltage unit declarations") {
    const auto with_voltage = [](const std::string& v) {
        return load_config(R"({"defaults":"paper","grid":{"voltage":)" + v + "}}", {});
    };
    CHECK(with_voltage(R"({"value":220,"unit":"rms"})").grid.vg ==
          doctest::Approx(311.127).epsilon(1e-5));
    CHECK(with_voltage(R"({"value":311,"unit":"amplitude"})").grid.vg == 311.0);
    CHECK(with_voltage(R"({"value":0.5,"unit":"pu","base":311})").grid.vg == 155.5);
    CHECK_THROWS_AS(with_voltage(R"({"value":0.5,"unit":"pu"})"), ConfigError);
}

TEST_CASE("overrides apply before validation") {
    RunConfig cfg = load_config(kMinimalConfig, {"vsg.damping_d=1018.6", "output_dir=x"});
    CHECK(cfg.vsg.damping_d == 1018.6);
    CHECK(cfg.output_dir == "x");
    CHECK_THROWS_AS(load_config(kMinimalConfig, {"integrator.step=-1"}), ConfigError);
}

TEST_CASE("cli exit codes") {
    const auto dir = temp_dir("codes");
    const auto cfg = write_config(dir, kMinimalConfig);
    const std::string out = (dir / "out").string();

    CHECK(run({"equilibria", "--config", cfg.string(), "--out", out}) == 0);
    CHECK(run({"equilibria", "--sag", "0.5", "--config", cfg.string(), "--out", out}) == 0);
    CHECK(run({"doa", "--sag", "0.5", "--config", cfg.string(), "--out", out}) == 2);
    CHECK(run({"doa", "--config", cfg.string(), "--out", out}) == 0);

    const auto bad = write_config(temp_dir("bad"), R"({"defaults":"paper",
        "integrator":{"step":-1e-4}})");
    CHECK(run({"equilibria", "--config", bad.string()}) == 1);
    CHECK(run({"equilibria", "--config", (dir / "missing.json").string()}) == 1);
}

TEST_CASE("emitted json validates against the output schema") {
    const auto dir = temp_dir("schema");
    const auto cfg = write_config(dir, kMinimalConfig);
    const std::string out = (dir / "out").string();

    REQUIRE(run({"doa", "--config", cfg.string(), "--out", out}) == 0);
    REQUIRE(run({"equilibria", "--config", cfg.string(), "--out", out}) == 0);
    REQUIRE(run({"simulate", "--config", cfg.string(), "--out", out}) == 0);

    for (const char* name : {"doa.json", "equilibria.json", "simulation.json"}) {
        const json doc = json::parse(slurp(std::filesystem::path(out) / name));
        CHECK_NOTHROW(validate_output(doc));
    }
}

TEST_CASE("identical configs produce byte-identical outputs") {
    const auto dir = temp_dir("determinism");
    const auto cfg = write_config(dir, kMinimalConfig);
    const std::string out1 = (dir / "a").string();
    const std::string out2 = (dir / "b").string();

    REQUIRE(run({"doa", "--config", cfg.string(), "--out", out1}) == 0);
    REQUIRE(run({"doa", "--config", cfg.string(), "--out", out2}) == 0);
    REQUIRE(run({"cca", "--config", cfg.string(), "--out", out1}) == 0);
    REQUIRE(run({"cca", "--config", cfg.string(), "--out", out2}) == 0);

    for (const char* name : {"boundary.csv", "doa.json", "cca.json"}) {
        CHECK(slurp(std::filesystem::path(out1) / name) ==
              slurp(std::filesystem::path(out2) / name));
    }
}

TEST_CASE("sweep records missing equilibria as area zero and keeps going") {
    const auto dir = temp_dir("sweep");
    const auto cfg = write_config(dir, R"({
      "defaults": "paper",
      "sweep": { "parameter": "sag", "values": [1.0, 0.7, 0.5] }
    })");
    const std::string out = (dir / "out").string();
    REQUIRE(run({"sweep", "--config", cfg.string(), "--out", out}) == 0);

    const json doc = json::parse(slurp(std::filesystem::path(out) / "sweep.json"));
    CHECK_NOTHROW(validate_output(doc));
    REQUIRE(doc.at("points").size() == 3);
    CHECK(doc.at("points")[0].at("area").get<double>() >
          doc.at("points")[1].at("area").get<double>());
    CHECK(doc.at("points")[2].at("no_equilibrium") == true);
    CHECK(doc.at("points")[2].at("area") == 0.0);
}
