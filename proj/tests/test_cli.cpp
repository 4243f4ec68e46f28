#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "magstrip/commands.hpp"
#include "magstrip/config.hpp"
#include "magstrip/errors.hpp"
#include "magstrip/hash.hpp"

using namespace magstrip;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("magstrip_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig config_in(const json& j, const fs::path& dir) {
  RunConfig c = parse_run_config(j);
  c.out_dir = dir.string();
  return c;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(MAGSTRIP_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const double kHalfPi = 1.5707963267948966;

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_run_config(json::object()));
  CHECK_THROWS_AS(parse_run_config({{"geometri", {{"l", 0.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"geometry", {{"l", -0.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"geometry", {{"l", "wide"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"field", {{"kind", "dipole"}, {"p", {0, 1}}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"field", {{"kind", "uniform_disk"}, {"p", {0, 1}}, {"amplitude", 1.0}}}}),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"solver", {{"tol", 0.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"spectrum", {{"k", 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"sweep", {{"parameter", "width"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"gauge", {{"kind", "coulomb"}}}}), ConfigError);

  const auto c = parse_run_config(
      {{"geometry", {{"l", 0.4}, {"L", 15}}},
       {"field", json::array({{{"kind", "compact_bump"}, {"p", {2.0, 1.5}}, {"support_radius", 0.7}, {"flux", 0.3}},
                              {{"kind", "aharonov_bohm"}, {"p", {-3.0, 1.5}}, {"flux", 0.25}}})}});
  CHECK(c.geometry.window_l == 0.4);
  CHECK(c.geometry.truncation_L == 15.0);
  REQUIRE(c.field.components.size() == 2);
  CHECK(c.field.components[0].total_flux() == doctest::Approx(0.3));
  CHECK(c.field.components[1].kind == FieldKind::aharonov_bohm);
  // the resolved config round-trips
  const auto again = parse_run_config(to_json(c));
  CHECK(config_hash(again) == config_hash(c));
}

TEST_CASE("ladder spec") {
  const Ladder l = parse_ladder_spec("L=10,20;h=0.05,0.025;growth=1.1;hmax=0.4");
  CHECK(l.L == std::vector<double>{10, 20});
  CHECK(l.h == std::vector<double>{0.05, 0.025});
  CHECK(l.growth == 1.1);
  CHECK(l.h_max == 0.4);
  CHECK_THROWS_AS(parse_ladder_spec("L=10;h="), ConfigError);
  CHECK_THROWS_AS(parse_ladder_spec("L=ten;h=0.1"), ConfigError);
  CHECK_THROWS_AS(parse_ladder_spec("L=10;h=0.1;depth=3"), ConfigError);
  CHECK_THROWS_AS(parse_ladder_spec("L=-1;h=0.1"), ConfigError);
}

TEST_CASE("hashes and seeds") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  const auto a = parse_run_config({{"geometry", {{"l", 0.4}}}});
  const auto b = parse_run_config({{"geometry", {{"l", 0.5}}}});
  CHECK(config_hash(a) != config_hash(b));
  CHECK(resolved_seed(a) == resolved_seed(parse_run_config({{"geometry", {{"l", 0.4}}}})));
  CHECK(resolved_seed(parse_run_config({{"solver", {{"seed", 42}}}})) == 42);
  // the output directory does not change the derived seed
  RunConfig moved = a;
  moved.out_dir = "elsewhere";
  CHECK(resolved_seed(moved) == resolved_seed(a));
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("x")) == kExitConfig);
  CHECK(exit_code_for(PreconditionError("x")) == kExitConfig);
  CHECK(exit_code_for(GeometryError("x")) == kExitConfig);
  CHECK(exit_code_for(SolverError("x", 1.0, 3)) == kExitSolver);
}

TEST_CASE("bounds command") {
  const fs::path dir = scratch_dir("bounds");
  std::ostringstream log;
  SUBCASE("zero field") {
    REQUIRE(cmd_bounds(config_in({{"geometry", {{"l", 0.5}}}}, dir), log) == kExitOk);
    const json j = read_json(dir / "bounds.json");
    CHECK(j["command"] == "bounds");
    CHECK(j["result"]["critical_length"] == 0.0);
    CHECK(j["result"]["verdict_absence"] == "not_certified");
    CHECK(j["content_hash"] == hex64(fnv1a64(j["result"].dump())));
    CHECK(j.contains("config"));
    CHECK(j.contains("config_hash"));
  }
  SUBCASE("AB half flux") {
    REQUIRE(cmd_bounds(config_in({{"geometry", {{"l", 0.0}}},
                                  {"field", {{"kind", "aharonov_bohm"}, {"p", {-2.0, kHalfPi}}, {"flux", 0.5}}},
                                  {"bounds", {{"ab_radius", 1.0}}}},
                                 dir),
                       log) == kExitOk);
    const json r = read_json(dir / "bounds.json")["result"];
    CHECK(r["strict_inequality"] == true);
    CHECK(r.contains("kappa"));
    CHECK(r["critical_length"].get<double>() > 0.0);
    CHECK(r["ab"]["hardy"]["R"] == 1.0);
  }
  SUBCASE("two balls") {
    REQUIRE(cmd_bounds(config_in({{"geometry", {{"l", 0.0}}},
                                  {"field", json::array({{{"kind", "compact_bump"},
                                                          {"p", {-3.0, 1.2}},
                                                          {"support_radius", 0.7},
                                                          {"flux", 0.4}},
                                                         {{"kind", "uniform_disk"},
                                                          {"p", {3.5, 1.9}},
                                                          {"support_radius", 0.5},
                                                          {"amplitude", 2.0}}})}},
                                 dir),
                       log) == kExitOk);
    const json r = read_json(dir / "bounds.json")["result"];
    CHECK(r["kappa_minus"].get<double>() > 0.0);
    CHECK(r["kappa_plus"].get<double>() > 0.0);
    CHECK(r["minus"].contains("kappa_branch"));
    CHECK(r["plus"].contains("kappa_branch"));
    CHECK(r["critical_length"].get<double>() ==
          doctest::Approx((r["kappa_minus"].get<double>() + r["kappa_plus"].get<double>()) / 12.0));
  }
  SUBCASE("precondition violation") {
    const auto cfg = config_in({{"geometry", {{"l", 2.5}}},
                                {"field", {{"kind", "aharonov_bohm"}, {"p", {-2.0, kHalfPi}}, {"flux", 0.5}}}},
                               dir);
    CHECK_THROWS_AS(cmd_bounds(cfg, log), PreconditionError);
  }
}

TEST_CASE("spectrum command") {
  const fs::path dir = scratch_dir("spectrum");
  std::ostringstream log;
  const json cfg = {{"geometry", {{"l", 0.0}, {"L", 6.0}}},
                    {"spectrum", {{"k", 2}, {"h", 0.1}, {"growth", 1.0}, {"eigenvector_csv", true}}},
                    {"solver", {{"seed", 5}}}};
  REQUIRE(cmd_spectrum(config_in(cfg, dir), false, log) == kExitOk);
  const json j = read_json(dir / "spectrum.json");
  const double lam = j["result"]["eigenvalues"][0];
  CHECK(lam - 1.0 == doctest::Approx(std::pow(3.141592653589793 / 12.0, 2)).epsilon(5e-3));
  CHECK(j["result"]["below_threshold"].empty());
  CHECK(j["seed"] == 5);
  const std::string csv = read_text(dir / "eigenvector_0.csv");
  CHECK(csv.rfind("# config: ", 0) == 0);
  CHECK(csv.find("# content_hash: ") != std::string::npos);
  CHECK(csv.find("x1,x2,re,im,abs") != std::string::npos);

  // rerun: bit-identical result
  const fs::path dir2 = scratch_dir("spectrum2");
  REQUIRE(cmd_spectrum(config_in(cfg, dir2), false, log) == kExitOk);
  const json j2 = read_json(dir2 / "spectrum.json");
  CHECK(j2["content_hash"] == j["content_hash"]);
  CHECK(j2["result"]["eigenvalues"] == j["result"]["eigenvalues"]);
}

TEST_CASE("spectrum with probe finds the bound state of a wide window") {
  const fs::path dir = scratch_dir("probe");
  std::ostringstream log;
  const json cfg = {{"geometry", {{"l", 1.0}, {"L", 10.0}}},
                    {"spectrum", {{"k", 1}, {"h", 0.1}}},
                    {"ladder", {{"L", {10.0, 20.0}}, {"h", {0.1}}}}};
  REQUIRE(cmd_spectrum(config_in(cfg, dir), true, log) == kExitOk);
  const json r = read_json(dir / "spectrum.json")["result"];
  CHECK(r["probe"]["verdict"] == "PRESENT");
  CHECK_FALSE(r["below_threshold"].empty());
}

TEST_CASE("onedim command") {
  const fs::path dir = scratch_dir("onedim");
  std::ostringstream log;
  const json cfg = {{"geometry", {{"l", 0.5}}}, {"onedim", {{"rho", "zero"}, {"richardson_levels", 3}}}};
  REQUIRE(cmd_onedim(config_in(cfg, dir), log) == kExitOk);
  const json r = read_json(dir / "onedim.json")["result"];
  CHECK(r["certified_sign"] == "negative");
  CHECK(r["richardson"]["levels"].size() == 3);
  CHECK(fs::exists(dir / "onedim_minimizer.csv"));
}

TEST_CASE("sweep: zero-field column and AB conjugation symmetry") {
  const fs::path dir = scratch_dir("sweep");
  std::ostringstream log;
  SUBCASE("zero field binds for every l > 0") {
    const json cfg = {{"ladder", {{"L", {40.0}}, {"h", {0.1}}}}, {"sweep", {{"l", {0.5, 1.0, 2.0}}}}};
    const auto rows = run_sweep(config_in(cfg, dir), 2);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(r.verdict == "PRESENT");
      CHECK(r.consistency == "ok");
    }
  }
  SUBCASE("flux sweep") {
    const json cfg = {{"field", {{"kind", "aharonov_bohm"}, {"p", {-2.0, kHalfPi}}, {"flux", 0.5}}},
                      {"ladder", {{"L", {10.0}}, {"h", {0.1}}}},
                      {"sweep", {{"l", {0.3}}, {"parameter", "flux"}, {"values", {0.2, 0.4, 0.6, 0.8}}}}};
    REQUIRE(cmd_sweep(config_in(cfg, dir), log) == kExitOk);
    const auto rows = run_sweep(config_in(cfg, dir), 1);
    REQUIRE(rows.size() == 4);
    for (int i = 0; i < 2; ++i) {
      CHECK(rows[i].verdict == rows[3 - i].verdict);
      CHECK(std::abs(rows[i].lowest - rows[3 - i].lowest) < 1e-7);
      CHECK(rows[i].consistency == "ok");
    }
    const std::string csv = read_text(dir / "sweep.csv");
    CHECK(csv.find("index,l,flux,verdict,lowest_eigenvalue,critical_length,certified,consistency,error") !=
          std::string::npos);
    const json s = read_json(dir / "sweep.json");
    CHECK(s["result"]["rows"] == 4);
    CHECK(s["result"]["violations"] == 0);
  }
  SUBCASE("row errors are recorded per row") {
    const json cfg = {{"field", {{"kind", "compact_bump"}, {"p", {0.0, kHalfPi}}, {"support_radius", 0.5},
                                 {"amplitude", 1.0}}},
                      {"ladder", {{"L", {6.0}}, {"h", {0.1}}}},
                      {"gauge", {{"kind", "zero"}}},
                      {"sweep", {{"l", {0.3}}, {"values", {0.5, 1.0}}}}};
    const auto rows = run_sweep(config_in(cfg, dir), 1);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
      CHECK(r.consistency == "error");
      CHECK(r.verdict == "ERROR");
      CHECK_FALSE(r.error.empty());
    }
  }
}

TEST_CASE("command-line front end") {
  const fs::path dir = scratch_dir("cli");
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == kExitConfig);
  CHECK(run_cli("bounds --config " + (dir / "missing.json").string()) == kExitConfig);
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{\"geometry\": {\"l\": 0.5, \"width\": 3}}";
  }
  CHECK(run_cli("bounds --config " + (dir / "bad.json").string() + " --out " + (dir / "o1").string()) == kExitConfig);
  CHECK(fs::exists(dir / "o1" / "error.json"));
  {
    std::ofstream good(dir / "good.json");
    good << "{\"geometry\": {\"l\": 0.0, \"L\": 6}, \"spectrum\": {\"k\": 1, \"h\": 0.1}}";
  }
  CHECK(run_cli("bounds --config " + (dir / "good.json").string() + " --out " + (dir / "o2").string()) == kExitOk);
  CHECK(fs::exists(dir / "o2" / "bounds.json"));
  CHECK(run_cli("spectrum --config " + (dir / "good.json").string() + " --out " + (dir / "o3").string() +
                " --seed 3 --tol 1e-9") == kExitOk);
  CHECK(read_json(dir / "o3" / "spectrum.json")["seed"] == 3);
  CHECK(run_cli("spectrum --config " + (dir / "good.json").string() + " --out " + (dir / "o4").string() +
                " --ladder 'L=oops'") == kExitConfig);
  CHECK(run_cli("verify --criteria 8 --out " + (dir / "v").string()) == kExitOk);
  const json v = read_json(dir / "v" / "verify.json");
  CHECK(v["result"]["passed"] == true);
  CHECK(run_cli("verify --criteria 12 --out " + (dir / "v2").string()) == kExitConfig);
}
