#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "magstrip/commands.hpp"
#include "magstrip/config.hpp"
#include "magstrip/errors.hpp"
#include "magstrip/verify.hpp"

using namespace magstrip;

namespace {

struct Flags {
  std::string config_path;
  std::string out_dir;
  std::string ladder;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string level = "fast";
  std::vector<int> criteria;
  bool probe = false;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg = f.config_path.empty() ? parse_run_config(nlohmann::json::object()) : load_run_config(f.config_path);
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  if (!f.ladder.empty()) cfg.ladder = parse_ladder_spec(f.ladder);
  if (f.tol) {
    if (!(*f.tol > 0.0)) throw ConfigError("--tol must be positive");
    cfg.tol = *f.tol;
  }
  if (f.seed) cfg.seed = *f.seed;
  return cfg;
}

void report_error(const std::exception& e, int code, const std::string& out_dir) {
  nlohmann::json j = {{"error", e.what()}, {"exit_code", code}};
  if (const auto* se = dynamic_cast<const SolverError*>(&e)) {
    j["residual"] = se->residual();
    j["iterations"] = se->iterations();
  }
  std::cerr << j.dump() << '\n';
  if (!out_dir.empty()) {
    try {
      std::filesystem::create_directories(out_dir);
      write_json((std::filesystem::path(out_dir) / "error.json").string(), j);
    } catch (const std::exception&) {
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magstrip: magnetic Schroedinger operator in a strip with a Neumann window"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "JSON run configuration");
    sub->add_option("--out", f.out_dir, "output directory");
    sub->add_option("--ladder", f.ladder, "grid ladder, e.g. \"L=10,20,40;h=0.05,0.025\"");
    sub->add_option("--tol", f.tol, "eigensolver residual tolerance");
    sub->add_option("--seed", f.seed, "seed of the eigensolver start vectors");
  };
  auto* bounds = app.add_subcommand("bounds", "Hardy constants and critical window length");
  auto* spectrum = app.add_subcommand("spectrum", "lowest eigenpairs of the 2-D operator");
  auto* onedim = app.add_subcommand("onedim", "reduced 1-D operator and window inequality");
  auto* sweep = app.add_subcommand("sweep", "PRESENT/NOT_FOUND map over window length and field strength");
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  for (auto* s : {bounds, spectrum, onedim, sweep, verify}) common(s);
  spectrum->add_flag("--probe", f.probe, "also run the discrete-spectrum probe over the ladder");
  verify->add_option("--level", f.level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--criteria", f.criteria, "subset of criteria (1-9)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::string out_dir = f.out_dir;
  try {
    if (verify->parsed()) {
      VerifyOptions opt;
      opt.level = verify_level_from_string(f.level);
      if (f.tol) opt.tol = *f.tol;
      if (f.seed) opt.seed = *f.seed;
      opt.only = f.criteria;
      for (int id : opt.only)
        if (id < 1 || id > kCriterionCount) throw ConfigError("criteria must be in 1.." + std::to_string(kCriterionCount));
      return cmd_verify(opt, out_dir.empty() ? "out" : out_dir, std::cout);
    }
    const RunConfig cfg = resolve(f);
    out_dir = cfg.out_dir;
    if (bounds->parsed()) return cmd_bounds(cfg, std::cout);
    if (spectrum->parsed()) return cmd_spectrum(cfg, f.probe, std::cout);
    if (onedim->parsed()) return cmd_onedim(cfg, std::cout);
    if (sweep->parsed()) return cmd_sweep(cfg, std::cout);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    report_error(e, code, out_dir);
    return code;
  }
  return kExitOk;
}
