#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "magstrip/config.hpp"
#include "magstrip/verify.hpp"

namespace magstrip {

/// Process exit codes.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // verification failure
constexpr int kExitConfig = 2;   // config or precondition error
constexpr int kExitSolver = 3;   // solver error

/// Maps a library exception onto an exit code.
int exit_code_for(const std::exception& e);

/// Wraps a result with the resolved config and hashes:
/// {command, config, config_hash, seed, result, content_hash}.
nlohmann::json make_envelope(const std::string& command, const RunConfig& cfg, const nlohmann::json& result);

/// Writes `body` (CSV) prefixed by "# config: ..." and "# content_hash: ..."
/// comment lines.
void write_csv_with_header(const std::string& path, const RunConfig& cfg, const std::string& body);

void write_json(const std::string& path, const nlohmann::json& j);

/// Worker count for sweeps: MAGSTRIP_WORKERS, else hardware concurrency.
int worker_count();

/// Each command writes its files into cfg.out_dir and returns an exit code.
int cmd_bounds(const RunConfig& cfg, std::ostream& log);
int cmd_spectrum(const RunConfig& cfg, bool probe, std::ostream& log);
int cmd_onedim(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const VerifyOptions& opt, const std::string& out_dir, std::ostream& log);

struct SweepRow {
  int index = 0;
  double l = 0.0;
  double value = 0.0;
  std::string verdict;
  double lowest = 0.0;
  double critical_length = 0.0;
  std::string certified;
  std::string consistency;
  std::string error;
};

/// Evaluates all rows of the sweep (in parallel) and returns them in order.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, int workers);

/// Copy of the config's field with the sweep parameter set to `value`.
MagneticField scaled_field(const RunConfig& cfg, double value);

}  // namespace magstrip
