#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fchlog_cli/config.hpp"

namespace fchlog::cli {

enum ExitCode : int { kOk = 0, kConfigFailure = 1, kSolverFailure = 2, kCheckFailure = 3 };

struct Options {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = "out";
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

struct RunSummary {
  double final_time = 0.0;
  std::size_t steps = 0;
  std::size_t rejections = 0;
  double final_energy = 0.0;
  double final_delta_sep = 0.0;
  double mass_drift = 0.0;
};

/// Loads the config named in opts (or the defaults) and applies --seed.
RunConfig resolve_config(const Options& opts);

/// Runs one configuration and writes ledger, snapshots and summary into `dir`.
/// Returns the summary and the files written.
RunSummary run_into(const RunConfig& cfg, const std::filesystem::path& dir,
                    std::vector<std::filesystem::path>& written);

int cmd_run(const Options& opts);
int cmd_verify(const Options& opts);
int cmd_dispersion(const Options& opts);
int cmd_cdep(const Options& opts);
int cmd_sweep(const Options& opts);
int cmd_init(const Options& opts);

/// Runs a subcommand, mapping exceptions to exit codes: configuration and
/// initial-data errors give 1, solver errors give 2.
int dispatch(const std::string& command, const Options& opts);

}  // namespace fchlog::cli
