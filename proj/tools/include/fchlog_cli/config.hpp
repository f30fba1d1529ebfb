#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fchlog/grid.hpp"
#include "fchlog/initdata.hpp"
#include "fchlog/potential.hpp"
#include "fchlog/stepper.hpp"

namespace fchlog::cli {

struct OutputBlock {
  std::string ledger = "ledger.csv";
  std::string summary = "summary.json";
  /// Snapshot every k-th accepted step; 0 disables snapshots.
  std::size_t snapshot_every = 0;
  std::string snapshot_dir = "snapshots";
};

struct DispersionBlock {
  std::vector<int> ks{1, 2, 3, 4, 5, 6, 7, 8};
  double amplitude = 1e-6;
  std::size_t samples = 64;
  double dt_scale = 1e-3;
  double tolerance = 1e-2;
};

struct CdepBlock {
  double perturbation = 1e-6;
  int mode = 1;
  double t_end = 2.0;
};

struct SweepBlock {
  std::vector<double> lambdas;
  std::vector<double> etas;
  /// 0 stands for the exact (untruncated) potential.
  std::vector<int> truncations;
};

struct RunConfig {
  std::filesystem::path source;
  std::string text;  ///< raw file contents, hashed into provenance records

  Grid grid = Grid::line(64, 1.0, Boundary::NeumannCosine);
  PotentialParams potential;
  std::optional<TruncationLevel> truncation;
  InitialSpec initial;
  bool regularize = false;
  SolverConfig solver;
  double t_end = 1.0;
  std::size_t max_steps = 0;
  OutputBlock output;
  DispersionBlock dispersion;
  CdepBlock cdep;
  SweepBlock sweep;

  /// Raw solver keys kept so sweeps can re-derive default stabilization.
  std::optional<double> s1_override;
  std::optional<double> s2_override;
  std::optional<double> stabilization_range;
};

/// Parses an INI file with sections [grid], [potential], [initial], [solver],
/// [output], [dispersion], [cdep] and [sweep]. Unknown sections or keys, and
/// values violating any module invariant, raise ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& source = {});

/// Recomputes s1/s2 for the current potential and truncation, keeping explicit overrides.
void resolve_stabilization(RunConfig& cfg);

/// A copy with different lambda, eta and truncation (0 = exact), revalidated.
RunConfig with_parameters(const RunConfig& base, double lambda, double eta, int truncation);

/// The initial field: generated, then regularized when requested.
ScalarField initial_field(const RunConfig& cfg);

}  // namespace fchlog::cli
