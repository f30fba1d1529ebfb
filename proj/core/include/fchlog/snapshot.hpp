#pragma once

#include <filesystem>
#include <string>

#include "fchlog/grid.hpp"

namespace fchlog {

struct Snapshot {
  ScalarField field;
  double time = 0.0;
  std::string label;
};

/// Writes `<stem>.bin` (little-endian float64, row-major, axis 0 slowest) and the
/// `<stem>.json` sidecar {dim, counts, lengths, bc, time, label}. Returns the two paths.
std::pair<std::filesystem::path, std::filesystem::path> write_snapshot(
    const std::filesystem::path& stem, const ScalarField& u, double time, const std::string& label);

/// Reads a snapshot given either the `.bin`, the `.json` or the bare stem.
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace fchlog
