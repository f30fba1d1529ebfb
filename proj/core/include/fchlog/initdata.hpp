#pragma once

#include <cstdint>
#include <string_view>

#include "fchlog/grid.hpp"
#include "fchlog/potential.hpp"

namespace fchlog {

enum class InitialKind { Constant, TanhInterface, BandLimitedNoise, SingleMode };

std::string_view to_string(InitialKind kind);
InitialKind initial_kind_from_string(std::string_view name);

/// Recipe for an admissible initial state. Shapes vary along axis 0 except for
/// noise, which fills every axis.
struct InitialSpec {
  InitialKind kind = InitialKind::Constant;
  double mean_m = 0.0;
  /// Sup-norm of u - mean_m (the height of the tanh profile for interfaces).
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  /// TanhInterface: interface location along axis 0 and profile width.
  double position = 0.5;
  double width = 0.05;
  /// SingleMode: u = m + A cos(2 pi mode x / L).
  int mode = 1;
  /// BandLimitedNoise: highest per-axis frequency index.
  int cutoff = 8;

  void validate() const;
};

/// Every generated state satisfies |u| <= 1 - 1e-6 and mean(u) = mean_m to 1e-12.
ScalarField generate(const InitialSpec& spec, const Grid& grid);

/// u0n = (I + A/n)^{-1} (I + A/n)^{-1} ((1 - 2/n) u0).
///
/// The spectral resolvent has no discrete maximum principle, so the result is
/// checked against 1 - 2/n with tolerance 1e-8 ||u0||_inf; BoundOvershoot
/// otherwise.
ScalarField regularize_initial(const ScalarField& u0, TruncationLevel lvl);

}  // namespace fchlog
