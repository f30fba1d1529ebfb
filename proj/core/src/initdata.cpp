#include "fchlog/initdata.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fchlog/errors.hpp"
#include "fchlog/spectral.hpp"

namespace fchlog {

namespace {

constexpr double kBoundMargin = 1e-6;

void check_bound(const ScalarField& u) {
  if (!(u.max_abs() <= 1.0 - kBoundMargin)) {
    throw SpecError("initial state reaches |u| = " + std::to_string(u.max_abs()) +
                    ", beyond 1 - 1e-6");
  }
}

/// Shifts u to mean m exactly up to roundoff.
void recentre(ScalarField& u, double m) {
  u += -mean(u);
  u += m;
}

ScalarField noise(const InitialSpec& spec, const Grid& grid) {
  const int dim = grid.dim();
  const bool periodic = grid.bc() == Boundary::PeriodicFourier;
  const int K = spec.cutoff;
  for (int a = 0; a < dim; ++a) {
    if (2 * static_cast<std::size_t>(K) >= grid.count(a)) {
      throw SpecError("noise cutoff " + std::to_string(K) + " is not resolved by " +
                      std::to_string(grid.count(a)) + " samples along axis " +
                      std::to_string(a));
    }
  }

  // Per-axis phase tables e^{i theta f x}; theta = pi/L (cosine) or 2 pi/L.
  std::vector<std::vector<std::complex<double>>> table(dim);
  const int lo = periodic ? -K : 0;
  for (int a = 0; a < dim; ++a) {
    const double theta = (periodic ? 2.0 : 1.0) * std::numbers::pi / grid.length(a);
    const std::size_t n = grid.count(a);
    table[a].resize(static_cast<std::size_t>(K - lo + 1) * n);
    for (int f = lo; f <= K; ++f) {
      for (std::size_t j = 0; j < n; ++j) {
        table[a][static_cast<std::size_t>(f - lo) * n + j] =
            std::polar(1.0, theta * f * grid.coordinate(a, j));
      }
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  ScalarField u(grid);
  std::array<int, 3> f{0, 0, 0};
  const int span = K - lo + 1;
  long total = 1;
  for (int a = 0; a < dim; ++a) total *= span;
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int a = dim - 1; a >= 0; --a) {
      f[a] = lo + static_cast<int>(rest % span);
      rest /= span;
    }
    bool zero = true;
    for (int a = 0; a < dim; ++a) zero = zero && f[a] == 0;
    // Draw for every frequency so the field does not depend on which ones are kept.
    const double c = coef(rng);
    const double ph = phase(rng);
    if (zero) continue;
    if (periodic) {
      // Keep one of each +-f pair: the first nonzero component must be positive.
      int first = 0;
      for (int a = 0; a < dim; ++a) {
        if (f[a] != 0) {
          first = f[a];
          break;
        }
      }
      if (first < 0) continue;
    }
    const std::complex<double> w = periodic ? std::polar(c, ph) : std::complex<double>(c, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto m = grid.unflatten(i);
      std::complex<double> e = w;
      for (int a = 0; a < dim; ++a) {
        const auto& t = table[a][static_cast<std::size_t>(f[a] - lo) * grid.count(a) + m[a]];
        // Cosine basis: product of real cosines.
        e *= periodic ? t : std::complex<double>(t.real(), 0.0);
      }
      u[i] += e.real();
    }
  }
  u += -mean(u);
  const double peak = u.max_abs();
  if (peak > 0.0) u *= spec.amplitude / peak;
  recentre(u, spec.mean_m);
  return u;
}

}  // namespace

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::Constant: return "constant";
    case InitialKind::TanhInterface: return "tanh";
    case InitialKind::BandLimitedNoise: return "noise";
    case InitialKind::SingleMode: return "mode";
  }
  return "?";
}

InitialKind initial_kind_from_string(std::string_view name) {
  if (name == "constant") return InitialKind::Constant;
  if (name == "tanh" || name == "interface") return InitialKind::TanhInterface;
  if (name == "noise") return InitialKind::BandLimitedNoise;
  if (name == "mode" || name == "single_mode") return InitialKind::SingleMode;
  throw ConfigError("unknown initial kind '" + std::string(name) + "'");
}

void InitialSpec::validate() const {
  if (!(std::abs(mean_m) < 1.0)) {
    throw SpecError("mean " + std::to_string(mean_m) + " must lie strictly inside (-1, 1)");
  }
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw SpecError("amplitude must be finite and >= 0");
  }
  if (kind != InitialKind::TanhInterface && std::abs(mean_m) + amplitude > 1.0 - kBoundMargin) {
    throw SpecError("|mean| + amplitude exceeds 1 - 1e-6");
  }
  if (kind == InitialKind::TanhInterface && !(width > 0.0)) {
    throw SpecError("interface width must be positive");
  }
  if (kind == InitialKind::SingleMode && mode < 1) throw SpecError("mode index must be >= 1");
  if (kind == InitialKind::BandLimitedNoise && cutoff < 1) {
    throw SpecError("noise cutoff must be >= 1");
  }
}

ScalarField generate(const InitialSpec& spec, const Grid& grid) {
  spec.validate();
  ScalarField u(grid, spec.mean_m);
  switch (spec.kind) {
    case InitialKind::Constant:
      break;
    case InitialKind::SingleMode: {
      const double L = grid.length(0);
      if (2 * static_cast<std::size_t>(spec.mode) >= grid.count(0)) {
        throw SpecError("mode " + std::to_string(spec.mode) + " is not resolved on the grid");
      }
      u = ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
        return spec.amplitude * std::cos(2.0 * std::numbers::pi * spec.mode * x[0] / L);
      });
      u += spec.mean_m;
      break;
    }
    case InitialKind::TanhInterface: {
      u = ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
        return std::tanh((x[0] - spec.position) / (std::numbers::sqrt2 * spec.width));
      });
      u += -mean(u);
      u *= spec.amplitude;
      recentre(u, spec.mean_m);
      break;
    }
    case InitialKind::BandLimitedNoise:
      u = noise(spec, grid);
      break;
  }
  check_bound(u);
  return u;
}

ScalarField regularize_initial(const ScalarField& u0, TruncationLevel lvl) {
  const double sup = u0.max_abs();
  if (!(sup <= 1.0)) {
    throw DomainError("regularize_initial: ||u0||_inf = " + std::to_string(sup) + " exceeds 1");
  }
  const double n = lvl.n();
  Spectral sp(u0.grid());
  ScalarField v = u0;
  v *= 1.0 - 2.0 / n;
  v = sp.resolvent(v, 1.0 / n);
  v = sp.resolvent(v, 1.0 / n);
  const double limit = 1.0 - 2.0 / n + 1e-8 * sup;
  if (v.max_abs() > limit) {
    throw BoundOvershoot("regularized initial state reaches " + std::to_string(v.max_abs()) +
                         ", beyond 1 - 2/n + 1e-8 ||u0||_inf = " + std::to_string(limit) +
                         "; the input is under-resolved");
  }
  return v;
}

}  // namespace fchlog
