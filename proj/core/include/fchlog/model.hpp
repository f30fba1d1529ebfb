#pragma once

#include <array>
#include <memory>
#include <string_view>

#include "fchlog/grid.hpp"
#include "fchlog/potential.hpp"
#include "fchlog/spectral.hpp"

namespace fchlog {

/// Equivalent (for smooth fields) ways of writing the chemical potential.
///
///   Cascade: mu = -Lap w + f'(u) w + eta w,  w = -Lap u + f(u)
///   Uom:     mu = Lap^2 u - Lap b(u) - b'(u) Lap u + b b' + (2 lam - eta) Lap u + g(u)
///   Uom1:    mu = Lap^2 u - 2 Lap b(u) + b''(u)|grad u|^2 + b b' + (2 lam - eta) Lap u + g(u)
///   Uom2:    mu = Lap^2 u - 2 b'(u) Lap u - b''(u)|grad u|^2 + b b' + (2 lam - eta) Lap u + g(u)
///   Uom3:    mu = Lap^2 u - a(u) Lap u - a'(u)/2 |grad u|^2 + b b' + (2 lam - eta) Lap u + g(u)
///
/// Uom1 drives the time steppers; the others serve as cross-checks.
enum class MuFormulation { Cascade, Uom, Uom1, Uom2, Uom3 };

inline constexpr std::array<MuFormulation, 5> kAllFormulations{
    MuFormulation::Cascade, MuFormulation::Uom, MuFormulation::Uom1, MuFormulation::Uom2,
    MuFormulation::Uom3};

std::string_view to_string(MuFormulation form);

struct EnergyBreakdown {
  double willmore = 0.0;  ///< 1/2 ||-Lap u + f(u)||^2
  double ch_grad = 0.0;   ///< eta/2 ||grad u||^2
  double ch_pot = 0.0;    ///< eta int F(u)
  double total = 0.0;
};

/// Quantities controlled by the a-priori estimates, tracked along runs.
struct AprioriDiagnostics {
  double beta_l2 = 0.0;            ///< ||beta(u)||
  double grad_beta_l2 = 0.0;       ///< ||grad beta(u)||
  double beta_betaprime_l1 = 0.0;  ///< ||beta(u) beta'(u)||_1
  double m_integral = 0.0;         ///< int M(|beta beta'|), M(r) = r ln^(1/2)(1 + r)
  double n_integral = 0.0;         ///< int N(|beta'' |grad u|^2|), N(r) = r ln ln(e^4 + r)
  double mu_mean = 0.0;
};

/// Superlinear weights used for the uniform-integrability diagnostics.
double weight_M(double r);
double weight_N(double r);

/// Field-level model: omega, mu, energy and the diagnostic functionals.
///
/// Owns its spectral workspace, so one Model must not be shared between
/// threads. With `padded` set, mu and the energy are evaluated on a grid twice
/// as fine per axis and truncated back.
class Model {
 public:
  Model(const Grid& grid, Nonlinearity nl, bool padded = false);
  ~Model();
  Model(Model&&) noexcept;
  Model& operator=(Model&&) noexcept;

  const Grid& grid() const { return spectral_.grid(); }
  Spectral& spectral() { return spectral_; }
  const Nonlinearity& nonlinearity() const { return nl_; }
  const PotentialParams& params() const { return nl_.params(); }
  bool padded() const { return fine_ != nullptr; }

  /// Throws DomainError when an exact-mode evaluation would leave (-1, 1).
  void require_admissible(const ScalarField& u, const char* what) const;

  ScalarField omega(const ScalarField& u);
  ScalarField mu(const ScalarField& u, MuFormulation form = MuFormulation::Uom1);
  /// Uom1 without its bilaplacian term; the explicit part of the IMEX update.
  ScalarField mu_remainder(const ScalarField& u);
  EnergyBreakdown energy(const ScalarField& u);
  /// Mean of mu from the integrated Uom1 identity, independent of spectral cancellation.
  double mu_mean(const ScalarField& u);

  /// J(u) = int |grad arcsin u|^2; OverflowSignal past 1e300.
  double arcsin_functional(const ScalarField& u);
  /// <DJ(u), phi> = int a(u) grad u . grad phi + 1/2 int a'(u) |grad u|^2 phi.
  double arcsin_gateaux(const ScalarField& u, const ScalarField& phi);

  AprioriDiagnostics apriori(const ScalarField& u);

 private:
  struct Derived;
  Derived derive(const ScalarField& u);

  Spectral spectral_;
  Nonlinearity nl_;
  std::unique_ptr<Model> fine_;
};

/// Growth rate of the mode with wavenumber k for the flow linearised at u = 0:
/// -k^2 (k^2 + 1 - lambda)(k^2 + 1 - lambda + eta).
double dispersion_sigma(double k, const PotentialParams& p);

}  // namespace fchlog
