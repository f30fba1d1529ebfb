#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "fchlog/grid.hpp"
#include "fchlog/model.hpp"
#include "fchlog/potential.hpp"

namespace fchlog {

enum class Scheme { ImexStabilized, ImplicitNewton };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

struct SolverConfig {
  Scheme scheme = Scheme::ImexStabilized;
  double dt0 = 1e-4;
  double dt_min = 1e-10;
  double dt_max = 1e-2;
  /// Stabilisation of the A^2 and A terms of the IMEX operator.
  double s1 = 0.0;
  double s2 = 0.0;
  double energy_tol = 1e-10;
  double growth_factor = 1.25;
  double newton_tol = 1e-10;
  int newton_max_iters = 25;
  double guard_eps = 1e-3;
  std::optional<TruncationLevel> truncation;
  /// Evaluate nonlinear terms on a 2x zero-padded grid.
  bool dealias_padding = false;

  void validate() const;
  /// Newton iterates are kept in [-bound, bound].
  double separation_bound() const;
};

/// Sets s1 = max 2 beta'(r) over |r| <= range and s2 = |2 lambda - eta|.
/// Without an explicit range the admissible range is used: the clamp bound in
/// truncated mode, otherwise 1 - guard_eps.
SolverConfig with_default_stabilization(SolverConfig cfg, const PotentialParams& p,
                                        std::optional<double> range = std::nullopt);

struct StepResult {
  ScalarField field;
  double dt_used = 0.0;
  bool accepted = false;
  int inner_iters = 0;
  double energy_after = 0.0;
};

/// Receives the initial state and every accepted step of `advance`.
class LedgerSink {
 public:
  virtual ~LedgerSink() = default;
  virtual void on_start(const ScalarField& u0, double t0) = 0;
  virtual void on_step(const ScalarField& u, double t, double dt, int rejections) = 0;
};

struct AdvanceResult {
  ScalarField field;
  double time = 0.0;
  std::size_t steps = 0;
  std::size_t rejections = 0;
};

/// Time integration of u_t = Lap mu with mu in the Uom1 form.
///
/// IMEX: per mode, with a the eigenvalue of A and R = mu - Lap^2 u,
///   (1 + dt(a^3 + s1 a^2 + s2 a)) u+ = (1 + dt(s1 a^2 + s2 a)) u - dt a R(u).
/// Implicit: Newton on the IMEX-preconditioned residual of
///   G(v) = v - u + dt A mu(v),
/// with GMRES inner solves and damping that keeps |v| <= separation_bound().
class Stepper {
 public:
  Stepper(const Grid& grid, const PotentialParams& p, SolverConfig cfg);

  Model& model() { return model_; }
  const SolverConfig& config() const { return cfg_; }

  StepResult step_imex(const ScalarField& u, double dt);
  StepResult step_imex(const ScalarField& u, double dt, double energy_before);
  StepResult step_implicit(const ScalarField& u, double dt);
  StepResult step_implicit(const ScalarField& u, double dt, double energy_before);
  StepResult step(const ScalarField& u, double dt, double energy_before);

  /// Adaptive integration to t_end (or until max_steps accepted steps when nonzero).
  /// Rejects a step whose energy rises by more than energy_tol, or whose candidate
  /// leaves the admissible set, and halves dt; grows dt by growth_factor after
  /// steps with fast inner convergence.
  AdvanceResult advance(const ScalarField& u0, double t_end, LedgerSink* sink = nullptr,
                        std::size_t max_steps = 0);

  /// The IMEX update without energy bookkeeping.
  ScalarField imex_update(const ScalarField& u, double dt);

 private:
  /// P^{-1} G(v) for the implicit step from u.
  ScalarField newton_residual(const ScalarField& u, const ScalarField& v, double dt);
  double denominator(double a, double dt) const;

  SolverConfig cfg_;
  Model model_;
};

StepResult step_imex(const ScalarField& u, double dt, const PotentialParams& p,
                     const SolverConfig& cfg);
StepResult step_implicit(const ScalarField& u, double dt, const PotentialParams& p,
                         const SolverConfig& cfg);
AdvanceResult advance(const ScalarField& u0, double t_end, const PotentialParams& p,
                      const SolverConfig& cfg, LedgerSink* sink = nullptr,
                      std::size_t max_steps = 0);

}  // namespace fchlog
