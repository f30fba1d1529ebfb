#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fchlog/grid.hpp"
#include "fchlog/model.hpp"
#include "fchlog/stepper.hpp"

namespace fchlog {

struct LedgerRow {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  EnergyBreakdown energy;
  double grad_mu_sq = 0.0;  ///< ||grad mu||^2
  double min_u = 0.0;
  double max_u = 0.0;
  double delta_sep = 0.0;  ///< 1 - max(|min_u|, |max_u|)
  AprioriDiagnostics apriori;
  int rejections = 0;
};

struct RunLedger {
  int dim = 1;
  std::vector<LedgerRow> rows;
};

/// One ledger row for the state u at time t.
LedgerRow record(Model& model, const ScalarField& u, double t, double dt, int rejections = 0);

/// Sink that appends a row for the initial state and every accepted step.
class RunRecorder : public LedgerSink {
 public:
  explicit RunRecorder(Model& model);

  void on_start(const ScalarField& u0, double t0) override;
  void on_step(const ScalarField& u, double t, double dt, int rejections) override;

  const RunLedger& ledger() const { return ledger_; }
  RunLedger take() { return std::move(ledger_); }

 private:
  Model& model_;
  RunLedger ledger_;
};

extern const char* const kLedgerHeader;

void write_ledger_csv(std::ostream& os, const RunLedger& ledger);
void write_ledger_csv(const std::filesystem::path& path, const RunLedger& ledger);

/// |E(t2) - E(t1) + sum over rows in (t1, t2] of dt ||grad mu||^2|.
/// t1 and t2 snap to the first row at or after t1 and the last row at or before t2.
double energy_identity_residual(const RunLedger& ledger, double t1, double t2);

struct CdepReport {
  std::vector<double> times;
  std::vector<double> dual_distance;  ///< ||u1 - u2||_{V0'}
  double fitted_C = 0.0;
  bool envelope_ok = false;
  bool identical_inputs = false;
  std::size_t rejections = 0;
};

/// Runs both trajectories in lockstep with the step dt0 of cfg (halved on
/// rejection) and fits C in d(t)^2 <= d(0)^2 e^{C t} through the origin on
/// log(d^2/d0^2) over t >= 5 dt0. The envelope allows a 1% slack on |C| t.
CdepReport cdep_experiment(const ScalarField& u01, const ScalarField& u02,
                           const PotentialParams& p, const SolverConfig& cfg, double t_end);

struct TruncationRow {
  int n = 0;
  double distance = 0.0;  ///< ||u^(n) - u^(2n)||_{L2} at t_end
};

struct TruncationTable {
  std::vector<TruncationRow> rows;
  bool decreasing = false;
};

/// For each level n runs the truncated solver from regularize_initial(u0, n)
/// and from regularize_initial(u0, 2n) to t_end. Each run uses guard_eps no
/// larger than 1/(2n).
TruncationTable truncation_convergence(const ScalarField& u0, const PotentialParams& p,
                                       const SolverConfig& cfg, const std::vector<int>& levels,
                                       double t_end);

struct SeparationReport {
  double tau = 0.0;
  double delta_min = 0.0;
  bool attained = false;
  /// False in 3D, where separation is not known to hold.
  bool guaranteed = true;
  std::string note;
};

SeparationReport separation_report(const RunLedger& ledger, double tau);

struct DispersionRow {
  int k = 0;
  double sigma_closed = 0.0;
  double sigma_measured = 0.0;
  double rel_error = 0.0;
  std::size_t steps = 0;
};

/// Single-mode decay about u = 0 on a periodic box of length 2 pi, so the
/// frequency index equals the wavenumber. Each mode runs the IMEX scheme with
/// dt (a^3 + S + |sigma|) = dt_scale and long enough to decay by one e-fold;
/// the rate is read off the projection onto cos(kx).
std::vector<DispersionRow> dispersion_experiment(const PotentialParams& p,
                                                 const std::vector<int>& ks,
                                                 double amplitude = 1e-6,
                                                 std::size_t samples = 64,
                                                 double dt_scale = 1e-3);

std::string report_json(const CdepReport& r);
std::string report_json(const TruncationTable& r);
std::string report_json(const SeparationReport& r);

}  // namespace fchlog
