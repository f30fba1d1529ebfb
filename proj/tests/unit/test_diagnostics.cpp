#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fchlog/diagnostics.hpp"
#include "fchlog/errors.hpp"
#include "fchlog/initdata.hpp"

using namespace fchlog;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

LedgerRow row(double t, double dt, double e, double gms) {
  LedgerRow r;
  r.t = t;
  r.dt = dt;
  r.energy.total = e;
  r.grad_mu_sq = gms;
  r.delta_sep = 0.5 + t;
  return r;
}

ScalarField mode(const Grid& g, double m, double amp, int j) {
  const double L = g.length(0);
  return ScalarField::from_function(
      g, [&](const std::array<double, 3>& x) { return m + amp * std::cos(j * pi * x[0] / L); });
}

}  // namespace

TEST_CASE("ledger row for a constant state", "[diagnostics]") {
  const Grid g = Grid::line(32, 2.0, Boundary::NeumannCosine);
  Model model(g, Nonlinearity::exact({3.0, 1.0}));
  const LedgerRow r = record(model, ScalarField(g, -0.25), 1.5, 0.1, 2);
  CHECK(r.t == 1.5);
  CHECK(r.mass == -0.25);
  CHECK(r.grad_mu_sq == 0.0);
  CHECK(r.delta_sep == 0.75);
  CHECK(r.min_u == -0.25);
  CHECK(r.rejections == 2);
  CHECK_THAT(r.energy.total, WithinRel(model.energy(ScalarField(g, -0.25)).total, 1e-15));
}

TEST_CASE("ledger CSV layout", "[diagnostics]") {
  RunLedger ledger;
  ledger.rows = {row(0.0, 0.0, 1.0, 0.0), row(0.1, 0.1, 0.9, 1.0)};
  std::ostringstream os;
  write_ledger_csv(os, ledger);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == kLedgerHeader);
  int n = 0;
  while (std::getline(is, line)) ++n;
  CHECK(n == 2);
}

TEST_CASE("energy identity residual on a hand-built ledger", "[diagnostics]") {
  RunLedger ledger;
  // E drops by dt * gms exactly except in the last step, which loses 0.01 extra
  ledger.rows = {row(0.0, 0.0, 1.0, 0.0), row(0.1, 0.1, 0.9, 1.0), row(0.2, 0.1, 0.7, 2.0),
                 row(0.3, 0.1, 0.59, 1.0)};
  CHECK_THAT(energy_identity_residual(ledger, 0.0, 0.2), WithinAbs(0.0, 1e-15));
  CHECK_THAT(energy_identity_residual(ledger, 0.0, 0.3), WithinAbs(0.01, 1e-15));
  // interior endpoints snap to rows
  CHECK_THAT(energy_identity_residual(ledger, 0.05, 0.25), WithinAbs(0.0, 1e-15));
  CHECK_THROWS_AS(energy_identity_residual(ledger, 0.2, 0.1), RangeError);
  CHECK_THROWS_AS(energy_identity_residual(ledger, 0.0, 0.5), RangeError);
  CHECK_THROWS_AS(energy_identity_residual(RunLedger{}, 0.0, 0.1), RangeError);
}

TEST_CASE("separation report", "[diagnostics]") {
  RunLedger ledger;
  ledger.rows = {row(0.0, 0.0, 1.0, 0.0), row(0.1, 0.1, 0.9, 1.0), row(0.2, 0.1, 0.8, 1.0)};
  ledger.rows[0].delta_sep = 0.01;
  const SeparationReport r = separation_report(ledger, 0.1);
  CHECK(r.attained);
  CHECK(r.guaranteed);
  CHECK_THAT(r.delta_min, WithinAbs(0.6, 1e-15));
  ledger.dim = 3;
  const SeparationReport r3 = separation_report(ledger, 0.1);
  CHECK_FALSE(r3.guaranteed);
  CHECK_THAT(r3.note, ContainsSubstring("open in 3D"));
  CHECK_THAT(report_json(r3), ContainsSubstring("\"guaranteed\": false"));
  CHECK_THROWS_AS(separation_report(ledger, 5.0), RangeError);
}

TEST_CASE("run recorder follows advance", "[diagnostics]") {
  const Grid g = Grid::line(64, 5.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, p, 0.5);
  cfg.dt0 = 1e-3;
  Stepper st(g, p, cfg);
  RunRecorder rec(st.model());
  const AdvanceResult r = st.advance(mode(g, 0.2, 0.2, 2), 0.05, &rec);
  const RunLedger& ledger = rec.ledger();
  CHECK(ledger.rows.size() == r.steps + 1);
  CHECK(ledger.rows.front().t == 0.0);
  CHECK(ledger.rows.back().t == 0.05);
  for (std::size_t i = 1; i < ledger.rows.size(); ++i) {
    REQUIRE(ledger.rows[i].energy.total <= ledger.rows[i - 1].energy.total + cfg.energy_tol);
  }
}

TEST_CASE("continuous dependence with identical and mismatched inputs", "[diagnostics]") {
  const Grid g = Grid::line(32, 5.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, p, 0.5);
  cfg.dt0 = 1e-3;
  const ScalarField u = mode(g, 0.1, 0.2, 2);
  const CdepReport same = cdep_experiment(u, u, p, cfg, 0.02);
  CHECK(same.identical_inputs);
  CHECK(same.envelope_ok);
  CHECK_THROWS_AS(cdep_experiment(u, mode(g, 0.2, 0.2, 2), p, cfg, 0.02), MeanMismatch);
}

TEST_CASE("continuous dependence of a contractive pair", "[diagnostics]") {
  // lambda = eta = 0 about a small state: every mode decays
  const Grid g = Grid::line(64, 1.0, Boundary::NeumannCosine);
  const PotentialParams p{0.0, 0.0};
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, p, 0.1);
  cfg.dt0 = 1e-4;
  cfg.dt_max = 1e-4;
  const ScalarField u1 = mode(g, 0.0, 0.01, 2);
  ScalarField u2 = u1;
  u2 += mode(g, 0.0, 1e-6, 1);
  const CdepReport r = cdep_experiment(u1, u2, p, cfg, 0.01);
  CHECK_FALSE(r.identical_inputs);
  CHECK(r.envelope_ok);
  CHECK(r.fitted_C < 0.0);
  CHECK(r.dual_distance.back() < r.dual_distance.front());
}

TEST_CASE("truncation distance for a constant state", "[diagnostics]") {
  const Grid g = Grid::line(16, 2.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, p, 0.5);
  const TruncationTable t = truncation_convergence(ScalarField(g, 0.4), p, cfg, {10, 20}, 0.01);
  REQUIRE(t.rows.size() == 2);
  // (1 - 1/n) m - (1 - 2/n) m = m / n, over a box of length 2
  CHECK_THAT(t.rows[0].distance, WithinRel(0.4 / 10 * std::sqrt(2.0), 1e-12));
  CHECK_THAT(t.rows[1].distance, WithinRel(0.4 / 20 * std::sqrt(2.0), 1e-12));
  CHECK(t.decreasing);
  CHECK_THAT(report_json(t), ContainsSubstring("\"decreasing\": true"));
  CHECK_THROWS_AS(truncation_convergence(ScalarField(g, 0.4), p, cfg, {20, 10}, 0.01), ConfigError);
  CHECK_THROWS_AS(truncation_convergence(ScalarField(g, 0.4), p, cfg, {2}, 0.01), ConfigError);
}

TEST_CASE("measured decay rates follow the closed form", "[diagnostics]") {
  const PotentialParams p{0.0, -1.0};
  const auto rows = dispersion_experiment(p, {1, 2, 4}, 1e-6, 32, 1e-3);
  REQUIRE(rows.size() == 3);
  for (const DispersionRow& r : rows) {
    CHECK(r.sigma_closed == dispersion_sigma(r.k, p));
    CHECK(r.rel_error < 1e-2);
  }
  CHECK_THROWS_AS(dispersion_experiment(p, {40}, 1e-6, 32), ConfigError);
}
