#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "fchlog/errors.hpp"
#include "fchlog/initdata.hpp"
#include "fchlog/stepper.hpp"

using namespace fchlog;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField smooth(const Grid& g, double m, double amp) {
  const double L = g.length(0);
  return ScalarField::from_function(
      g, [&](const std::array<double, 3>& x) { return m + amp * std::cos(2 * pi * x[0] / L); });
}

double max_diff(ScalarField a, const ScalarField& b) {
  a -= b;
  return a.max_abs();
}

struct Counter : LedgerSink {
  std::vector<double> times;
  std::vector<double> masses;
  void on_start(const ScalarField& u, double t) override {
    times.push_back(t);
    masses.push_back(mean(u));
  }
  void on_step(const ScalarField& u, double t, double, int) override {
    times.push_back(t);
    masses.push_back(mean(u));
  }
};

}  // namespace

TEST_CASE("scheme names", "[stepper]") {
  CHECK(scheme_from_string("imex") == Scheme::ImexStabilized);
  CHECK(scheme_from_string("implicit") == Scheme::ImplicitNewton);
  CHECK(scheme_from_string("newton") == Scheme::ImplicitNewton);
  CHECK(to_string(Scheme::ImplicitNewton) == "implicit");
  CHECK_THROWS_AS(scheme_from_string("rk4"), ConfigError);
}

TEST_CASE("solver config validation", "[stepper]") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.dt0 = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SolverConfig{};
  cfg.s1 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SolverConfig{};
  cfg.growth_factor = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SolverConfig{};
  cfg.truncation = TruncationLevel(10);
  cfg.guard_eps = 0.2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.guard_eps = 0.01;
  CHECK(cfg.separation_bound() == 0.9 - 0.01);
  CHECK(SolverConfig{}.separation_bound() == 1.0 - 1e-3);
}

TEST_CASE("default stabilisation", "[stepper]") {
  const SolverConfig cfg = with_default_stabilization(SolverConfig{}, {3.0, 1.0}, 0.5);
  CHECK_THAT(cfg.s1, WithinRel(2.0 / 0.75, 1e-15));
  CHECK(cfg.s2 == 5.0);
  const SolverConfig wide = with_default_stabilization(SolverConfig{}, {0.0, 1.0});
  CHECK_THAT(wide.s1, WithinRel(2.0 / (1e-3 * (2.0 - 1e-3)), 1e-12));
}

TEST_CASE("constant states are fixed points", "[stepper]") {
  const Grid g = Grid::line(32, 1.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  for (Scheme s : {Scheme::ImexStabilized, Scheme::ImplicitNewton}) {
    SolverConfig cfg = with_default_stabilization(SolverConfig{}, p);
    cfg.scheme = s;
    const ScalarField u(g, -0.6);
    Stepper st(g, p, cfg);
    const StepResult q = st.step(u, 0.05, st.model().energy(u).total);
    CHECK(q.accepted);
    for (std::size_t i = 0; i < u.size(); ++i) REQUIRE(q.field[i] == u[i]);
  }
}

TEST_CASE("single steps conserve mass and lower the energy", "[stepper]") {
  const Grid g = Grid::line(128, 5.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  const ScalarField u = smooth(g, 0.2, 0.3);
  for (Scheme s : {Scheme::ImexStabilized, Scheme::ImplicitNewton}) {
    SolverConfig cfg = with_default_stabilization(SolverConfig{}, p, 0.6);
    cfg.scheme = s;
    Stepper st(g, p, cfg);
    const double e0 = st.model().energy(u).total;
    const StepResult r = st.step(u, 1e-3, e0);
    CHECK(r.accepted);
    CHECK_THAT(mean(r.field), WithinAbs(mean(u), 1e-15));
    CHECK(r.energy_after < e0);
  }
}

TEST_CASE("implicit step solves the backward Euler equation", "[stepper]") {
  const Grid g = Grid::line(64, 5.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, p, 0.6);
  cfg.newton_tol = 1e-13;
  Stepper st(g, p, cfg);
  const ScalarField u = smooth(g, 0.1, 0.4);
  const double dt = 1e-2;
  const StepResult r = st.step_implicit(u, dt);
  CHECK(r.inner_iters > 0);
  ScalarField res = r.field;
  res -= u;
  res.axpy(-dt, st.model().spectral().laplacian(st.model().mu(r.field)));
  ScalarField incr = r.field;
  incr -= u;
  CHECK(res.max_abs() <= 1e-6 * incr.max_abs());
}

TEST_CASE("IMEX and implicit differ at second order in dt", "[stepper]") {
  const Grid g = Grid::line(64, 5.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, p, 0.2);
  Stepper st(g, p, cfg);
  // small amplitude keeps the generated harmonics out of the stiff range
  const ScalarField u = smooth(g, 0.0, 0.01);
  std::vector<double> gaps;
  for (double dt : {4e-3, 2e-3, 1e-3, 5e-4}) {
    gaps.push_back(max_diff(st.step_imex(u, dt).field, st.step_implicit(u, dt).field));
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    const double order = std::log2(gaps[i - 1] / gaps[i]);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
  }
}

TEST_CASE("implicit step refuses a state past the separation bound", "[stepper]") {
  const Grid g = Grid::line(32, 1.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg;
  cfg.guard_eps = 0.1;
  Stepper st(g, p, cfg);
  ScalarField u(g, 0.0);
  u[4] = 0.95;
  CHECK_THROWS_AS(st.step_implicit(u, 1e-3), GuardViolation);
}

TEST_CASE("advance lands on t_end and reports every step", "[stepper]") {
  const Grid g = Grid::line(64, 5.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, p, 0.5);
  cfg.dt0 = 3e-3;
  cfg.dt_max = 7e-3;
  Counter sink;
  const AdvanceResult r = advance(smooth(g, 0.2, 0.1), 0.1, p, cfg, &sink);
  CHECK(r.time == 0.1);
  CHECK(sink.times.back() == 0.1);
  CHECK(sink.times.size() == r.steps + 1);
  for (std::size_t i = 1; i < sink.times.size(); ++i) {
    REQUIRE(sink.times[i] > sink.times[i - 1]);
    REQUIRE_THAT(sink.masses[i], WithinAbs(sink.masses[0], 1e-14));
  }
  const AdvanceResult capped = advance(smooth(g, 0.2, 0.1), 10.0, p, cfg, nullptr, 5);
  CHECK(capped.steps == 5);
  CHECK(capped.time < 10.0);
}

TEST_CASE("a failed step at the step floor raises", "[stepper]") {
  // unstabilised IMEX from a state close to the pure phases overshoots past 1
  const Grid g = Grid::line(64, 5.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg;
  cfg.dt0 = cfg.dt_min = cfg.dt_max = 0.1;
  InitialSpec spec;
  spec.kind = InitialKind::BandLimitedNoise;
  spec.mean_m = 0.0;
  spec.amplitude = 0.95;
  spec.seed = 5;
  spec.cutoff = 12;
  const ScalarField u = generate(spec, g);
  CHECK_THROWS_AS(advance(u, 1.0, p, cfg), DomainError);
  cfg.dt_min = 1e-3;
  CHECK_NOTHROW(advance(u, 0.2, p, cfg));
}

TEST_CASE("truncated mode runs past the physical range", "[stepper]") {
  const Grid g = Grid::line(64, 5.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg;
  cfg.truncation = TruncationLevel(5);
  cfg.guard_eps = 0.05;
  cfg = with_default_stabilization(cfg, p);
  Stepper st(g, p, cfg);
  CHECK(st.model().nonlinearity().is_extended());
  const AdvanceResult r = st.advance(smooth(g, 0.0, 0.7), 0.05);
  CHECK(r.field.all_finite());
}
