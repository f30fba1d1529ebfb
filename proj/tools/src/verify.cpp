#include "fchlog_cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>

#include "fchlog/diagnostics.hpp"
#include "fchlog/errors.hpp"
#include "fchlog/initdata.hpp"
#include "fchlog/model.hpp"
#include "fchlog/potential.hpp"
#include "fchlog/snapshot.hpp"
#include "fchlog/spectral.hpp"
#include "fchlog/stepper.hpp"

namespace fchlog::cli {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ScalarField noise(const Grid& g, double m, double amp, std::uint64_t seed, int cutoff = 6) {
  InitialSpec s;
  s.kind = InitialKind::BandLimitedNoise;
  s.mean_m = m;
  s.amplitude = amp;
  s.seed = seed;
  s.cutoff = cutoff;
  return generate(s, g);
}

CheckResult check_symmetry() {
  const PotentialParams p{1.5, -0.5};
  double worst = 0.0;
  for (int i = -999; i <= 999; ++i) {
    const double r = i / 1000.0;
    worst = std::max(worst, std::abs(eval_beta(-r).value + eval_beta(r).value));
    worst = std::max(worst, std::abs(eval_f(p, -r) + eval_f(p, r)));
    worst = std::max(worst, std::abs(eval_g(p, -r).value + eval_g(p, r).value));
    worst = std::max(worst, std::abs(eval_F(p, -r) - eval_F(p, r)));
  }
  return {"potential: beta, f, g odd and F even", worst <= 1e-14, fmt("max defect %.2e", worst)};
}

CheckResult check_derivatives() {
  const PotentialParams p{1.0, -1.0};
  const double h = 1e-6;
  double worst = 0.0;
  auto upd = [&](double fd, double exact) {
    worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
  };
  for (int i = -99; i <= 99; ++i) {
    const double r = i / 100.0;
    const BetaValues b = eval_beta(r);
    upd((eval_beta(r + h).value - eval_beta(r - h).value) / (2 * h), b.d1);
    upd((eval_beta(r + h).d1 - eval_beta(r - h).d1) / (2 * h), b.d2);
    upd((eval_beta(r + h).d2 - eval_beta(r - h).d2) / (2 * h), eval_beta3(r));
    const AValues a = eval_a(r);
    upd((eval_a(r + h).a - eval_a(r - h).a) / (2 * h), a.a1);
    upd((eval_a(r + h).a1 - eval_a(r - h).a1) / (2 * h), a.a2);
    upd((eval_g(p, r + h).value - eval_g(p, r - h).value) / (2 * h), eval_g(p, r).d1);
    upd((eval_F(p, r + h) - eval_F(p, r - h)) / (2 * h), eval_f(p, r));
  }
  return {"potential: derivatives match finite differences", worst <= 1e-5,
          fmt("max relative error %.2e", worst)};
}

CheckResult check_convexity_and_monotonicity() {
  double min_b1 = 1e300;
  bool monotone = true;
  double prev = -1e300;
  for (int i = 1; i < 10000; ++i) {
    const double r = -1.0 + 2.0 * i / 10000.0;
    const BetaValues b = eval_beta(r);
    min_b1 = std::min(min_b1, b.d1);
    const double bb = b.value * b.d1;
    if (bb < prev) monotone = false;
    prev = bb;
  }
  return {"potential: beta' >= 1 and beta*beta' nondecreasing", min_b1 >= 1.0 && monotone,
          fmt("min beta' = %.6g", min_b1)};
}

CheckResult check_domination() {
  // g carries a -lambda r beta' term, so the ratio grows like beta(r) / lambda.
  const PotentialParams p{1.0, 1.0};
  bool growing = true;
  double prev = 0.0;
  double last = 0.0;
  for (int k = 2; k <= 12; ++k) {
    const double r = 1.0 - std::pow(10.0, -k);
    const BetaValues b = eval_beta(r);
    last = std::abs(b.value * b.d1) / std::abs(eval_g(p, r).value);
    growing = growing && last > prev;
    prev = last;
  }
  const double asym = rel(last, eval_beta(1.0 - 1e-12).value / p.lambda);
  return {"potential: beta*beta' / g grows without bound near +-1", growing && asym < 0.1,
          fmt("ratio %.3f at 1 - 1e-12, %.2e from beta/lambda", last, asym)};
}

CheckResult check_extension() {
  const PotentialParams p{2.0, 0.5};
  const TruncationLevel lvl(10);
  const Nonlinearity ext = Nonlinearity::extended(p, lvl);
  bool exact = true;
  for (int i = -950; i <= 950; ++i) {
    const double r = i / 1000.0;
    const LocalValues e = ext.local(r);
    const BetaValues b = eval_beta(r);
    const GValues g = eval_g(p, r);
    exact = exact && e.beta == b.value && e.beta1 == b.d1 && e.beta2 == b.d2 &&
            e.g == g.value && e.g1 == g.d1;
  }
  const double k = lvl.knee();
  const double d = 1e-9;
  const LocalValues in = ext.local(k - d);
  const LocalValues out = ext.local(k + d);
  const double jump = std::max({std::abs(in.beta - out.beta), std::abs(in.beta1 - out.beta1) / in.beta1,
                                std::abs(in.beta2 - out.beta2) / in.beta2});
  return {"potential: extension exact inside and C2 at the knee", exact && jump < 1e-5,
          fmt("knee jump %.2e", jump)};
}

CheckResult check_operators(std::uint64_t seed) {
  const Grid g({32, 24}, {1.0, 1.5}, Boundary::NeumannCosine);
  Spectral sp(g);
  ScalarField f = noise(g, 0.0, 0.5, seed);
  f += -mean(f);
  ScalarField back = sp.apply_A(sp.inv_A_zero_mean(f), 1);
  back -= f;
  const double inv_err = back.max_abs() / f.max_abs();
  const ScalarField c(g, 0.37);
  const double lap_c = sp.laplacian(c).max_abs();
  const double dual = sp.v0_dual_norm(f);
  const double dual_err = rel(dual * dual, inner(f, sp.inv_A_zero_mean(f)));
  ScalarField res = sp.resolvent(f, 0.1);
  res.axpy(0.1, sp.apply_A(res, 1));
  res -= f;
  const double res_err = res.max_abs() / f.max_abs();
  const double worst = std::max({inv_err, dual_err, res_err});
  return {"operators: A N = I, resolvent, dual norm, constants",
          worst <= 1e-11 && lap_c == 0.0, fmt("max error %.2e, |Lap c| = %.1e", worst, lap_c)};
}

double formulation_spread(std::size_t n) {
  const Grid g = Grid::line(n, 1.0, Boundary::NeumannCosine);
  Model model(g, Nonlinearity::exact({3.0, 1.0}));
  const ScalarField u = ScalarField::from_function(
      g, [](const std::array<double, 3>& x) { return 0.8 * std::cos(8.0 * std::numbers::pi * x[0]); });
  std::vector<ScalarField> mus;
  double scale = 0.0;
  for (MuFormulation f : kAllFormulations) {
    mus.push_back(model.mu(u, f));
    scale = std::max(scale, mus.back().max_abs());
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    for (std::size_t j = i + 1; j < mus.size(); ++j) {
      ScalarField d = mus[i];
      d -= mus[j];
      worst = std::max(worst, d.max_abs());
    }
  }
  return worst / (1.0 + scale);
}

CheckResult check_formulations() {
  const double a = formulation_spread(256);
  const double b = formulation_spread(512);
  return {"model: mu formulations agree and converge", a <= 1e-6 && b < a,
          fmt("scaled spread %.2e at N=256, %.2e at N=512", a, b)};
}

CheckResult check_gradient(std::uint64_t seed) {
  const Grid g = Grid::line(128, 2.0, Boundary::NeumannCosine);
  Model model(g, Nonlinearity::exact({2.0, 0.5}));
  const ScalarField u = noise(g, 0.1, 0.5, seed);
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const ScalarField v = noise(g, 0.0, 0.2, seed + 100 + i);
    ScalarField up = u;
    up.axpy(h, v);
    ScalarField um = u;
    um.axpy(-h, v);
    const double fd = (model.energy(up).total - model.energy(um).total) / (2 * h);
    worst = std::max(worst, rel(inner(model.mu(u, MuFormulation::Cascade), v), fd));
  }
  return {"model: mu is the energy gradient", worst <= 1e-4, fmt("max relative error %.2e", worst)};
}

CheckResult check_weak_form(std::uint64_t seed) {
  const PotentialParams p{1.5, -0.5};
  const Grid g = Grid::line(128, 2.0, Boundary::NeumannCosine);
  Model model(g, Nonlinearity::exact(p));
  Spectral& sp = model.spectral();
  const ScalarField u = noise(g, -0.2, 0.6, seed);
  const ScalarField mu = model.mu(u);
  const ScalarField lap_u = sp.laplacian(u);
  ScalarField beta(g), rest(g);
  const ScalarField du = sp.partial(u, 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const BetaValues b = eval_beta(u[i]);
    beta[i] = b.value;
    rest[i] = b.d2 * du[i] * du[i] + b.value * b.d1 + eval_g(p, u[i]).value;
  }
  const ScalarField dbeta = sp.partial(beta, 0);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ScalarField phi = noise(g, 0.0, 0.5, seed + 200 + k);
    const ScalarField dphi = sp.partial(phi, 0);
    const double weak = inner(lap_u, sp.laplacian(phi)) + 2.0 * inner(dbeta, dphi) +
                        inner(rest, phi) - (2.0 * p.lambda - p.eta) * inner(du, dphi);
    worst = std::max(worst, rel(inner(mu, phi), weak));
  }
  return {"model: mu matches its weak form", worst <= 1e-8, fmt("max relative error %.2e", worst)};
}

CheckResult check_gateaux(std::uint64_t seed) {
  const Grid g = Grid::line(128, 1.0, Boundary::NeumannCosine);
  Model model(g, Nonlinearity::exact({0.0, 0.0}));
  const ScalarField u = noise(g, 0.0, 0.7, seed);
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const ScalarField phi = noise(g, 0.0, 0.1, seed + 300 + k);
    ScalarField up = u;
    up.axpy(h, phi);
    ScalarField um = u;
    um.axpy(-h, phi);
    const double fd = (model.arcsin_functional(up) - model.arcsin_functional(um)) / (2 * h);
    worst = std::max(worst, rel(model.arcsin_gateaux(u, phi), fd));
  }
  return {"model: arcsin functional derivative", worst <= 1e-6, fmt("max relative error %.2e", worst)};
}

CheckResult check_energy_symmetry(std::uint64_t seed) {
  const Grid g = Grid::line(96, 3.0, Boundary::NeumannCosine);
  Model model(g, Nonlinearity::exact({2.5, 0.7}));
  const ScalarField u = noise(g, 0.3, 0.4, seed);
  ScalarField mirrored(g), negated(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    mirrored[i] = u[u.size() - 1 - i];
    negated[i] = -u[i];
  }
  const double e = model.energy(u).total;
  const double worst = std::max(rel(model.energy(mirrored).total, e), rel(model.energy(negated).total, e));
  return {"model: energy invariant under reflection and u -> -u", worst <= 1e-12,
          fmt("max relative change %.2e", worst)};
}

CheckResult check_fixed_points() {
  const Grid g = Grid::line(64, 2.0, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, p);
  const ScalarField u(g, 0.3);
  bool same = true;
  for (Scheme s : {Scheme::ImexStabilized, Scheme::ImplicitNewton}) {
    cfg.scheme = s;
    Stepper st(g, p, cfg);
    const StepResult r = st.step(u, 1e-2, st.model().energy(u).total);
    for (std::size_t i = 0; i < u.size(); ++i) same = same && r.field[i] == u[i];
  }
  return {"stepper: constant states are exact fixed points", same, same ? "bit-identical" : "changed"};
}

CheckResult check_mass_and_energy(std::uint64_t seed) {
  const Grid g = Grid::line(128, 2.5, Boundary::NeumannCosine);
  const PotentialParams p{3.0, 1.0};
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, p);
  cfg.dt0 = 1e-5;
  cfg.dt_max = 1e-3;
  Stepper st(g, p, cfg);
  RunRecorder rec(st.model());
  st.advance(noise(g, 0.2, 0.05, seed, 8), 0.5, &rec);
  const auto& rows = rec.ledger().rows;
  double drift = 0.0;
  double rise = -1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    drift = std::max(drift, std::abs(rows[i].mass - rows[0].mass));
    rise = std::max(rise, rows[i].energy.total - rows[i - 1].energy.total);
  }
  return {"stepper: mass conserved and energy nonincreasing",
          drift <= 1e-12 && rise <= cfg.energy_tol, fmt("mass drift %.2e, max energy rise %.2e", drift, rise)};
}

CheckResult check_regularization(std::uint64_t seed) {
  const Grid g = Grid::line(256, 1.0, Boundary::NeumannCosine);
  const ScalarField u0 = noise(g, 0.3, 0.6, seed, 10);
  const ScalarField u = regularize_initial(u0, TruncationLevel(10));
  const double err = std::abs(mean(u) - 0.24);
  const double over = std::max(0.0, u.max_abs() - 0.8);
  return {"initdata: regularization scales the mean and respects the bound",
          err <= 1e-13 && over <= 1e-8 * u0.max_abs(), fmt("mean error %.2e, overshoot %.2e", err, over)};
}

CheckResult check_snapshot(std::uint64_t seed) {
  const Grid g({16, 12}, {1.0, 2.0}, Boundary::PeriodicFourier);
  const ScalarField u = noise(g, 0.1, 0.3, seed, 4);
  const auto dir = std::filesystem::temp_directory_path() /
                   ("fchlog-verify-" + std::to_string(seed));
  write_snapshot(dir / "snap", u, 1.25, "verify");
  const Snapshot s = read_snapshot(dir / "snap");
  std::filesystem::remove_all(dir);
  bool same = s.field.grid() == g && s.time == 1.25;
  for (std::size_t i = 0; same && i < u.size(); ++i) same = s.field[i] == u[i];
  return {"snapshot: binary round trip", same, same ? "bit-identical" : "mismatch"};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  const std::vector<std::function<CheckResult()>> checks{
      check_symmetry,
      check_derivatives,
      check_convexity_and_monotonicity,
      check_domination,
      check_extension,
      [seed] { return check_operators(seed); },
      check_formulations,
      [seed] { return check_gradient(seed); },
      [seed] { return check_weak_form(seed); },
      [seed] { return check_gateaux(seed); },
      [seed] { return check_energy_symmetry(seed); },
      check_fixed_points,
      [seed] { return check_mass_and_energy(seed); },
      [seed] { return check_regularization(seed); },
      [seed] { return check_snapshot(seed); },
  };
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    try {
      out.push_back(c());
    } catch (const std::exception& e) {
      out.push_back({"(check threw)", false, e.what()});
    }
  }
  return out;
}

}  // namespace fchlog::cli
