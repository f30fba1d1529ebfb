#include "fchlog/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fchlog/errors.hpp"

namespace fchlog {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::ImexStabilized: return "imex";
    case Scheme::ImplicitNewton: return "implicit";
  }
  return "?";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "imex" || name == "imex_stabilized") return Scheme::ImexStabilized;
  if (name == "implicit" || name == "implicit_newton" || name == "newton") {
    return Scheme::ImplicitNewton;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("solver.") + name + " must be positive and finite");
    }
  };
  positive(dt0, "dt0");
  positive(dt_min, "dt_min");
  positive(dt_max, "dt_max");
  positive(newton_tol, "newton_tol");
  if (!(dt_min <= dt0 && dt0 <= dt_max)) {
    throw ConfigError("solver: need dt_min <= dt0 <= dt_max");
  }
  if (!(s1 >= 0.0) || !(s2 >= 0.0)) throw ConfigError("solver: s1 and s2 must be >= 0");
  if (!(energy_tol >= 0.0)) throw ConfigError("solver.energy_tol must be >= 0");
  if (!(growth_factor >= 1.0)) throw ConfigError("solver.growth_factor must be >= 1");
  if (newton_max_iters < 1) throw ConfigError("solver.newton_max_iters must be >= 1");
  if (!(guard_eps > 0.0 && guard_eps < 0.5)) {
    throw ConfigError("solver.guard_eps must lie in (0, 0.5)");
  }
  if (truncation && !(guard_eps < 1.0 / truncation->n())) {
    throw ConfigError("solver.guard_eps must be below 1/n in truncated mode");
  }
}

double SolverConfig::separation_bound() const {
  if (truncation) return truncation->clamp_bound() - guard_eps;
  return 1.0 - guard_eps;
}

SolverConfig with_default_stabilization(SolverConfig cfg, const PotentialParams& p,
                                        std::optional<double> range) {
  double r = 0.0;
  if (range) {
    r = std::abs(*range);
  } else {
    r = cfg.truncation ? cfg.truncation->clamp_bound() : 1.0 - cfg.guard_eps;
  }
  r = std::min(r, 1.0 - 1e-12);
  cfg.s1 = 2.0 / ((1.0 - r) * (1.0 + r));
  cfg.s2 = std::abs(2.0 * p.lambda - p.eta);
  return cfg;
}

namespace {

Nonlinearity make_nonlinearity(const PotentialParams& p, const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  return cfg.truncation ? Nonlinearity::extended(p, *cfg.truncation) : Nonlinearity::exact(p);
}

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Unrestarted GMRES for J x = b from x = 0, with Givens rotations.
Vec gmres(const std::function<Vec(const Vec&)>& apply, const Vec& b, double rtol, int max_iters) {
  const std::size_t n = b.size();
  Vec x(n, 0.0);
  const double beta = norm(b);
  if (beta == 0.0) return x;

  std::vector<Vec> V;
  V.reserve(max_iters + 1);
  V.emplace_back(b);
  for (double& v : V[0]) v /= beta;
  std::vector<Vec> H(max_iters + 1, Vec(max_iters, 0.0));
  Vec cs(max_iters, 0.0), sn(max_iters, 0.0), g(max_iters + 1, 0.0);
  g[0] = beta;

  int k = 0;
  for (; k < max_iters; ++k) {
    Vec w = apply(V[k]);
    for (int i = 0; i <= k; ++i) {
      H[i][k] = dot(w, V[i]);
      for (std::size_t j = 0; j < n; ++j) w[j] -= H[i][k] * V[i][j];
    }
    H[k + 1][k] = norm(w);
    for (int i = 0; i < k; ++i) {
      const double t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
      H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
      H[i][k] = t;
    }
    const double r = std::hypot(H[k][k], H[k + 1][k]);
    if (r == 0.0) break;
    cs[k] = H[k][k] / r;
    sn[k] = H[k + 1][k] / r;
    const double hk1 = H[k + 1][k];
    H[k][k] = r;
    H[k + 1][k] = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];
    const bool done = std::abs(g[k + 1]) <= rtol * beta || hk1 == 0.0;
    if (!done && k + 1 < max_iters) {
      V.emplace_back(std::move(w));
      for (double& v : V.back()) v /= hk1;
    }
    if (done) {
      ++k;
      break;
    }
  }
  k = std::min(k, max_iters);

  Vec y(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[i];
    for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
    y[i] = s / H[i][i];
  }
  for (int i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) x[j] += y[i] * V[i][j];
  }
  return x;
}

bool within(const ScalarField& v, double bound) {
  for (double x : v.values()) {
    if (!(std::abs(x) <= bound)) return false;
  }
  return true;
}

/// Largest theta in (0, 1] with |v + theta d| <= bound everywhere.
double damping(const ScalarField& v, const ScalarField& d, double bound) {
  double theta = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double next = v[i] + d[i];
    if (std::abs(next) <= bound || d[i] == 0.0) continue;
    const double limit = d[i] > 0.0 ? bound - v[i] : -bound - v[i];
    theta = std::min(theta, std::max(0.0, limit / d[i]));
  }
  return theta;
}

}  // namespace

Stepper::Stepper(const Grid& grid, const PotentialParams& p, SolverConfig cfg)
    : cfg_(std::move(cfg)), model_(grid, make_nonlinearity(p, cfg_), cfg_.dealias_padding) {}

double Stepper::denominator(double a, double dt) const {
  return 1.0 + dt * (a * a * a + cfg_.s1 * a * a + cfg_.s2 * a);
}

ScalarField Stepper::imex_update(const ScalarField& u, double dt) {
  Spectral& sp = model_.spectral();
  const ScalarField r = model_.mu_remainder(u);
  const Spectrum su = sp.forward_fluctuation(u);
  const Spectrum sr = sp.forward_fluctuation(r);
  const auto eig = sp.eigenvalues();
  Spectrum delta(su.size());
  for (std::size_t k = 0; k < su.size(); ++k) {
    const double a = eig[k];
    delta[k] = -dt * (a * a * a * su[k] + a * sr[k]) / denominator(a, dt);
  }
  delta[0] = 0.0;
  ScalarField out = u;
  out += sp.backward(delta);
  return out;
}

StepResult Stepper::step_imex(const ScalarField& u, double dt) {
  return step_imex(u, dt, model_.energy(u).total);
}

StepResult Stepper::step_imex(const ScalarField& u, double dt, double energy_before) {
  StepResult res{imex_update(u, dt), dt, false, 0, 0.0};
  if (!res.field.all_finite()) throw DomainError("IMEX step produced non-finite values");
  res.energy_after = model_.energy(res.field).total;
  res.accepted = res.energy_after <= energy_before + cfg_.energy_tol;
  return res;
}

ScalarField Stepper::newton_residual(const ScalarField& u, const ScalarField& v, double dt) {
  Spectral& sp = model_.spectral();
  const ScalarField r = model_.mu_remainder(v);
  ScalarField diff = v;
  diff -= u;
  Spectrum out = sp.forward(diff);
  const Spectrum sv = sp.forward_fluctuation(v);
  const Spectrum sr = sp.forward_fluctuation(r);
  const auto eig = sp.eigenvalues();
  for (std::size_t k = 1; k < out.size(); ++k) {
    const double a = eig[k];
    out[k] = (out[k] + dt * (a * a * a * sv[k] + a * sr[k])) / denominator(a, dt);
  }
  return sp.backward(out);
}

StepResult Stepper::step_implicit(const ScalarField& u, double dt) {
  return step_implicit(u, dt, model_.energy(u).total);
}

StepResult Stepper::step_implicit(const ScalarField& u, double dt, double energy_before) {
  const double bound = cfg_.separation_bound();
  if (!within(u, bound)) {
    throw GuardViolation("implicit step: initial state exceeds the separation bound " +
                         std::to_string(bound));
  }
  ScalarField v = imex_update(u, dt);
  if (!v.all_finite() || !within(v, bound)) v = u;

  const double target = cfg_.newton_tol * l2_norm(u);
  const std::size_t n = u.size();
  for (int it = 0; it <= cfg_.newton_max_iters; ++it) {
    const ScalarField F = newton_residual(u, v, dt);
    if (!F.all_finite()) throw NewtonDivergence("implicit step: non-finite residual");
    const double fn = l2_norm(F);
    if (fn == 0.0 || fn <= target) {
      StepResult res{std::move(v), dt, false, it, 0.0};
      res.energy_after = model_.energy(res.field).total;
      res.accepted = res.energy_after <= energy_before + cfg_.energy_tol;
      return res;
    }
    if (it == cfg_.newton_max_iters) break;

    const double vscale = std::max(1.0, v.max_abs());
    auto jv = [&](const Vec& w) {
      double wmax = 0.0;
      for (double x : w) wmax = std::max(wmax, std::abs(x));
      if (wmax == 0.0) return Vec(n, 0.0);
      const double eps = 1e-7 * vscale / wmax;
      ScalarField vp = v;
      for (std::size_t i = 0; i < n; ++i) vp[i] += eps * w[i];
      const ScalarField Fp = newton_residual(u, vp, dt);
      Vec out(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = (Fp[i] - F[i]) / eps;
      return out;
    };
    Vec rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -F[i];
    const double rtol = std::clamp(0.1 * target / fn, 1e-10, 1e-3);
    const Vec step = gmres(jv, rhs, rtol, std::min<int>(40, static_cast<int>(n)));
    ScalarField d(u.grid(), step);
    if (!d.all_finite()) throw NewtonDivergence("implicit step: non-finite Newton direction");

    const double theta = damping(v, d, bound);
    if (theta < 1e-8) {
      throw GuardViolation("implicit step: damping would leave the separation bound");
    }
    v.axpy(theta, d);
  }
  throw NewtonDivergence("implicit step: no convergence within " +
                         std::to_string(cfg_.newton_max_iters) + " Newton iterations");
}

StepResult Stepper::step(const ScalarField& u, double dt, double energy_before) {
  return cfg_.scheme == Scheme::ImexStabilized ? step_imex(u, dt, energy_before)
                                               : step_implicit(u, dt, energy_before);
}

AdvanceResult Stepper::advance(const ScalarField& u0, double t_end, LedgerSink* sink,
                               std::size_t max_steps) {
  if (!(t_end >= 0.0)) throw ConfigError("advance: t_end must be >= 0");
  AdvanceResult out{u0, 0.0, 0, 0};
  double energy = model_.energy(u0).total;
  if (sink) sink->on_start(u0, 0.0);

  double dt = cfg_.dt0;
  const double tiny = 1e-12 * std::max(1.0, t_end);
  while (out.time < t_end - tiny) {
    if (max_steps != 0 && out.steps >= max_steps) break;
    int rejected_here = 0;
    for (;;) {
      const bool last = out.time + dt >= t_end - tiny;
      const double h = last ? t_end - out.time : dt;
      std::optional<StepResult> res;
      bool ok = false;
      try {
        res = step(out.field, h, energy);
        ok = res->accepted;
      } catch (const NewtonDivergence&) {
        if (h <= cfg_.dt_min) throw;
      } catch (const GuardViolation&) {
        if (h <= cfg_.dt_min) throw;
      } catch (const DomainError&) {
        if (h <= cfg_.dt_min) throw;
      }
      if (ok) {
        out.field = std::move(res->field);
        out.time = last ? t_end : out.time + h;
        energy = res->energy_after;
        ++out.steps;
        if (sink) sink->on_step(out.field, out.time, h, rejected_here);
        const bool fast = cfg_.scheme == Scheme::ImexStabilized || res->inner_iters <= 4;
        if (fast && !last) dt = std::min(cfg_.dt_max, dt * cfg_.growth_factor);
        break;
      }
      ++rejected_here;
      ++out.rejections;
      if (h <= cfg_.dt_min) {
        throw StepFloorError("advance: energy increase persists at dt_min = " +
                             std::to_string(cfg_.dt_min) + " (t = " +
                             std::to_string(out.time) + ")");
      }
      dt = std::max(cfg_.dt_min, 0.5 * h);
    }
  }
  return out;
}

StepResult step_imex(const ScalarField& u, double dt, const PotentialParams& p,
                     const SolverConfig& cfg) {
  Stepper s(u.grid(), p, cfg);
  return s.step_imex(u, dt);
}

StepResult step_implicit(const ScalarField& u, double dt, const PotentialParams& p,
                         const SolverConfig& cfg) {
  Stepper s(u.grid(), p, cfg);
  return s.step_implicit(u, dt);
}

AdvanceResult advance(const ScalarField& u0, double t_end, const PotentialParams& p,
                      const SolverConfig& cfg, LedgerSink* sink, std::size_t max_steps) {
  Stepper s(u0.grid(), p, cfg);
  return s.advance(u0, t_end, sink, max_steps);
}

}  // namespace fchlog
