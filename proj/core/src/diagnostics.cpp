#include "fchlog/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "fchlog/errors.hpp"
#include "fchlog/initdata.hpp"

namespace fchlog {

LedgerRow record(Model& model, const ScalarField& u, double t, double dt, int rejections) {
  LedgerRow row;
  row.t = t;
  row.dt = dt;
  row.rejections = rejections;
  row.mass = mean(u);
  row.energy = model.energy(u);
  const double g = model.spectral().h1_seminorm(model.mu(u));
  row.grad_mu_sq = g * g;
  row.min_u = u.min();
  row.max_u = u.max();
  row.delta_sep = 1.0 - std::max(std::abs(row.min_u), std::abs(row.max_u));
  row.apriori = model.apriori(u);
  return row;
}

RunRecorder::RunRecorder(Model& model) : model_(model) { ledger_.dim = model.grid().dim(); }

void RunRecorder::on_start(const ScalarField& u0, double t0) {
  ledger_.rows.push_back(record(model_, u0, t0, 0.0, 0));
}

void RunRecorder::on_step(const ScalarField& u, double t, double dt, int rejections) {
  ledger_.rows.push_back(record(model_, u, t, dt, rejections));
}

const char* const kLedgerHeader =
    "t,dt,mass,E_total,E_willmore,E_ch_grad,E_ch_pot,grad_mu_sq,min_u,max_u,delta_sep,"
    "beta_l2,grad_beta_l2,betabp_l1,M_int,N_int,mu_mean,rejections";

void write_ledger_csv(std::ostream& os, const RunLedger& ledger) {
  os << kLedgerHeader << '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g,", v);
    os << buf;
  };
  for (const LedgerRow& r : ledger.rows) {
    put(r.t);
    put(r.dt);
    put(r.mass);
    put(r.energy.total);
    put(r.energy.willmore);
    put(r.energy.ch_grad);
    put(r.energy.ch_pot);
    put(r.grad_mu_sq);
    put(r.min_u);
    put(r.max_u);
    put(r.delta_sep);
    put(r.apriori.beta_l2);
    put(r.apriori.grad_beta_l2);
    put(r.apriori.beta_betaprime_l1);
    put(r.apriori.m_integral);
    put(r.apriori.n_integral);
    put(r.apriori.mu_mean);
    os << r.rejections << '\n';
  }
}

void write_ledger_csv(const std::filesystem::path& path, const RunLedger& ledger) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_ledger_csv(os, ledger);
}

namespace {

double time_tol(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

}  // namespace

double energy_identity_residual(const RunLedger& ledger, double t1, double t2) {
  const auto& rows = ledger.rows;
  if (rows.empty()) throw RangeError("energy identity: empty ledger");
  if (!(t1 < t2)) throw RangeError("energy identity: need t1 < t2");
  if (t1 < rows.front().t - time_tol(t1) || t2 > rows.back().t + time_tol(t2)) {
    throw RangeError("energy identity: [" + std::to_string(t1) + ", " + std::to_string(t2) +
                     "] is outside the ledger range [" + std::to_string(rows.front().t) + ", " +
                     std::to_string(rows.back().t) + "]");
  }
  std::size_t i1 = 0;
  while (i1 < rows.size() && rows[i1].t < t1 - time_tol(t1)) ++i1;
  std::size_t i2 = rows.size() - 1;
  while (i2 > 0 && rows[i2].t > t2 + time_tol(t2)) --i2;
  if (i1 >= i2) throw RangeError("energy identity: no accepted step inside the window");
  double dissipated = 0.0;
  for (std::size_t i = i1 + 1; i <= i2; ++i) dissipated += rows[i].dt * rows[i].grad_mu_sq;
  return std::abs(rows[i2].energy.total - rows[i1].energy.total + dissipated);
}

namespace {

double dual_distance(Spectral& sp, const ScalarField& a, const ScalarField& b) {
  ScalarField d = a;
  d -= b;
  d += -mean(d);
  if (d.max_abs() == 0.0) return 0.0;
  return sp.v0_dual_norm(d);
}

}  // namespace

CdepReport cdep_experiment(const ScalarField& u01, const ScalarField& u02,
                           const PotentialParams& p, const SolverConfig& cfg, double t_end) {
  require_same_grid(u01, u02);
  const double m1 = mean(u01);
  const double m2 = mean(u02);
  if (std::abs(m1 - m2) > 1e-12) {
    throw MeanMismatch("cdep: initial means differ by " + std::to_string(m1 - m2));
  }
  CdepReport rep;
  Stepper s1(u01.grid(), p, cfg);
  Stepper s2(u02.grid(), p, cfg);
  Spectral& sp = s1.model().spectral();

  const double d0 = dual_distance(sp, u01, u02);
  rep.times.push_back(0.0);
  rep.dual_distance.push_back(d0);
  if (d0 == 0.0) {
    rep.identical_inputs = true;
    rep.envelope_ok = true;
    return rep;
  }

  ScalarField u1 = u01;
  ScalarField u2 = u02;
  double e1 = s1.model().energy(u1).total;
  double e2 = s2.model().energy(u2).total;
  double t = 0.0;
  double dt = cfg.dt0;
  const double tiny = 1e-12 * std::max(1.0, t_end);
  while (t < t_end - tiny) {
    const bool last = t + dt >= t_end - tiny;
    const double h = last ? t_end - t : dt;
    bool ok = false;
    std::optional<StepResult> r1;
    std::optional<StepResult> r2;
    try {
      r1 = s1.step(u1, h, e1);
      r2 = s2.step(u2, h, e2);
      ok = r1->accepted && r2->accepted;
    } catch (const NewtonDivergence&) {
      if (h <= cfg.dt_min) throw;
    } catch (const GuardViolation&) {
      if (h <= cfg.dt_min) throw;
    } catch (const DomainError&) {
      if (h <= cfg.dt_min) throw;
    }
    if (!ok) {
      ++rep.rejections;
      if (h <= cfg.dt_min) throw StepFloorError("cdep: step rejected at dt_min");
      dt = std::max(cfg.dt_min, 0.5 * h);
      continue;
    }
    u1 = std::move(r1->field);
    u2 = std::move(r2->field);
    e1 = r1->energy_after;
    e2 = r2->energy_after;
    t = last ? t_end : t + h;
    dt = std::min(cfg.dt0, dt * cfg.growth_factor);
    rep.times.push_back(t);
    rep.dual_distance.push_back(dual_distance(sp, u1, u2));
  }

  const double t_fit = 5.0 * cfg.dt0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i < rep.times.size(); ++i) {
    const double ti = rep.times[i];
    if (ti < t_fit) continue;
    const double y = 2.0 * std::log(rep.dual_distance[i] / d0);
    num += ti * y;
    den += ti * ti;
  }
  rep.fitted_C = den > 0.0 ? num / den : 0.0;
  rep.envelope_ok = std::isfinite(rep.fitted_C);
  const double slope = rep.fitted_C + 1e-2 * std::abs(rep.fitted_C);
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double y = 2.0 * std::log(rep.dual_distance[i] / d0);
    if (!(y <= slope * rep.times[i] + 1e-12)) rep.envelope_ok = false;
  }
  return rep;
}

TruncationTable truncation_convergence(const ScalarField& u0, const PotentialParams& p,
                                       const SolverConfig& cfg, const std::vector<int>& levels,
                                       double t_end) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 3) throw ConfigError("truncation levels must be >= 3");
    if (i > 0 && levels[i] <= levels[i - 1]) {
      throw ConfigError("truncation levels must be strictly ascending");
    }
  }
  std::map<int, ScalarField> finals;
  auto run = [&](int n) -> const ScalarField& {
    auto it = finals.find(n);
    if (it != finals.end()) return it->second;
    const TruncationLevel lvl(n);
    SolverConfig c = cfg;
    c.truncation = lvl;
    c.guard_eps = std::min(cfg.guard_eps, 0.5 / n);
    const ScalarField start = regularize_initial(u0, lvl);
    Stepper s(u0.grid(), p, c);
    return finals.emplace(n, s.advance(start, t_end).field).first->second;
  };
  TruncationTable table;
  for (int n : levels) {
    ScalarField d = run(n);
    d -= run(2 * n);
    table.rows.push_back({n, l2_norm(d)});
  }
  table.decreasing = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (!(table.rows[i].distance < table.rows[i - 1].distance)) table.decreasing = false;
  }
  return table;
}

SeparationReport separation_report(const RunLedger& ledger, double tau) {
  const auto& rows = ledger.rows;
  if (rows.empty()) throw RangeError("separation report: empty ledger");
  if (tau < rows.front().t - time_tol(tau) || tau > rows.back().t + time_tol(tau)) {
    throw RangeError("separation report: tau = " + std::to_string(tau) +
                     " is outside the run horizon");
  }
  SeparationReport rep;
  rep.tau = tau;
  rep.delta_min = 1.0;
  for (const LedgerRow& r : rows) {
    if (r.t >= tau - time_tol(tau)) rep.delta_min = std::min(rep.delta_min, r.delta_sep);
  }
  rep.attained = rep.delta_min > 0.0;
  if (ledger.dim >= 3) {
    rep.guaranteed = false;
    rep.note = "no theoretical guarantee: strict separation is open in 3D";
  }
  return rep;
}

std::vector<DispersionRow> dispersion_experiment(const PotentialParams& p,
                                                 const std::vector<int>& ks, double amplitude,
                                                 std::size_t samples, double dt_scale) {
  const Grid grid = Grid::line(samples, 2.0 * std::numbers::pi, Boundary::PeriodicFourier);
  std::vector<DispersionRow> rows;
  for (int k : ks) {
    if (k < 1 || 2 * static_cast<std::size_t>(k) >= samples) {
      throw ConfigError("dispersion: wavenumber " + std::to_string(k) + " is not resolved");
    }
    const ScalarField basis = ScalarField::from_function(
        grid, [k](const std::array<double, 3>& x) { return std::cos(k * x[0]); });
    const double norm2 = inner(basis, basis);
    auto amp = [&](const ScalarField& u) { return inner(u, basis) / norm2; };

    SolverConfig cfg = with_default_stabilization(SolverConfig{}, p, 2.0 * amplitude);
    const double a = static_cast<double>(k) * k;
    const double sigma = dispersion_sigma(k, p);
    const double dt =
        dt_scale / (a * a * a + cfg.s1 * a * a + cfg.s2 * a + std::abs(sigma));
    const auto steps = static_cast<std::size_t>(std::ceil(1.0 / (std::abs(sigma) * dt)));
    cfg.dt0 = cfg.dt_min = cfg.dt_max = dt;
    Stepper stepper(grid, p, cfg);

    ScalarField u = basis;
    u *= amplitude;
    const double c0 = amp(u);
    for (std::size_t i = 0; i < steps; ++i) u = stepper.imex_update(u, dt);
    DispersionRow row;
    row.k = k;
    row.steps = steps;
    row.sigma_closed = sigma;
    row.sigma_measured = std::log(amp(u) / c0) / (static_cast<double>(steps) * dt);
    row.rel_error = std::abs(row.sigma_measured - sigma) / std::abs(sigma);
    rows.push_back(row);
  }
  return rows;
}

std::string report_json(const CdepReport& r) {
  nlohmann::ordered_json j;
  j["fitted_C"] = r.fitted_C;
  j["envelope_ok"] = r.envelope_ok;
  j["identical_inputs"] = r.identical_inputs;
  j["rejections"] = r.rejections;
  j["times"] = r.times;
  j["dual_distance"] = r.dual_distance;
  return j.dump(2);
}

std::string report_json(const TruncationTable& r) {
  nlohmann::ordered_json j;
  j["decreasing"] = r.decreasing;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const TruncationRow& row : r.rows) rows.push_back({{"n", row.n}, {"distance", row.distance}});
  j["rows"] = rows;
  return j.dump(2);
}

std::string report_json(const SeparationReport& r) {
  nlohmann::ordered_json j;
  j["tau"] = r.tau;
  j["delta_min"] = r.delta_min;
  j["attained"] = r.attained;
  j["guaranteed"] = r.guaranteed;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump(2);
}

}  // namespace fchlog
