#include "fchlog_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "fchlog/diagnostics.hpp"
#include "fchlog/errors.hpp"
#include "fchlog/snapshot.hpp"
#include "fchlog_cli/provenance.hpp"
#include "fchlog_cli/verify.hpp"

namespace fchlog::cli {

namespace fs = std::filesystem;

namespace {

/// Records the ledger and writes cadence-based snapshots.
class RunSink : public LedgerSink {
 public:
  RunSink(Model& model, const RunConfig& cfg, fs::path dir, std::vector<fs::path>& written)
      : recorder_(model), cfg_(cfg), dir_(std::move(dir)), written_(written) {}

  void on_start(const ScalarField& u0, double t0) override {
    recorder_.on_start(u0, t0);
    snapshot(u0, t0);
  }
  void on_step(const ScalarField& u, double t, double dt, int rejections) override {
    recorder_.on_step(u, t, dt, rejections);
    ++steps_;
    if (cfg_.output.snapshot_every != 0 && steps_ % cfg_.output.snapshot_every == 0) {
      snapshot(u, t);
    }
  }
  const RunLedger& ledger() const { return recorder_.ledger(); }

 private:
  void snapshot(const ScalarField& u, double t) {
    if (cfg_.output.snapshot_every == 0) return;
    char name[32];
    std::snprintf(name, sizeof name, "snap_%08zu", steps_);
    auto [bin, meta] = write_snapshot(dir_ / cfg_.output.snapshot_dir / name, u, t,
                                      "step " + std::to_string(steps_));
    written_.push_back(bin);
    written_.push_back(meta);
  }

  RunRecorder recorder_;
  const RunConfig& cfg_;
  fs::path dir_;
  std::vector<fs::path>& written_;
  std::size_t steps_ = 0;
};

RunSummary summarize(const RunLedger& ledger, std::size_t steps, std::size_t rejections) {
  RunSummary s;
  if (ledger.rows.empty()) return s;
  const LedgerRow& last = ledger.rows.back();
  s.final_time = last.t;
  s.steps = steps;
  s.rejections = rejections;
  s.final_energy = last.energy.total;
  s.final_delta_sep = last.delta_sep;
  for (const LedgerRow& r : ledger.rows) {
    s.mass_drift = std::max(s.mass_drift, std::abs(r.mass - ledger.rows.front().mass));
  }
  return s;
}

nlohmann::ordered_json to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["final_time"] = s.final_time;
  j["steps"] = s.steps;
  j["rejections"] = s.rejections;
  j["final_energy"] = s.final_energy;
  j["final_delta_sep"] = s.final_delta_sep;
  j["mass_drift"] = s.mass_drift;
  return j;
}

fs::path write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
  if (text.empty() || text.back() != '\n') os << '\n';
  return path;
}

Provenance provenance_for(const std::string& command, const RunConfig& cfg, const Options& opts) {
  return Provenance(command, cfg.text, cfg.source.string(), cfg.initial.seed, opts.threads);
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const StepFloorError*>(&e)) return "StepFloorError";
  if (dynamic_cast<const NewtonDivergence*>(&e)) return "NewtonDivergence";
  if (dynamic_cast<const GuardViolation*>(&e)) return "GuardViolation";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const BoundOvershoot*>(&e)) return "BoundOvershoot";
  if (dynamic_cast<const MeanMismatch*>(&e)) return "MeanMismatch";
  if (dynamic_cast<const MeanError*>(&e)) return "MeanError";
  if (dynamic_cast<const OverflowSignal*>(&e)) return "OverflowSignal";
  if (dynamic_cast<const RangeError*>(&e)) return "RangeError";
  if (dynamic_cast<const ShapeError*>(&e)) return "ShapeError";
  return "Error";
}

}  // namespace

RunConfig resolve_config(const Options& opts) {
  RunConfig cfg = opts.config ? load_config(*opts.config) : parse_config("");
  if (opts.seed) cfg.initial.seed = *opts.seed;
  return cfg;
}

RunSummary run_into(const RunConfig& cfg, const fs::path& dir, std::vector<fs::path>& written) {
  fs::create_directories(dir);
  const ScalarField u0 = initial_field(cfg);
  Stepper stepper(cfg.grid, cfg.potential, cfg.solver);
  RunSink sink(stepper.model(), cfg, dir, written);
  const fs::path ledger_path = dir / cfg.output.ledger;
  AdvanceResult res{u0, 0.0, 0, 0};
  try {
    res = stepper.advance(u0, cfg.t_end, &sink, cfg.max_steps);
  } catch (...) {
    write_ledger_csv(ledger_path, sink.ledger());
    written.push_back(ledger_path);
    throw;
  }
  write_ledger_csv(ledger_path, sink.ledger());
  written.push_back(ledger_path);
  const RunSummary summary = summarize(sink.ledger(), res.steps, res.rejections);
  written.push_back(write_text(dir / cfg.output.summary, to_json(summary).dump(2)));
  return summary;
}

int cmd_run(const Options& opts) {
  const RunConfig cfg = resolve_config(opts);
  Provenance prov = provenance_for("run", cfg, opts);
  std::vector<fs::path> written;
  const RunSummary s = run_into(cfg, opts.out, written);
  prov.add(written);
  prov.write(opts.out);
  std::printf("run: t = %.6g after %zu steps (%zu rejections), E = %.12g, delta_sep = %.6g, "
              "mass drift = %.3g\n",
              s.final_time, s.steps, s.rejections, s.final_energy, s.final_delta_sep,
              s.mass_drift);
  return kOk;
}

int cmd_verify(const Options& opts) {
  const RunConfig cfg = resolve_config(opts);
  const auto results = run_invariant_suite(cfg.initial.seed);
  int failed = 0;
  for (const CheckResult& r : results) {
    std::printf("%s  %-48s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    if (!r.passed) ++failed;
  }
  std::printf("%zu checks, %d failed\n", results.size(), failed);
  if (failed == 0) return kOk;
  std::fprintf(stderr, "verify: failed invariants:\n");
  for (const CheckResult& r : results) {
    if (!r.passed) std::fprintf(stderr, "  %s\n", r.name.c_str());
  }
  return kCheckFailure;
}

int cmd_dispersion(const Options& opts) {
  const RunConfig cfg = resolve_config(opts);
  const auto& d = cfg.dispersion;
  Provenance prov = provenance_for("dispersion", cfg, opts);
  const auto rows = dispersion_experiment(cfg.potential, d.ks, d.amplitude, d.samples, d.dt_scale);
  std::string csv = "k,sigma_closed,sigma_measured,rel_error,steps\n";
  bool ok = true;
  char buf[160];
  for (const DispersionRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%zu\n", r.k, r.sigma_closed,
                  r.sigma_measured, r.rel_error, r.steps);
    csv += buf;
    std::printf("k = %d  sigma = %.10g  measured = %.10g  rel. error = %.3e\n", r.k,
                r.sigma_closed, r.sigma_measured, r.rel_error);
    ok = ok && r.rel_error <= d.tolerance;
  }
  prov.add(write_text(opts.out / "dispersion.csv", csv));
  prov.write(opts.out);
  return ok ? kOk : kCheckFailure;
}

int cmd_cdep(const Options& opts) {
  const RunConfig cfg = resolve_config(opts);
  Provenance prov = provenance_for("cdep", cfg, opts);
  const ScalarField u1 = initial_field(cfg);
  InitialSpec bump;
  bump.kind = InitialKind::SingleMode;
  bump.amplitude = cfg.cdep.perturbation;
  bump.mode = cfg.cdep.mode;
  ScalarField u2 = u1;
  u2 += generate(bump, cfg.grid);
  const CdepReport rep = cdep_experiment(u1, u2, cfg.potential, cfg.solver, cfg.cdep.t_end);
  prov.add(write_text(opts.out / "cdep.json", report_json(rep)));
  prov.write(opts.out);
  std::printf("cdep: fitted C = %.8g, envelope %s over %zu samples\n", rep.fitted_C,
              rep.envelope_ok ? "holds" : "violated", rep.times.size());
  return rep.envelope_ok ? kOk : kCheckFailure;
}

int cmd_sweep(const Options& opts) {
  const RunConfig base = resolve_config(opts);
  struct Job {
    RunConfig cfg;
    std::string name;
    int status = kOk;
    std::string message;
    RunSummary summary;
    std::vector<fs::path> written;
  };
  std::vector<Job> jobs;
  for (double lam : base.sweep.lambdas) {
    for (double eta : base.sweep.etas) {
      for (int n : base.sweep.truncations) {
        char name[96];
        std::snprintf(name, sizeof name, "lambda_%g_eta_%g_n_%d", lam, eta, n);
        jobs.push_back({with_parameters(base, lam, eta, n), name, kOk, {}, {}, {}});
      }
    }
  }
  Provenance prov = provenance_for("sweep", base, opts);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      Job& job = jobs[i];
      try {
        job.summary = run_into(job.cfg, opts.out / "sweep" / job.name, job.written);
      } catch (const ConfigError& e) {
        job.status = kConfigFailure;
        job.message = e.what();
      } catch (const SpecError& e) {
        job.status = kConfigFailure;
        job.message = e.what();
      } catch (const std::exception& e) {
        job.status = kSolverFailure;
        job.message = std::string(error_kind(e)) + ": " + e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(opts.threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  int status = kOk;
  for (Job& job : jobs) {
    nlohmann::ordered_json e;
    e["name"] = job.name;
    e["lambda"] = job.cfg.potential.lambda;
    e["eta"] = job.cfg.potential.eta;
    e["truncation"] = job.cfg.truncation ? job.cfg.truncation->n() : 0;
    e["status"] = job.status;
    if (job.status == kOk) {
      e["summary"] = to_json(job.summary);
    } else {
      e["error"] = job.message;
      std::fprintf(stderr, "sweep: %s failed: %s\n", job.name.c_str(), job.message.c_str());
    }
    j.push_back(e);
    prov.add(job.written);
    status = std::max(status, job.status);
  }
  prov.add(write_text(opts.out / "sweep.json", j.dump(2)));
  prov.write(opts.out);
  std::printf("sweep: %zu runs on %d threads\n", jobs.size(), nthreads);
  return status;
}

int cmd_init(const Options& opts) {
  const RunConfig cfg = resolve_config(opts);
  Provenance prov = provenance_for("init", cfg, opts);
  const ScalarField u0 = initial_field(cfg);
  auto [bin, meta] = write_snapshot(opts.out / "initial", u0, 0.0,
                                    std::string(to_string(cfg.initial.kind)));
  prov.add(bin);
  prov.add(meta);
  prov.write(opts.out);
  std::printf("init: mean = %.17g, min = %.17g, max = %.17g\n", mean(u0), u0.min(), u0.max());
  return kOk;
}

int dispatch(const std::string& command, const Options& opts) {
  try {
    if (command == "run") return cmd_run(opts);
    if (command == "verify") return cmd_verify(opts);
    if (command == "dispersion") return cmd_dispersion(opts);
    if (command == "cdep") return cmd_cdep(opts);
    if (command == "sweep") return cmd_sweep(opts);
    if (command == "init") return cmd_init(opts);
    std::fprintf(stderr, "unknown command '%s'\n", command.c_str());
    return kConfigFailure;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigFailure;
  } catch (const SpecError& e) {
    std::fprintf(stderr, "config error (initial data): %s\n", e.what());
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure (%s): %s\n", error_kind(e), e.what());
    return kSolverFailure;
  }
}

}  // namespace fchlog::cli
