#include <string>

#include <CLI11.hpp>

#include "fchlog_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for the sixth-order Cahn-Hilliard model with logarithmic potential"};
  app.require_subcommand(1);

  fchlog::cli::Options opts;
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  const char* names[] = {"run", "verify", "dispersion", "cdep", "sweep", "init"};
  const char* help[] = {
      "integrate a configuration and write ledger, snapshots and summary",
      "run the invariant suite and print a pass/fail table",
      "measure single-mode decay rates against the closed form",
      "continuous-dependence experiment on a perturbed pair",
      "run a grid of (lambda, eta, n) configurations",
      "write the initial field as a snapshot",
  };
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config, "INI configuration file");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--threads", opts.threads, "worker threads for sweeps")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "override initial.seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fchlog::cli::kConfigFailure;
  }
  if (!config.empty()) opts.config = config;
  opts.out = out;
  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--seed") > 0) opts.seed = seed;
    return fchlog::cli::dispatch(sub->get_name(), opts);
  }
  return fchlog::cli::kConfigFailure;
}
