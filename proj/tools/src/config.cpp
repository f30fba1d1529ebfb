#include "fchlog_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fchlog/errors.hpp"

namespace fchlog::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"grid", {"dim", "counts", "lengths", "bc"}},
      {"potential", {"lambda", "eta", "truncation"}},
      {"initial",
       {"kind", "mean", "amplitude", "seed", "position", "width", "mode", "cutoff", "regularize"}},
      {"solver",
       {"scheme", "dt0", "dt_min", "dt_max", "s1", "s2", "stabilization_range", "energy_tol",
        "growth_factor", "newton_tol", "newton_max_iters", "guard_eps", "t_end", "max_steps",
        "dealias"}},
      {"output", {"ledger", "summary", "snapshot_every", "snapshot_dir"}},
      {"dispersion", {"k", "amplitude", "samples", "dt_scale", "tolerance"}},
      {"cdep", {"perturbation", "mode", "t_end"}},
      {"sweep", {"lambda", "eta", "truncation"}},
  };
  return s;
}

std::string where(const std::string& section, const std::string& key) {
  return section + "." + key;
}

template <class T>
T convert(const std::string& raw, const std::string& name) {
  std::istringstream is(raw);
  T value{};
  is >> value;
  if (!is.fail() && !is.eof()) is >> std::ws;
  if (is.fail() || !is.eof()) {
    throw ConfigError(name + ": cannot parse '" + raw + "'");
  }
  return value;
}

bool convert_bool(const std::string& raw, const std::string& name) {
  if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
  if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
  throw ConfigError(name + ": expected a boolean, got '" + raw + "'");
}

template <class T>
std::vector<T> convert_list(const std::string& raw, const std::string& name) {
  std::vector<T> out;
  std::string item;
  std::istringstream is(raw);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError(name + ": empty list entry");
    out.push_back(convert<T>(item.substr(b, e - b + 1), name));
  }
  if (out.empty()) throw ConfigError(name + ": empty list");
  return out;
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (!tree_) return std::nullopt;
    auto v = tree_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return *v;
  }
  template <class T>
  T get(const std::string& key, T fallback) const {
    auto r = raw(key);
    return r ? convert<T>(*r, where(name_, key)) : fallback;
  }
  template <class T>
  std::optional<T> maybe(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    return convert<T>(*r, where(name_, key));
  }
  bool flag(const std::string& key, bool fallback) const {
    auto r = raw(key);
    return r ? convert_bool(*r, where(name_, key)) : fallback;
  }
  template <class T>
  std::optional<std::vector<T>> list(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    return convert_list<T>(*r, where(name_, key));
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

void check_keys(const pt::ptree& root) {
  for (const auto& [section, body] : root) {
    auto it = schema().find(section);
    if (body.empty()) {
      throw ConfigError("key '" + section + "' must belong to a section");
    }
    if (it == schema().end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) {
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
      }
    }
  }
}

}  // namespace

void resolve_stabilization(RunConfig& cfg) {
  cfg.solver.truncation = cfg.truncation;
  cfg.solver = with_default_stabilization(cfg.solver, cfg.potential, cfg.stabilization_range);
  if (cfg.s1_override) cfg.solver.s1 = *cfg.s1_override;
  if (cfg.s2_override) cfg.solver.s2 = *cfg.s2_override;
  cfg.solver.validate();
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& source) {
  pt::ptree root;
  try {
    std::istringstream is(text);
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config syntax: " + std::string(e.what()));
  }
  check_keys(root);
  auto section = [&](const std::string& name) {
    auto child = root.get_child_optional(name);
    return Section(child ? &*child : nullptr, name);
  };

  RunConfig cfg;
  cfg.source = source;
  cfg.text = text;

  const Section grid = section("grid");
  const auto counts = grid.list<std::size_t>("counts").value_or(std::vector<std::size_t>{64});
  const auto lengths = grid.list<double>("lengths").value_or(std::vector<double>{1.0});
  const int dim = grid.get<int>("dim", static_cast<int>(counts.size()));
  if (static_cast<std::size_t>(dim) != counts.size() ||
      static_cast<std::size_t>(dim) != lengths.size()) {
    throw ConfigError("grid: dim, counts and lengths must agree in length");
  }
  for (double L : lengths) {
    if (!(L > 0.0)) throw ConfigError("grid.lengths must be positive");
  }
  try {
    cfg.grid = Grid(counts, lengths, boundary_from_string(grid.get<std::string>("bc", "neumann")));
  } catch (const ShapeError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  const Section pot = section("potential");
  cfg.potential.lambda = pot.get<double>("lambda", 0.0);
  cfg.potential.eta = pot.get<double>("eta", 0.0);
  try {
    cfg.potential.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  if (auto n = pot.maybe<int>("truncation"); n && *n != 0) cfg.truncation = TruncationLevel(*n);

  const Section init = section("initial");
  cfg.initial.kind = initial_kind_from_string(init.get<std::string>("kind", "constant"));
  cfg.initial.mean_m = init.get<double>("mean", 0.0);
  cfg.initial.amplitude = init.get<double>("amplitude", 0.0);
  cfg.initial.seed = init.get<std::uint64_t>("seed", 0);
  cfg.initial.position = init.get<double>("position", 0.5 * cfg.grid.length(0));
  cfg.initial.width = init.get<double>("width", 0.05 * cfg.grid.length(0));
  cfg.initial.mode = init.get<int>("mode", 1);
  cfg.initial.cutoff = init.get<int>("cutoff", 8);
  cfg.regularize = init.flag("regularize", cfg.truncation.has_value());
  if (cfg.regularize && !cfg.truncation) {
    throw ConfigError("initial.regularize needs potential.truncation");
  }
  if (!(std::abs(cfg.initial.mean_m) < 1.0)) {
    throw ConfigError("initial.mean = " + std::to_string(cfg.initial.mean_m) +
                      " violates the mass constraint -1 < m < 1");
  }
  try {
    cfg.initial.validate();
  } catch (const SpecError& e) {
    throw ConfigError(std::string("initial: ") + e.what());
  }

  const Section sol = section("solver");
  SolverConfig& s = cfg.solver;
  s.scheme = scheme_from_string(sol.get<std::string>("scheme", "imex"));
  s.dt0 = sol.get<double>("dt0", s.dt0);
  s.dt_min = sol.get<double>("dt_min", s.dt_min);
  s.dt_max = sol.get<double>("dt_max", s.dt_max);
  s.energy_tol = sol.get<double>("energy_tol", s.energy_tol);
  s.growth_factor = sol.get<double>("growth_factor", s.growth_factor);
  s.newton_tol = sol.get<double>("newton_tol", s.newton_tol);
  s.newton_max_iters = sol.get<int>("newton_max_iters", s.newton_max_iters);
  s.guard_eps = sol.get<double>("guard_eps", s.guard_eps);
  s.dealias_padding = sol.flag("dealias", false);
  cfg.s1_override = sol.maybe<double>("s1");
  cfg.s2_override = sol.maybe<double>("s2");
  cfg.stabilization_range = sol.maybe<double>("stabilization_range");
  if (cfg.stabilization_range && !(*cfg.stabilization_range >= 0.0 && *cfg.stabilization_range < 1.0)) {
    throw ConfigError("solver.stabilization_range must lie in [0, 1)");
  }
  cfg.t_end = sol.get<double>("t_end", cfg.t_end);
  if (!(cfg.t_end > 0.0)) throw ConfigError("solver.t_end must be positive");
  cfg.max_steps = sol.get<std::size_t>("max_steps", 0);
  resolve_stabilization(cfg);

  const Section out = section("output");
  cfg.output.ledger = out.get<std::string>("ledger", cfg.output.ledger);
  cfg.output.summary = out.get<std::string>("summary", cfg.output.summary);
  cfg.output.snapshot_every = out.get<std::size_t>("snapshot_every", 0);
  cfg.output.snapshot_dir = out.get<std::string>("snapshot_dir", cfg.output.snapshot_dir);

  const Section disp = section("dispersion");
  if (auto ks = disp.list<int>("k")) cfg.dispersion.ks = *ks;
  cfg.dispersion.amplitude = disp.get<double>("amplitude", cfg.dispersion.amplitude);
  cfg.dispersion.samples = disp.get<std::size_t>("samples", cfg.dispersion.samples);
  cfg.dispersion.dt_scale = disp.get<double>("dt_scale", cfg.dispersion.dt_scale);
  cfg.dispersion.tolerance = disp.get<double>("tolerance", cfg.dispersion.tolerance);

  const Section cd = section("cdep");
  cfg.cdep.perturbation = cd.get<double>("perturbation", cfg.cdep.perturbation);
  cfg.cdep.mode = cd.get<int>("mode", cfg.cdep.mode);
  cfg.cdep.t_end = cd.get<double>("t_end", cfg.cdep.t_end);
  if (!(cfg.cdep.t_end > 0.0)) throw ConfigError("cdep.t_end must be positive");

  const Section sw = section("sweep");
  cfg.sweep.lambdas = sw.list<double>("lambda").value_or(std::vector<double>{cfg.potential.lambda});
  cfg.sweep.etas = sw.list<double>("eta").value_or(std::vector<double>{cfg.potential.eta});
  cfg.sweep.truncations = sw.list<int>("truncation").value_or(
      std::vector<int>{cfg.truncation ? cfg.truncation->n() : 0});
  for (int n : cfg.sweep.truncations) {
    if (n != 0) (void)TruncationLevel(n);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path);
}

RunConfig with_parameters(const RunConfig& base, double lambda, double eta, int truncation) {
  RunConfig cfg = base;
  cfg.potential = {lambda, eta};
  cfg.potential.validate();
  if (truncation != 0) {
    cfg.truncation = TruncationLevel(truncation);
    cfg.solver.guard_eps = std::min(cfg.solver.guard_eps, 0.5 / truncation);
  } else {
    cfg.truncation.reset();
  }
  cfg.regularize = cfg.truncation.has_value();
  resolve_stabilization(cfg);
  return cfg;
}

ScalarField initial_field(const RunConfig& cfg) {
  ScalarField u0 = generate(cfg.initial, cfg.grid);
  if (cfg.regularize && cfg.truncation) u0 = regularize_initial(u0, *cfg.truncation);
  return u0;
}

}  // namespace fchlog::cli
