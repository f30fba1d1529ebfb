#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fchlog/errors.hpp"
#include "fchlog_cli/commands.hpp"
#include "fchlog_cli/config.hpp"
#include "fchlog_cli/provenance.hpp"

using namespace fchlog;
using namespace fchlog::cli;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const char* kMinimal = R"([grid]
counts = 32
lengths = 2.0

[potential]
lambda = 3.0
eta = 1.0

[initial]
kind = constant
mean = 0.2

[solver]
t_end = 0.5
dt_max = 0.1
)";

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fchlog-cli-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& text) {
  const auto path = dir / "cfg.ini";
  std::ofstream(path) << text;
  return path;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("minimal config parses with defaults", "[cli]") {
  const RunConfig cfg = parse_config(kMinimal);
  CHECK(cfg.grid.size() == 32);
  CHECK(cfg.grid.bc() == Boundary::NeumannCosine);
  CHECK(cfg.potential.lambda == 3.0);
  CHECK(cfg.initial.kind == InitialKind::Constant);
  CHECK(cfg.t_end == 0.5);
  CHECK(cfg.solver.s1 > 0.0);
  CHECK(cfg.solver.s2 == 5.0);
  CHECK_FALSE(cfg.truncation.has_value());
}

TEST_CASE("config errors are reported as ConfigError", "[cli]") {
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[extra]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(replace(kMinimal, "counts = 32", "counts = abc")), ConfigError);
  CHECK_THROWS_AS(parse_config(replace(kMinimal, "lengths = 2.0", "lengths = -2.0")), ConfigError);
  CHECK_THROWS_AS(parse_config(replace(kMinimal, "t_end = 0.5", "t_end = 0")), ConfigError);
  CHECK_THROWS_WITH(parse_config(replace(kMinimal, "mean = 0.2", "mean = 1.0")),
                    ContainsSubstring("mass constraint"));
}

TEST_CASE("sweep parameters rederive stabilisation", "[cli]") {
  const RunConfig base = parse_config(kMinimal);
  const RunConfig other = with_parameters(base, 0.0, 0.0, 10);
  CHECK(other.potential.lambda == 0.0);
  CHECK(other.solver.s2 == 0.0);
  REQUIRE(other.truncation.has_value());
  CHECK(other.truncation->n() == 10);
}

TEST_CASE("constant run keeps mass to roundoff", "[cli]") {
  const auto dir = scratch("constant");
  std::vector<std::filesystem::path> written;
  const RunSummary s = run_into(parse_config(kMinimal), dir, written);
  CHECK(s.final_time == 0.5);
  CHECK(s.rejections == 0);
  CHECK(s.mass_drift <= 1e-14);
  CHECK(std::filesystem::exists(dir / "ledger.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes", "[cli]") {
  const auto dir = scratch("exit");
  Options opts;
  opts.out = dir / "out";
  opts.config = write_file(dir, replace(kMinimal, "mean = 0.2", "mean = 1.0"));
  CHECK(dispatch("run", opts) == kConfigFailure);
  opts.config = write_file(dir, kMinimal);
  CHECK(dispatch("run", opts) == kOk);
  CHECK(std::filesystem::exists(dir / "out" / "provenance.json"));
  opts.config = dir / "missing.ini";
  CHECK(dispatch("run", opts) == kConfigFailure);
  std::filesystem::remove_all(dir);
}

TEST_CASE("repeated runs write identical ledgers", "[cli]") {
  const auto dir = scratch("repeat");
  const std::string noisy = replace(kMinimal, "kind = constant", "kind = noise\namplitude = 0.05\nseed = 3");
  std::vector<std::filesystem::path> written;
  run_into(parse_config(noisy), dir / "a", written);
  run_into(parse_config(noisy), dir / "b", written);
  CHECK(sha256_file(dir / "a" / "ledger.csv") == sha256_file(dir / "b" / "ledger.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sha256 digests", "[cli]") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("shipped configs parse", "[cli]") {
  const char* dir = std::getenv("FCHLOG_CONFIG_DIR");
  if (dir == nullptr) SKIP("FCHLOG_CONFIG_DIR not set");
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    INFO(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
    ++n;
  }
  CHECK(n > 0);
}
