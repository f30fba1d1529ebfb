#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fchlog/errors.hpp"
#include "fchlog/initdata.hpp"
#include "fchlog/spectral.hpp"

using namespace fchlog;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

InitialSpec make(InitialKind kind, double m, double amp, std::uint64_t seed = 1) {
  InitialSpec s;
  s.kind = kind;
  s.mean_m = m;
  s.amplitude = amp;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("kind names", "[initdata]") {
  CHECK(initial_kind_from_string("noise") == InitialKind::BandLimitedNoise);
  CHECK(initial_kind_from_string("tanh") == InitialKind::TanhInterface);
  CHECK(initial_kind_from_string("mode") == InitialKind::SingleMode);
  CHECK(to_string(InitialKind::Constant) == "constant");
  CHECK_THROWS_AS(initial_kind_from_string("gaussian"), ConfigError);
}

TEST_CASE("every kind hits its mean and amplitude", "[initdata]") {
  const Grid g({64, 32}, {2.0, 1.0}, Boundary::NeumannCosine);
  for (InitialKind k : {InitialKind::Constant, InitialKind::TanhInterface,
                        InitialKind::BandLimitedNoise, InitialKind::SingleMode}) {
    const ScalarField u = generate(make(k, -0.3, 0.4), g);
    CHECK_THAT(mean(u), WithinAbs(-0.3, 1e-12));
    CHECK(u.max_abs() <= 1.0 - 1e-6);
    if (k == InitialKind::BandLimitedNoise) {
      ScalarField d = u;
      d += 0.3;
      CHECK_THAT(d.max_abs(), WithinRel(0.4, 1e-12));
    }
  }
}

TEST_CASE("noise is reproducible and seed dependent", "[initdata]") {
  const Grid g = Grid::line(128, 1.0, Boundary::PeriodicFourier);
  const ScalarField a = generate(make(InitialKind::BandLimitedNoise, 0.1, 0.2, 9), g);
  const ScalarField b = generate(make(InitialKind::BandLimitedNoise, 0.1, 0.2, 9), g);
  const ScalarField c = generate(make(InitialKind::BandLimitedNoise, 0.1, 0.2, 10), g);
  bool same = true;
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i] == b[i];
    differs = differs || a[i] != c[i];
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("noise is band limited", "[initdata]") {
  const Grid g = Grid::line(64, 1.0, Boundary::NeumannCosine);
  InitialSpec s = make(InitialKind::BandLimitedNoise, 0.0, 0.5, 4);
  s.cutoff = 5;
  const ScalarField u = generate(s, g);
  Spectral sp(g);
  const Spectrum c = sp.forward(u);
  for (std::size_t k = 6; k < c.size(); ++k) REQUIRE(std::abs(c[k]) < 1e-14);
}

TEST_CASE("invalid recipes", "[initdata]") {
  const Grid g = Grid::line(32, 1.0, Boundary::NeumannCosine);
  CHECK_THROWS_AS(generate(make(InitialKind::Constant, 1.0, 0.0), g), SpecError);
  CHECK_THROWS_AS(generate(make(InitialKind::Constant, -1.2, 0.0), g), SpecError);
  CHECK_THROWS_AS(generate(make(InitialKind::BandLimitedNoise, 0.6, 0.5), g), SpecError);
  InitialSpec s = make(InitialKind::SingleMode, 0.0, 0.1);
  s.mode = 16;
  CHECK_THROWS_AS(generate(s, g), SpecError);
  s.mode = 0;
  CHECK_THROWS_AS(generate(s, g), SpecError);
  s = make(InitialKind::TanhInterface, 0.0, 0.5);
  s.width = 0.0;
  CHECK_THROWS_AS(generate(s, g), SpecError);
}

TEST_CASE("regularisation scales the mean and keeps the bound", "[initdata]") {
  const Grid g = Grid::line(256, 1.0, Boundary::NeumannCosine);
  InitialSpec s = make(InitialKind::BandLimitedNoise, 0.3, 0.6, 2);
  s.cutoff = 10;
  const ScalarField u0 = generate(s, g);
  for (int n : {10, 20, 40, 80}) {
    const ScalarField v = regularize_initial(u0, TruncationLevel(n));
    CHECK_THAT(mean(v), WithinAbs((1.0 - 2.0 / n) * 0.3, 1e-13));
    CHECK(v.max_abs() <= 1.0 - 2.0 / n + 1e-8 * u0.max_abs());
  }
}

TEST_CASE("regularisation of a constant is exact", "[initdata]") {
  const Grid g = Grid::line(32, 1.0, Boundary::NeumannCosine);
  const ScalarField v = regularize_initial(ScalarField(g, 0.5), TruncationLevel(10));
  for (std::size_t i = 0; i < v.size(); ++i) REQUIRE(v[i] == 0.5 * 0.8);
}

TEST_CASE("regularisation rejects states beyond the pure phases", "[initdata]") {
  const Grid g = Grid::line(32, 1.0, Boundary::NeumannCosine);
  ScalarField u(g, 0.0);
  u[0] = 1.5;
  CHECK_THROWS_AS(regularize_initial(u, TruncationLevel(10)), DomainError);
}

TEST_CASE("regularisation flags under-resolved data", "[initdata]") {
  const Grid g = Grid::line(64, 1.0, Boundary::NeumannCosine);
  ScalarField u(g, -1.0);
  for (std::size_t i = 32; i < 64; ++i) u[i] = 1.0;
  CHECK_THROWS_AS(regularize_initial(u, TruncationLevel(100000)), BoundOvershoot);
}
