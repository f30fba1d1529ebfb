#include <catch_amalgamated.hpp>

#include <cmath>

#include "fchlog/errors.hpp"
#include "fchlog/model.hpp"
#include "fchlog/potential.hpp"
#include "oracles.hpp"

using namespace fchlog;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("beta and its derivatives at reference points", "[potential]") {
  const BetaValues b = eval_beta(0.5);
  CHECK_THAT(b.value, WithinRel(oracle::kBetaHalf, 1e-15));
  CHECK_THAT(b.d1, WithinRel(oracle::kBeta1Half, 1e-15));
  CHECK_THAT(b.d2, WithinRel(oracle::kBeta2Half, 1e-15));
  CHECK_THAT(eval_beta(0.95).value, WithinRel(oracle::kBeta095, 1e-14));
  CHECK(eval_beta(0.0).value == 0.0);
  CHECK(eval_beta(0.0).d1 == 1.0);
}

TEST_CASE("potential values against closed forms", "[potential]") {
  CHECK_THAT(eval_F({0.0, 0.0}, 0.5), WithinRel(oracle::kFHalf, 1e-14));
  CHECK_THAT(eval_f({2.0, 0.0}, 0.5), WithinRel(oracle::kfHalfLambda2, 1e-14));
  CHECK_THAT(eval_g({1.0, -1.0}, 0.5).value, WithinRel(oracle::kgHalf, 1e-14));
  for (double lam : {0.0, 1.5, 3.0}) {
    for (int i = -19; i <= 19; ++i) {
      const double r = i / 20.0;
      CHECK_THAT(eval_F({lam, 0.0}, r), WithinAbs(oracle::log_potential(r, lam), 1e-14));
    }
  }
}

TEST_CASE("F is finite at the pure phases", "[potential]") {
  const PotentialParams p{2.0, 0.0};
  CHECK_THAT(eval_F(p, 1.0), WithinAbs(std::log(2.0) - 1.0, 1e-15));
  CHECK_THAT(eval_F(p, -1.0), WithinAbs(std::log(2.0) - 1.0, 1e-15));
  CHECK_THROWS_AS(eval_F(p, 1.0 + 1e-12), DomainError);
}

TEST_CASE("singular functions reject the closed ends", "[potential]") {
  CHECK_THROWS_AS(eval_beta(1.0), DomainError);
  CHECK_THROWS_AS(eval_beta(-1.0), DomainError);
  CHECK_THROWS_AS(eval_a(1.5), DomainError);
  CHECK_THROWS_AS(eval_g({1.0, 1.0}, -1.0), DomainError);
  CHECK_THROWS_AS(Nonlinearity::exact({0.0, 0.0}).local(1.0), DomainError);
}

TEST_CASE("a is twice beta'", "[potential]") {
  for (double r : {-0.9, -0.3, 0.0, 0.4, 0.99}) {
    const AValues a = eval_a(r);
    const BetaValues b = eval_beta(r);
    CHECK_THAT(a.a, WithinRel(2.0 * b.d1, 1e-15));
    CHECK_THAT(a.a1, WithinRel(2.0 * b.d2, 1e-14));
  }
}

TEST_CASE("beta'' via finite differences near the singularity", "[potential]") {
  const double r = 0.999;
  const double h = 1e-8;
  const double fd = (eval_beta(r + h).d1 - eval_beta(r - h).d1) / (2 * h);
  CHECK_THAT(eval_beta(r).d2, WithinRel(fd, 1e-5));
}

TEST_CASE("truncation level and clamp", "[potential]") {
  CHECK_THROWS_AS(TruncationLevel(2), ConfigError);
  const TruncationLevel lvl(10);
  CHECK(lvl.clamp_bound() == 0.9);
  CHECK(lvl.knee() == 0.95);
  CHECK(truncate(0.95, lvl) == 0.9);
  CHECK(truncate(-2.0, lvl) == -0.9);
  CHECK(truncate(0.3, lvl) == 0.3);
}

TEST_CASE("extended nonlinearity continues quadratically past the knee", "[potential]") {
  const Nonlinearity ext = Nonlinearity::extended({0.0, 0.0}, TruncationLevel(10));
  CHECK_THAT(ext.beta(2.0).value, WithinRel(oracle::kExtBeta2, 1e-13));
  CHECK_THAT(ext.beta(-2.0).value, WithinRel(-oracle::kExtBeta2, 1e-13));
  // inside the knee nothing changes
  CHECK(ext.beta(0.5).value == eval_beta(0.5).value);
  CHECK(ext.F(0.5) == eval_F({0.0, 0.0}, 0.5));
  // F stays an antiderivative of f outside
  const double h = 1e-6;
  for (double r : {0.97, 1.2, -1.5}) {
    const double fd = (ext.F(r + h) - ext.F(r - h)) / (2 * h);
    CHECK_THAT(fd, WithinRel(ext.f(r), 1e-7));
  }
}

TEST_CASE("superlinear weights", "[potential]") {
  CHECK_THAT(weight_M(oracle::kMArg), WithinRel(oracle::kMValue, 1e-14));
  CHECK(weight_M(0.0) == 0.0);
  CHECK_THAT(weight_N(1.0), WithinRel(std::log(std::log(std::exp(4.0) + 1.0)), 1e-15));
}

TEST_CASE("non-finite parameters are rejected", "[potential]") {
  CHECK_THROWS_AS(PotentialParams({std::nan(""), 0.0}).validate(), ConfigError);
  CHECK_THROWS_AS(Nonlinearity::exact({0.0, INFINITY}), ConfigError);
}
