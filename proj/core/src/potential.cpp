#include "fchlog/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fchlog/errors.hpp"

namespace fchlog {

namespace {

void require_open(double r, const char* what) {
  if (!(std::abs(r) < 1.0)) {
    throw DomainError(std::string(what) + ": argument " + std::to_string(r) +
                      " outside (-1, 1)");
  }
}

// (1 - r)(1 + r) keeps full relative accuracy as |r| -> 1.
double one_minus_sq(double r) { return (1.0 - r) * (1.0 + r); }

// x ln x with the continuous extension 0 at x = 0.
double xlogx_shifted(double x, double log1p_arg) {
  return x == 0.0 ? 0.0 : x * std::log1p(log1p_arg);
}

}  // namespace

void PotentialParams::validate() const {
  if (!std::isfinite(lambda) || !std::isfinite(eta)) {
    throw ConfigError("potential parameters lambda and eta must be finite");
  }
}

TruncationLevel::TruncationLevel(int n) : n_(n) {
  if (n < 3) {
    throw ConfigError("truncation level must be >= 3, got " + std::to_string(n));
  }
}

BetaValues eval_beta(double r) {
  require_open(r, "beta");
  const double q = one_minus_sq(r);
  return {std::atanh(r), 1.0 / q, 2.0 * r / (q * q)};
}

double eval_beta3(double r) {
  require_open(r, "beta'''");
  const double q = one_minus_sq(r);
  return 2.0 * (1.0 + 3.0 * r * r) / (q * q * q);
}

double eval_F(const PotentialParams& p, double r) {
  if (!(std::abs(r) <= 1.0)) {
    throw DomainError("F: argument " + std::to_string(r) + " outside [-1, 1]");
  }
  const double entropy =
      0.5 * xlogx_shifted(1.0 + r, r) + 0.5 * xlogx_shifted(1.0 - r, -r);
  return entropy - 0.5 * p.lambda * r * r;
}

double eval_f(const PotentialParams& p, double r) {
  require_open(r, "f");
  return std::atanh(r) - p.lambda * r;
}

AValues eval_a(double r) {
  require_open(r, "a");
  const double q = one_minus_sq(r);
  return {2.0 / q, 4.0 * r / (q * q), 4.0 * (1.0 + 3.0 * r * r) / (q * q * q)};
}

GValues eval_g(const PotentialParams& p, double r) {
  const auto b = eval_beta(r);
  const double lam = p.lambda;
  const double eta = p.eta;
  const double g = -lam * r * b.d1 + (eta - lam) * b.value + (lam * lam - lam * eta) * r;
  const double g1 = -lam * r * b.d2 + (eta - 2.0 * lam) * b.d1 + lam * lam - lam * eta;
  return {g, g1};
}

double truncate(double r, TruncationLevel lvl) {
  const double b = lvl.clamp_bound();
  return std::max(-b, std::min(r, b));
}

Nonlinearity::Nonlinearity(const PotentialParams& p, std::optional<TruncationLevel> lvl)
    : params_(p), level_(lvl) {
  params_.validate();
  if (!level_) return;
  const auto make_knee = [&](double k) {
    Knee kn{};
    kn.at = k;
    kn.beta = eval_beta(k);
    kn.beta3 = eval_beta3(k);
    kn.g = eval_g(p, k);
    kn.g2 = (p.eta - 3.0 * p.lambda) * kn.beta.d2 - p.lambda * k * kn.beta3;
    kn.F = eval_F(p, k);
    return kn;
  };
  upper_ = make_knee(level_->knee());
  lower_ = make_knee(-level_->knee());
}

Nonlinearity Nonlinearity::exact(const PotentialParams& p) { return {p, std::nullopt}; }

Nonlinearity Nonlinearity::extended(const PotentialParams& p, TruncationLevel lvl) {
  return {p, lvl};
}

Nonlinearity extended_nonlinearity(const PotentialParams& p, TruncationLevel lvl) {
  return Nonlinearity::extended(p, lvl);
}

LocalValues Nonlinearity::local(double r) const {
  if (!level_ || std::abs(r) <= level_->knee()) {
    const auto b = eval_beta(r);
    const double lam = params_.lambda;
    const double eta = params_.eta;
    return {b.value, b.d1, b.d2,
            -lam * r * b.d1 + (eta - lam) * b.value + (lam * lam - lam * eta) * r,
            -lam * r * b.d2 + (eta - 2.0 * lam) * b.d1 + lam * lam - lam * eta};
  }
  const Knee& k = knee_for(r);
  const double d = r - k.at;
  return {k.beta.value + d * (k.beta.d1 + 0.5 * d * k.beta.d2),
          k.beta.d1 + d * k.beta.d2,
          k.beta.d2,
          k.g.value + d * (k.g.d1 + 0.5 * d * k.g2),
          k.g.d1 + d * k.g2};
}

BetaValues Nonlinearity::beta(double r) const {
  if (!level_ || std::abs(r) <= level_->knee()) return eval_beta(r);
  const Knee& k = knee_for(r);
  const double d = r - k.at;
  return {k.beta.value + d * (k.beta.d1 + 0.5 * d * k.beta.d2), k.beta.d1 + d * k.beta.d2,
          k.beta.d2};
}

GValues Nonlinearity::g(double r) const {
  if (!level_ || std::abs(r) <= level_->knee()) return eval_g(params_, r);
  const Knee& k = knee_for(r);
  const double d = r - k.at;
  return {k.g.value + d * (k.g.d1 + 0.5 * d * k.g2), k.g.d1 + d * k.g2};
}

double Nonlinearity::F(double r) const {
  if (!level_ || std::abs(r) <= level_->knee()) return eval_F(params_, r);
  const Knee& k = knee_for(r);
  const double d = r - k.at;
  const double beta_part =
      d * (k.beta.value + d * (0.5 * k.beta.d1 + d * k.beta.d2 / 6.0));
  return k.F + beta_part - 0.5 * params_.lambda * (r * r - k.at * k.at);
}

}  // namespace fchlog
