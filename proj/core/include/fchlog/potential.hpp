#pragma once

#include <optional>

namespace fchlog {

/// Convexity shift `lambda` of the logarithmic potential and the coupling `eta`
/// between the Willmore term and the Cahn-Hilliard energy. Any finite values.
struct PotentialParams {
  double lambda = 0.0;
  double eta = 0.0;

  void validate() const;
};

/// Approximation level n >= 3. States are clamped to [-1 + 1/n, 1 - 1/n] and the
/// singular functions are replaced past the knee +-(1 - 1/(2n)).
class TruncationLevel {
 public:
  explicit TruncationLevel(int n);

  int n() const { return n_; }
  double clamp_bound() const { return 1.0 - 1.0 / n_; }
  double knee() const { return 1.0 - 0.5 / n_; }

  friend bool operator==(TruncationLevel, TruncationLevel) = default;

 private:
  int n_;
};

struct BetaValues {
  double value;
  double d1;
  double d2;
};

struct AValues {
  double a;
  double a1;
  double a2;
};

struct GValues {
  double value;
  double d1;
};

/// beta(r) = atanh(r) and its first two derivatives. Throws DomainError for |r| >= 1.
BetaValues eval_beta(double r);

/// Third derivative of beta; used for the curvature of g at the knee.
double eval_beta3(double r);

/// Logarithmic potential on the closed interval [-1, 1]; F(+-1) = ln 2 - lambda/2.
double eval_F(const PotentialParams& p, double r);

/// f = F' = beta(r) - lambda r on (-1, 1).
double eval_f(const PotentialParams& p, double r);

/// a = 2 beta' together with a' and a''.
AValues eval_a(double r);

/// Lower-order remainder g of the single-equation chemical potential, and g'.
GValues eval_g(const PotentialParams& p, double r);

/// Clamp onto [-1 + 1/n, 1 - 1/n].
double truncate(double r, TruncationLevel lvl);

/// Everything the field-level model needs at one sample.
struct LocalValues {
  double beta;
  double beta1;
  double beta2;
  double g;
  double g1;
};

/// Pointwise evaluators for beta, beta', beta'', g, g', f and F.
///
/// In exact mode these are the singular functions and throw DomainError outside
/// (-1, 1). In extended mode they coincide with the exact functions on
/// [-knee, knee] and continue past the knee as second-order Taylor polynomials,
/// so they are finite and C^2 on the whole real line. F is continued as the
/// antiderivative of the continued f, which keeps mu the exact variation of the
/// energy in both modes.
class Nonlinearity {
 public:
  static Nonlinearity exact(const PotentialParams& p);
  static Nonlinearity extended(const PotentialParams& p, TruncationLevel lvl);

  const PotentialParams& params() const { return params_; }
  const std::optional<TruncationLevel>& truncation() const { return level_; }
  bool is_extended() const { return level_.has_value(); }

  LocalValues local(double r) const;
  BetaValues beta(double r) const;
  GValues g(double r) const;
  double f(double r) const { return beta(r).value - params_.lambda * r; }
  double F(double r) const;

 private:
  struct Knee {
    double at;
    BetaValues beta;
    double beta3;
    GValues g;
    double g2;
    double F;
  };

  Nonlinearity(const PotentialParams& p, std::optional<TruncationLevel> lvl);
  const Knee& knee_for(double r) const { return r > 0 ? upper_ : lower_; }

  PotentialParams params_;
  std::optional<TruncationLevel> level_;
  Knee upper_{};
  Knee lower_{};
};

/// The C^2 extensions of a truncation level.
Nonlinearity extended_nonlinearity(const PotentialParams& p, TruncationLevel lvl);

}  // namespace fchlog
