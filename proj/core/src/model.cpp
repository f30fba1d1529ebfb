#include "fchlog/model.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fchlog/errors.hpp"

namespace fchlog {

std::string_view to_string(MuFormulation form) {
  switch (form) {
    case MuFormulation::Cascade: return "cascade";
    case MuFormulation::Uom: return "uom";
    case MuFormulation::Uom1: return "uom1";
    case MuFormulation::Uom2: return "uom2";
    case MuFormulation::Uom3: return "uom3";
  }
  return "?";
}

double weight_M(double r) { return r * std::sqrt(std::log1p(r)); }

double weight_N(double r) { return r * std::log(std::log(std::exp(4.0) + r)); }

struct Model::Derived {
  ScalarField lap;
  ScalarField bilap;
  ScalarField grad_sq;
  std::vector<LocalValues> local;
};

Model::Model(const Grid& grid, Nonlinearity nl, bool padded)
    : spectral_(grid), nl_(std::move(nl)) {
  if (padded) fine_ = std::make_unique<Model>(refined(grid, 2), nl_, false);
}

Model::~Model() = default;
Model::Model(Model&&) noexcept = default;
Model& Model::operator=(Model&&) noexcept = default;

void Model::require_admissible(const ScalarField& u, const char* what) const {
  if (nl_.is_extended()) return;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(std::abs(u[i]) < 1.0)) {
      throw DomainError(std::string(what) + ": sample " + std::to_string(i) + " has u = " +
                        std::to_string(u[i]) + ", outside (-1, 1)");
    }
  }
}

Model::Derived Model::derive(const ScalarField& u) {
  require_admissible(u, "model");
  const Spectrum s = spectral_.forward_fluctuation(u);
  const auto eig = spectral_.eigenvalues();
  Spectrum work(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) work[k] = -eig[k] * s[k];
  ScalarField lap = spectral_.backward(work);
  for (std::size_t k = 0; k < s.size(); ++k) work[k] = eig[k] * eig[k] * s[k];
  ScalarField bilap = spectral_.backward(work);
  ScalarField grad_sq(grid());
  for (int a = 0; a < grid().dim(); ++a) {
    const ScalarField d = spectral_.partial(s, a);
    for (std::size_t i = 0; i < grad_sq.size(); ++i) grad_sq[i] += d[i] * d[i];
  }
  std::vector<LocalValues> local(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) local[i] = nl_.local(u[i]);
  return {std::move(lap), std::move(bilap), std::move(grad_sq), std::move(local)};
}

ScalarField Model::omega(const ScalarField& u) {
  require_admissible(u, "omega");
  ScalarField w = spectral_.laplacian(u);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = -w[i] + nl_.f(u[i]);
  return w;
}

ScalarField Model::mu(const ScalarField& u, MuFormulation form) {
  if (fine_) return spectral_.restrict_from(fine_->spectral(), fine_->mu(spectral_.prolong(u, fine_->spectral()), form));

  const double lam = params().lambda;
  const double eta = params().eta;
  if (form == MuFormulation::Cascade) {
    const ScalarField w = omega(u);
    ScalarField out = spectral_.laplacian(w);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double fprime = nl_.beta(u[i]).d1 - lam;
      out[i] = -out[i] + fprime * w[i] + eta * w[i];
    }
    return out;
  }

  const Derived d = derive(u);
  ScalarField out(grid());
  ScalarField lap_beta(grid());
  if (form == MuFormulation::Uom || form == MuFormulation::Uom1) {
    ScalarField b(grid());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = d.local[i].beta;
    lap_beta = spectral_.laplacian(b);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const LocalValues& v = d.local[i];
    const double common = d.bilap[i] + v.beta * v.beta1 + (2.0 * lam - eta) * d.lap[i] + v.g;
    double singular = 0.0;
    switch (form) {
      case MuFormulation::Uom:
        singular = -lap_beta[i] - v.beta1 * d.lap[i];
        break;
      case MuFormulation::Uom1:
        singular = -2.0 * lap_beta[i] + v.beta2 * d.grad_sq[i];
        break;
      case MuFormulation::Uom2:
        singular = -2.0 * v.beta1 * d.lap[i] - v.beta2 * d.grad_sq[i];
        break;
      case MuFormulation::Uom3: {
        const AValues a = nl_.is_extended() ? AValues{2.0 * v.beta1, 2.0 * v.beta2, 0.0}
                                            : eval_a(u[i]);
        singular = -a.a * d.lap[i] - 0.5 * a.a1 * d.grad_sq[i];
        break;
      }
      case MuFormulation::Cascade:
        break;
    }
    out[i] = common + singular;
  }
  return out;
}

ScalarField Model::mu_remainder(const ScalarField& u) {
  if (fine_) {
    return spectral_.restrict_from(fine_->spectral(),
                                   fine_->mu_remainder(spectral_.prolong(u, fine_->spectral())));
  }
  const double lam = params().lambda;
  const double eta = params().eta;
  const Derived d = derive(u);
  ScalarField b(grid());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = d.local[i].beta;
  ScalarField out = spectral_.laplacian(b);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const LocalValues& v = d.local[i];
    out[i] = -2.0 * out[i] + v.beta2 * d.grad_sq[i] + v.beta * v.beta1 +
             (2.0 * lam - eta) * d.lap[i] + v.g;
  }
  return out;
}

EnergyBreakdown Model::energy(const ScalarField& u) {
  if (fine_) return fine_->energy(spectral_.prolong(u, fine_->spectral()));
  const double eta = params().eta;
  EnergyBreakdown e;
  bool touches_pure_phase = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (nl_.is_extended()) continue;
    if (std::abs(u[i]) > 1.0 || std::isnan(u[i])) {
      throw DomainError("energy: sample " + std::to_string(i) + " has u = " +
                        std::to_string(u[i]) + ", outside [-1, 1]");
    }
    if (std::abs(u[i]) == 1.0) touches_pure_phase = true;
  }
  ScalarField pot(grid());
  for (std::size_t i = 0; i < u.size(); ++i) pot[i] = nl_.F(u[i]);
  e.ch_pot = eta * integral(pot);
  e.ch_grad = eta * 0.5 * spectral_.h1_seminorm(u) * spectral_.h1_seminorm(u);
  if (touches_pure_phase) {
    // f is infinite at a pure phase, so the Willmore term diverges.
    e.willmore = std::numeric_limits<double>::infinity();
  } else {
    const ScalarField w = omega(u);
    e.willmore = 0.5 * inner(w, w);
  }
  e.total = e.willmore + e.ch_grad + e.ch_pot;
  return e;
}

double Model::mu_mean(const ScalarField& u) {
  const Derived d = derive(u);
  ScalarField integrand(grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const LocalValues& v = d.local[i];
    integrand[i] = v.beta2 * d.grad_sq[i] + v.beta * v.beta1 + v.g;
  }
  return integral(integrand) / grid().volume();
}

double Model::arcsin_functional(const ScalarField& u) {
  ScalarField v(grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(std::abs(u[i]) <= 1.0)) {
      throw DomainError("arcsin functional: sample outside [-1, 1]");
    }
    v[i] = std::asin(u[i]);
  }
  const ScalarField integrand = spectral_.grad_norm_sq_field(v);
  for (double x : integrand.values()) {
    if (!std::isfinite(x) || x > 1e300) {
      throw OverflowSignal("arcsin functional: |grad arcsin u|^2 exceeds 1e300");
    }
  }
  return integral(integrand);
}

double Model::arcsin_gateaux(const ScalarField& u, const ScalarField& phi) {
  require_same_grid(u, phi);
  for (double x : u.values()) {
    if (!(std::abs(x) < 1.0)) {
      throw DomainError("arcsin Gateaux derivative needs u separated from +-1");
    }
  }
  const Spectrum su = spectral_.forward_fluctuation(u);
  const Spectrum sp = spectral_.forward_fluctuation(phi);
  ScalarField dot(grid());
  ScalarField grad_sq(grid());
  for (int a = 0; a < grid().dim(); ++a) {
    const ScalarField du = spectral_.partial(su, a);
    const ScalarField dp = spectral_.partial(sp, a);
    for (std::size_t i = 0; i < u.size(); ++i) {
      dot[i] += du[i] * dp[i];
      grad_sq[i] += du[i] * du[i];
    }
  }
  ScalarField integrand(grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const AValues a = eval_a(u[i]);
    integrand[i] = a.a * dot[i] + 0.5 * a.a1 * grad_sq[i] * phi[i];
  }
  return integral(integrand);
}

AprioriDiagnostics Model::apriori(const ScalarField& u) {
  const Derived d = derive(u);
  AprioriDiagnostics out;
  ScalarField b(grid());
  ScalarField bb(grid());
  ScalarField m(grid());
  ScalarField n(grid());
  ScalarField mean_integrand(grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const LocalValues& v = d.local[i];
    const double B = v.beta * v.beta1;
    const double A = v.beta2 * d.grad_sq[i];
    b[i] = v.beta;
    bb[i] = std::abs(B);
    m[i] = weight_M(std::abs(B));
    n[i] = weight_N(std::abs(A));
    mean_integrand[i] = A + B + v.g;
  }
  out.beta_l2 = l2_norm(b);
  out.grad_beta_l2 = spectral_.h1_seminorm(b);
  out.beta_betaprime_l1 = integral(bb);
  out.m_integral = integral(m);
  out.n_integral = integral(n);
  out.mu_mean = integral(mean_integrand) / grid().volume();
  return out;
}

double dispersion_sigma(double k, const PotentialParams& p) {
  const double k2 = k * k;
  const double base = k2 + 1.0 - p.lambda;
  return -k2 * base * (base + p.eta);
}

}  // namespace fchlog
