#include "fchlog/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "fchlog/errors.hpp"

namespace fchlog {

namespace {

// The FFTW planner is not reentrant; execution with distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Spectral::Impl {
  explicit Impl(const Grid& g);
  ~Impl();

  bool is_nyquist(const std::array<long, 3>& f) const {
    if (cosine) return false;
    for (int a = 0; a < grid.dim(); ++a) {
      const long n = static_cast<long>(grid.count(a));
      if (n % 2 == 0 && std::abs(f[a]) == n / 2) return true;
    }
    return false;
  }

  std::array<long, 3> frequency(std::size_t mode) const {
    std::array<long, 3> f{0, 0, 0};
    const int d = grid.dim();
    for (int a = d - 1; a >= 0; --a) {
      const long idx = static_cast<long>(mode % spec_dims[a]);
      mode /= spec_dims[a];
      const long n = static_cast<long>(grid.count(a));
      if (cosine || a == d - 1) {
        f[a] = idx;
      } else {
        f[a] = idx <= n / 2 ? idx : idx - n;
      }
    }
    return f;
  }

  Grid grid;
  bool cosine;
  std::array<std::size_t, 3> spec_dims{1, 1, 1};
  std::size_t spec_size = 1;
  double norm = 1.0;
  std::vector<double> eig;

  double* rin = nullptr;
  double* rout = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::array<fftw_plan, 3> deriv{nullptr, nullptr, nullptr};
};

Spectral::Impl::Impl(const Grid& g) : grid(g), cosine(g.bc() == Boundary::NeumannCosine) {
  const int d = grid.dim();
  std::array<int, 3> n{1, 1, 1};
  for (int a = 0; a < d; ++a) {
    n[a] = static_cast<int>(grid.count(a));
    spec_dims[a] = grid.count(a);
  }
  if (!cosine) spec_dims[d - 1] = grid.count(d - 1) / 2 + 1;
  for (int a = 0; a < d; ++a) spec_size *= spec_dims[a];

  for (int a = 0; a < d; ++a) norm /= (cosine ? 2.0 : 1.0) * static_cast<double>(n[a]);

  eig.resize(spec_size);
  for (std::size_t k = 0; k < spec_size; ++k) {
    const auto f = frequency(k);
    double lam = 0.0;
    for (int a = 0; a < d; ++a) {
      const double base = (cosine ? 1.0 : 2.0) * std::numbers::pi / grid.length(a);
      const double w = base * static_cast<double>(f[a]);
      lam += w * w;
    }
    eig[k] = lam;
  }

  const std::size_t nreal = grid.size();
  rin = fftw_alloc_real(nreal);
  rout = fftw_alloc_real(nreal);
  cbuf = fftw_alloc_complex(spec_size);

  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE;
  if (cosine) {
    std::array<fftw_r2r_kind, 3> k10{FFTW_REDFT10, FFTW_REDFT10, FFTW_REDFT10};
    std::array<fftw_r2r_kind, 3> k01{FFTW_REDFT01, FFTW_REDFT01, FFTW_REDFT01};
    fwd = fftw_plan_r2r(d, n.data(), rin, rout, k10.data(), flags);
    bwd = fftw_plan_r2r(d, n.data(), rin, rout, k01.data(), flags);
    for (int a = 0; a < d; ++a) {
      auto kinds = k01;
      kinds[a] = FFTW_RODFT01;
      deriv[a] = fftw_plan_r2r(d, n.data(), rin, rout, kinds.data(), flags);
    }
  } else {
    fwd = fftw_plan_dft_r2c(d, n.data(), rin, cbuf, flags);
    bwd = fftw_plan_dft_c2r(d, n.data(), cbuf, rout, flags);
  }
}

Spectral::Impl::~Impl() {
  {
    std::lock_guard lock(planner_mutex());
    for (fftw_plan p : {fwd, bwd, deriv[0], deriv[1], deriv[2]}) {
      if (p) fftw_destroy_plan(p);
    }
  }
  fftw_free(rin);
  fftw_free(rout);
  fftw_free(cbuf);
}

Spectral::Spectral(const Grid& grid) : impl_(std::make_unique<Impl>(grid)) {}
Spectral::~Spectral() = default;
Spectral::Spectral(Spectral&&) noexcept = default;
Spectral& Spectral::operator=(Spectral&&) noexcept = default;

const Grid& Spectral::grid() const { return impl_->grid; }
std::size_t Spectral::spectrum_size() const { return impl_->spec_size; }
std::span<const double> Spectral::eigenvalues() const { return impl_->eig; }
std::array<long, 3> Spectral::frequency(std::size_t mode) const {
  return impl_->frequency(mode);
}

Spectrum Spectral::forward(const ScalarField& u) {
  if (!(u.grid() == impl_->grid)) throw ShapeError("field grid does not match workspace");
  auto& im = *impl_;
  std::copy(u.values().begin(), u.values().end(), im.rin);
  Spectrum s(im.spec_size);
  if (im.cosine) {
    fftw_execute_r2r(im.fwd, im.rin, im.rout);
    for (std::size_t k = 0; k < im.spec_size; ++k) s[k] = {im.rout[k] * im.norm, 0.0};
  } else {
    fftw_execute_dft_r2c(im.fwd, im.rin, im.cbuf);
    for (std::size_t k = 0; k < im.spec_size; ++k) {
      s[k] = {im.cbuf[k][0] * im.norm, im.cbuf[k][1] * im.norm};
    }
  }
  return s;
}

Spectrum Spectral::forward_fluctuation(const ScalarField& u) {
  ScalarField centred = u;
  centred += -mean(u);
  Spectrum s = forward(centred);
  s[0] = 0.0;
  return s;
}

ScalarField Spectral::backward(const Spectrum& s) {
  auto& im = *impl_;
  if (s.size() != im.spec_size) throw ShapeError("spectrum size does not match workspace");
  if (im.cosine) {
    for (std::size_t k = 0; k < im.spec_size; ++k) im.rin[k] = s[k].real();
    fftw_execute_r2r(im.bwd, im.rin, im.rout);
  } else {
    for (std::size_t k = 0; k < im.spec_size; ++k) {
      im.cbuf[k][0] = s[k].real();
      im.cbuf[k][1] = s[k].imag();
    }
    fftw_execute_dft_c2r(im.bwd, im.cbuf, im.rout);
  }
  return ScalarField(im.grid, std::vector<double>(im.rout, im.rout + im.grid.size()));
}

ScalarField Spectral::apply_A(const ScalarField& u, int power) {
  if (power < 1 || power > 3) {
    throw Error("apply_A: power must be 1, 2 or 3, got " + std::to_string(power));
  }
  Spectrum s = forward_fluctuation(u);
  const auto eig = eigenvalues();
  for (std::size_t k = 0; k < s.size(); ++k) s[k] *= std::pow(eig[k], power);
  return backward(s);
}

ScalarField Spectral::laplacian(const ScalarField& u) {
  Spectrum s = forward_fluctuation(u);
  const auto eig = eigenvalues();
  for (std::size_t k = 0; k < s.size(); ++k) s[k] *= -eig[k];
  return backward(s);
}

void require_zero_mean(const ScalarField& g, const char* what) {
  const double m = mean(g);
  if (std::abs(m) > 1e-10 * l2_norm(g)) {
    throw MeanError(std::string(what) + ": input has nonzero mean " + std::to_string(m));
  }
}

ScalarField Spectral::inv_A_zero_mean(const ScalarField& g) {
  require_zero_mean(g, "inv_A_zero_mean");
  return apply_symbol(g, [](double a) { return a > 0.0 ? 1.0 / a : 0.0; });
}

ScalarField Spectral::resolvent(const ScalarField& u, double tau) {
  if (!(tau > 0.0)) throw Error("resolvent: tau must be positive");
  return apply_symbol(u, [tau](double a) { return 1.0 / (1.0 + tau * a); });
}

ScalarField Spectral::partial(const ScalarField& u, int axis) {
  return partial(forward_fluctuation(u), axis);
}

ScalarField Spectral::partial(const Spectrum& s, int axis) {
  auto& im = *impl_;
  if (axis < 0 || axis >= im.grid.dim()) throw ShapeError("partial: axis out of range");
  if (s.size() != im.spec_size) throw ShapeError("spectrum size does not match workspace");
  const double base = (im.cosine ? 1.0 : 2.0) * std::numbers::pi / im.grid.length(axis);
  if (im.cosine) {
    // d/dx cos(pi j x / L) = -(pi j / L) sin(pi j x / L); RODFT01 input slot j-1
    // carries sine frequency j, and the top slot (frequency N) stays empty.
    std::fill(im.rin, im.rin + im.grid.size(), 0.0);
    std::array<std::size_t, 3> stride{1, 1, 1};
    for (int a = im.grid.dim() - 2; a >= 0; --a) stride[a] = stride[a + 1] * im.grid.count(a + 1);
    for (std::size_t k = 0; k < im.spec_size; ++k) {
      const long j = im.frequency(k)[axis];
      if (j == 0) continue;
      im.rin[k - stride[axis]] = -base * static_cast<double>(j) * s[k].real();
    }
    fftw_execute_r2r(im.deriv[axis], im.rin, im.rout);
    return ScalarField(im.grid, std::vector<double>(im.rout, im.rout + im.grid.size()));
  }
  Spectrum d(s.size());
  for (std::size_t k = 0; k < im.spec_size; ++k) {
    const auto f = im.frequency(k);
    const long n = static_cast<long>(im.grid.count(axis));
    if (n % 2 == 0 && std::abs(f[axis]) == n / 2) continue;
    d[k] = s[k] * std::complex<double>(0.0, base * static_cast<double>(f[axis]));
  }
  return backward(d);
}

ScalarField Spectral::grad_norm_sq_field(const ScalarField& u) {
  const Spectrum s = forward_fluctuation(u);
  ScalarField out(impl_->grid);
  for (int a = 0; a < impl_->grid.dim(); ++a) {
    const ScalarField d = partial(s, a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i] * d[i];
  }
  return out;
}

double Spectral::h1_seminorm(const ScalarField& u) {
  return std::sqrt(integral(grad_norm_sq_field(u)));
}

double Spectral::v0_dual_norm(const ScalarField& g) {
  require_zero_mean(g, "v0_dual_norm");
  const ScalarField ng = apply_symbol(g, [](double a) { return a > 0.0 ? 1.0 / a : 0.0; });
  return std::sqrt(std::max(0.0, inner(g, ng)));
}

long Spectral::index_of(const std::array<long, 3>& freq) const {
  const auto& im = *impl_;
  const int d = im.grid.dim();
  std::size_t flat = 0;
  for (int a = 0; a < d; ++a) {
    const long n = static_cast<long>(im.grid.count(a));
    long idx = freq[a];
    if (im.cosine) {
      if (idx < 0 || idx >= n) return -1;
    } else if (a == d - 1) {
      if (idx < 0 || idx > n / 2) return -1;
    } else {
      if (idx > n / 2 || idx <= -((n + 1) / 2)) return -1;
      if (idx < 0) idx += n;
    }
    flat = flat * im.spec_dims[a] + static_cast<std::size_t>(idx);
  }
  return static_cast<long>(flat);
}

ScalarField Spectral::prolong(const ScalarField& u, Spectral& fine_ws) {
  const Spectrum s = forward(u);
  Spectrum fine(fine_ws.spectrum_size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto f = impl_->frequency(k);
    if (impl_->is_nyquist(f)) continue;
    const long idx = fine_ws.index_of(f);
    if (idx < 0) throw ShapeError("prolong: target grid is coarser than source");
    fine[static_cast<std::size_t>(idx)] = s[k];
  }
  return fine_ws.backward(fine);
}

ScalarField Spectral::restrict_from(Spectral& fine_ws, const ScalarField& fine_field) {
  const Spectrum fs = fine_ws.forward(fine_field);
  Spectrum s(impl_->spec_size);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto f = impl_->frequency(k);
    if (impl_->is_nyquist(f)) continue;
    const long idx = fine_ws.index_of(f);
    if (idx < 0) throw ShapeError("restrict: source grid is coarser than target");
    s[k] = fs[static_cast<std::size_t>(idx)];
  }
  return backward(s);
}

Grid refined(const Grid& grid, std::size_t factor) {
  auto counts = grid.counts();
  for (auto& c : counts) c *= factor;
  return Grid(counts, grid.lengths(), grid.bc());
}

}  // namespace fchlog
