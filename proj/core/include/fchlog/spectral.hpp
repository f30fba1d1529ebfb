#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fchlog/grid.hpp"

namespace fchlog {

/// Spectral coefficients of a real field. For NeumannCosine the imaginary parts
/// are zero; for PeriodicFourier this is the half-spectrum of a real transform.
using Spectrum = std::vector<std::complex<double>>;

/// Transform workspace and operator calculus for the Neumann (or periodic)
/// Laplacian on a box.
///
/// The basis diagonalises A = -Laplacian: cosines for NeumannCosine, complex
/// exponentials for PeriodicFourier. Coefficients are normalised so that a
/// constant field c has coefficient c in mode 0 for both bases. Each instance
/// owns its FFTW plans and scratch buffers; use one instance per thread.
class Spectral {
 public:
  explicit Spectral(const Grid& grid);
  ~Spectral();
  Spectral(Spectral&&) noexcept;
  Spectral& operator=(Spectral&&) noexcept;
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const Grid& grid() const;
  std::size_t spectrum_size() const;

  /// Eigenvalue of A for every spectral index; index 0 is the mass mode.
  std::span<const double> eigenvalues() const;
  /// Per-axis frequency index (cosine index or signed Fourier index) of a mode.
  std::array<long, 3> frequency(std::size_t mode) const;

  Spectrum forward(const ScalarField& u);
  /// Transform of u - mean(u) with the mass mode set to zero. Derivatives built
  /// from it vanish exactly on constant fields with power-of-two sample counts.
  Spectrum forward_fluctuation(const ScalarField& u);
  ScalarField backward(const Spectrum& s);

  /// A^power u for power in {1, 2, 3}.
  ScalarField apply_A(const ScalarField& u, int power);
  ScalarField laplacian(const ScalarField& u);
  /// The inverse Laplacian N on zero-mean data; throws MeanError otherwise.
  ScalarField inv_A_zero_mean(const ScalarField& g);
  /// (I + tau A)^{-1} u.
  ScalarField resolvent(const ScalarField& u, double tau);

  /// Spectral partial derivative along one axis.
  ScalarField partial(const ScalarField& u, int axis);
  ScalarField partial(const Spectrum& s, int axis);
  /// Pointwise |grad u|^2.
  ScalarField grad_norm_sq_field(const ScalarField& u);
  double h1_seminorm(const ScalarField& u);
  /// ||grad N g|| for zero-mean g; throws MeanError otherwise.
  double v0_dual_norm(const ScalarField& g);

  /// Multiply every mode by symbol(eigenvalue). The mass mode is handled in
  /// physical space, so constants map to constants exactly.
  template <class Symbol>
  ScalarField apply_symbol(const ScalarField& u, Symbol&& symbol) {
    const double m = mean(u);
    Spectrum s = forward_fluctuation(u);
    const auto eig = eigenvalues();
    for (std::size_t k = 1; k < s.size(); ++k) s[k] *= symbol(eig[k]);
    ScalarField out = backward(s);
    const double m0 = m * symbol(eig[0]);
    if (m0 != 0.0) out += m0;
    return out;
  }

  /// Spectral index holding a per-axis frequency, or -1 if not represented.
  long index_of(const std::array<long, 3>& freq) const;

  /// Exact spectral interpolation onto the grid of `fine_ws`, and the matching
  /// truncation back. Periodic Nyquist modes are dropped in both directions.
  ScalarField prolong(const ScalarField& u, Spectral& fine_ws);
  ScalarField restrict_from(Spectral& fine_ws, const ScalarField& fine_field);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Grid with every axis count multiplied by `factor`.
Grid refined(const Grid& grid, std::size_t factor);

/// Throws MeanError when |mean(g)| > 1e-10 ||g||_{L2}.
void require_zero_mean(const ScalarField& g, const char* what);

}  // namespace fchlog
