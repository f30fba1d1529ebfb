#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fchlog {

enum class Boundary { NeumannCosine, PeriodicFourier };

std::string_view to_string(Boundary bc);
Boundary boundary_from_string(std::string_view name);

/// Uniform box grid in 1, 2 or 3 dimensions.
///
/// NeumannCosine samples cell centres x_j = (j + 1/2) h; PeriodicFourier samples
/// x_j = j h. Storage is row-major with axis 0 slowest.
class Grid {
 public:
  Grid(std::vector<std::size_t> counts, std::vector<double> lengths, Boundary bc);

  /// Convenience for the common 1D case.
  static Grid line(std::size_t count, double length, Boundary bc);

  int dim() const { return dim_; }
  std::size_t count(int axis) const { return counts_[axis]; }
  double length(int axis) const { return lengths_[axis]; }
  double spacing(int axis) const { return lengths_[axis] / static_cast<double>(counts_[axis]); }
  Boundary bc() const { return bc_; }

  std::size_t size() const { return size_; }
  double cell_volume() const { return cell_volume_; }
  double volume() const;
  double max_length() const;

  double coordinate(int axis, std::size_t index) const;

  /// Per-axis multi-index of a flat sample index.
  std::array<std::size_t, 3> unflatten(std::size_t flat) const;

  std::vector<std::size_t> counts() const;
  std::vector<double> lengths() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_;
  std::array<std::size_t, 3> counts_{1, 1, 1};
  std::array<double, 3> lengths_{1.0, 1.0, 1.0};
  Boundary bc_;
  std::size_t size_;
  double cell_volume_;
};

/// Real samples of u, mu, omega or any derived field on a grid.
class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  template <class Fn>
  static ScalarField from_function(const Grid& grid, Fn&& fn) {
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto idx = grid.unflatten(i);
      std::array<double, 3> x{};
      for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(a, idx[a]);
      out.values_[i] = fn(x);
    }
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::vector<double>& storage() { return values_; }
  const std::vector<double>& storage() const { return values_; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);
  ScalarField& operator+=(double s);

  /// this += s * other
  ScalarField& axpy(double s, const ScalarField& other);

  double min() const;
  double max() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Throws ShapeError unless both fields live on the same grid.
void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Cascade summation; deterministic for a fixed input order.
double pairwise_sum(std::span<const double> values);

double integral(const ScalarField& u);
double mean(const ScalarField& u);
/// L2 inner product with uniform cell-volume weights.
double inner(const ScalarField& u, const ScalarField& v);
/// p in {1, 2}; use lp_norm_inf for the sup norm.
double lp_norm(const ScalarField& u, int p);
double lp_norm_inf(const ScalarField& u);
double l2_norm(const ScalarField& u);

}  // namespace fchlog
