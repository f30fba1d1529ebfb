#include "fchlog/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "fchlog/errors.hpp"

namespace fchlog {

std::string_view to_string(Boundary bc) {
  return bc == Boundary::NeumannCosine ? "neumann" : "periodic";
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "neumann" || name == "NeumannCosine") return Boundary::NeumannCosine;
  if (name == "periodic" || name == "PeriodicFourier") return Boundary::PeriodicFourier;
  throw ConfigError("unknown boundary mode '" + std::string(name) +
                    "' (expected neumann or periodic)");
}

Grid::Grid(std::vector<std::size_t> counts, std::vector<double> lengths, Boundary bc)
    : dim_(static_cast<int>(counts.size())), bc_(bc) {
  if (dim_ < 1 || dim_ > 3) throw ShapeError("grid dimension must be 1, 2 or 3");
  if (lengths.size() != counts.size()) {
    throw ShapeError("grid needs one length per axis");
  }
  for (int a = 0; a < dim_; ++a) {
    if (counts[a] < 4) throw ShapeError("grid needs at least 4 samples per axis");
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw ShapeError("grid lengths must be positive and finite");
    }
    counts_[a] = counts[a];
    lengths_[a] = lengths[a];
  }
  size_ = counts_[0] * counts_[1] * counts_[2];
  cell_volume_ = 1.0;
  for (int a = 0; a < dim_; ++a) cell_volume_ *= spacing(a);
}

Grid Grid::line(std::size_t count, double length, Boundary bc) {
  return Grid({count}, {length}, bc);
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= lengths_[a];
  return v;
}

double Grid::max_length() const {
  return *std::max_element(lengths_.begin(), lengths_.begin() + dim_);
}

double Grid::coordinate(int axis, std::size_t index) const {
  const double offset = bc_ == Boundary::NeumannCosine ? 0.5 : 0.0;
  return (static_cast<double>(index) + offset) * spacing(axis);
}

std::array<std::size_t, 3> Grid::unflatten(std::size_t flat) const {
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = flat % counts_[a];
    flat /= counts_[a];
  }
  return idx;
}

std::vector<std::size_t> Grid::counts() const {
  return {counts_.begin(), counts_.begin() + dim_};
}

std::vector<double> Grid::lengths() const { return {lengths_.begin(), lengths_.begin() + dim_}; }

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ShapeError("field has " + std::to_string(values_.size()) + " samples, grid has " +
                     std::to_string(grid_.size()));
  }
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw ShapeError("fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other);
  std::transform(values_.begin(), values_.end(), other.values_.begin(), values_.begin(),
                 std::plus<>());
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other);
  std::transform(values_.begin(), values_.end(), other.values_.begin(), values_.begin(),
                 std::minus<>());
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::operator+=(double s) {
  for (double& v : values_) v += s;
  return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

double pairwise_sum(std::span<const double> values) {
  // The leaf is itself a balanced tree, so N = 2^k copies of c sum to exactly N c.
  constexpr std::size_t kBlock = 16;
  if (values.size() <= kBlock) {
    std::array<double, kBlock> acc{};
    std::size_t n = values.size();
    std::copy(values.begin(), values.end(), acc.begin());
    while (n > 1) {
      const std::size_t half = n / 2;
      for (std::size_t i = 0; i < half; ++i) acc[i] = acc[2 * i] + acc[2 * i + 1];
      if (n % 2 == 1) acc[half] = acc[n - 1];
      n = half + n % 2;
    }
    return values.empty() ? 0.0 : acc[0];
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double integral(const ScalarField& u) {
  return pairwise_sum(u.values()) * u.grid().cell_volume();
}

double mean(const ScalarField& u) {
  return pairwise_sum(u.values()) / static_cast<double>(u.size());
}

double inner(const ScalarField& u, const ScalarField& v) {
  require_same_grid(u, v);
  std::vector<double> prod(u.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = u[i] * v[i];
  return pairwise_sum(prod) * u.grid().cell_volume();
}

double lp_norm(const ScalarField& u, int p) {
  std::vector<double> tmp(u.size());
  if (p == 1) {
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = std::abs(u[i]);
    return pairwise_sum(tmp) * u.grid().cell_volume();
  }
  if (p == 2) {
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = u[i] * u[i];
    return std::sqrt(pairwise_sum(tmp) * u.grid().cell_volume());
  }
  throw ShapeError("lp_norm supports p = 1 or 2; use lp_norm_inf for the sup norm");
}

double lp_norm_inf(const ScalarField& u) { return u.max_abs(); }

double l2_norm(const ScalarField& u) { return lp_norm(u, 2); }

}  // namespace fchlog
