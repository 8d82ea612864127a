#pragma once

// Discretized functions on fixed grids.

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "lsci/error.hpp"

namespace lsci {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class GridKind { Interval1D, LatLon2D };

/// Quadrature grid over the function domain.
///
/// 1D grids hold scalar coordinates in [0, 1], strictly increasing. 2D grids
/// hold (latitude, longitude) pairs in degrees, row-major with latitude as the
/// slow index. Cell weights are strictly positive quadrature weights.
class Grid {
 public:
  Grid(GridKind kind, std::vector<double> coords, Vector cell_weights, std::size_t n_lat = 0,
       std::size_t n_lon = 0);

  /// Midpoint grid on [0, 1] with equal weights summing to 1.
  static std::shared_ptr<const Grid> uniform_interval(std::size_t n);

  /// Equiangular latitude/longitude grid. Weights are proportional to
  /// cos(latitude) and normalized to sum to 1.
  static std::shared_ptr<const Grid> lat_lon(std::size_t n_lat, std::size_t n_lon);

  GridKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  std::size_t n_lat() const noexcept { return n_lat_; }
  std::size_t n_lon() const noexcept { return n_lon_; }

  /// Flattened coordinates: one value per point in 1D, (lat, lon) pairs in 2D.
  const std::vector<double>& coords() const noexcept { return coords_; }
  double point(std::size_t i) const { return coords_.at(i); }
  double latitude(std::size_t i) const;
  double longitude(std::size_t i) const;

  const Vector& weights() const noexcept { return weights_; }
  double measure() const noexcept { return measure_; }

  bool same_as(const Grid& other) const noexcept;

 private:
  GridKind kind_;
  std::vector<double> coords_;
  Vector weights_;
  std::size_t n_lat_;
  std::size_t n_lon_;
  double measure_;
};

using GridPtr = std::shared_ptr<const Grid>;

void require_same_grid(const Grid& a, const Grid& b);

/// One function sampled on a grid.
class FunctionSample {
 public:
  FunctionSample(GridPtr grid, Vector values);

  static FunctionSample zeros(GridPtr grid);
  static FunctionSample constant(GridPtr grid, double c);

  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Grid& grid() const noexcept { return *grid_; }
  const Vector& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

 private:
  GridPtr grid_;
  Vector values_;
};

/// Ordered collection of functions on one shared grid, stored as a row-major
/// matrix (one row per sample).
class FunctionSet {
 public:
  FunctionSet(GridPtr grid, Matrix values, std::optional<std::vector<double>> index_labels = {});
  explicit FunctionSet(GridPtr grid) : FunctionSet(std::move(grid), Matrix(0, 0)) {}

  static FunctionSet from_samples(GridPtr grid, const std::vector<FunctionSample>& samples);

  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Grid& grid() const noexcept { return *grid_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  bool empty() const noexcept { return size() == 0; }

  const Matrix& values() const noexcept { return values_; }
  FunctionSample sample(std::size_t i) const;
  auto row(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)); }

  const std::optional<std::vector<double>>& index_labels() const noexcept { return labels_; }

  /// Rows selected by index, labels carried along.
  FunctionSet subset(const std::vector<std::size_t>& rows) const;

 private:
  GridPtr grid_;
  Matrix values_;
  std::optional<std::vector<double>> labels_;
};

double l2_norm(const FunctionSample& f);
double sup_norm(const FunctionSample& f);

/// Weighted inner product sum_i w_i a_i b_i.
double inner(const FunctionSample& a, const FunctionSample& b);

FunctionSample subtract(const FunctionSample& a, const FunctionSample& b);
FunctionSample add(const FunctionSample& a, const FunctionSample& b);
FunctionSet subtract(const FunctionSet& a, const FunctionSet& b);

}  // namespace lsci
