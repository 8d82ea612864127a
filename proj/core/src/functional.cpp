#include "lsci/functional.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lsci {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::DegenerateWeights: return "DegenerateWeights";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::EmptyMeasure: return "EmptyMeasure";
    case ErrorCode::EmptyCalibration: return "EmptyCalibration";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::InvalidU: return "InvalidU";
    case ErrorCode::AcceptanceStalled: return "AcceptanceStalled";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotFitted: return "NotFitted";
    case ErrorCode::InsufficientCalibration: return "InsufficientCalibration";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Grid::Grid(GridKind kind, std::vector<double> coords, Vector cell_weights, std::size_t n_lat,
           std::size_t n_lon)
    : kind_(kind),
      coords_(std::move(coords)),
      weights_(std::move(cell_weights)),
      n_lat_(n_lat),
      n_lon_(n_lon),
      measure_(0.0) {
  const std::size_t n = size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "grid must have at least one point");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw Error(ErrorCode::InvalidArgument, "cell weights must be finite and positive");
  }
  if (kind_ == GridKind::Interval1D) {
    if (coords_.size() != n)
      throw Error(ErrorCode::InvalidArgument, "1D grid needs one coordinate per weight");
    for (std::size_t i = 1; i < n; ++i) {
      if (!(coords_[i] > coords_[i - 1]))
        throw Error(ErrorCode::InvalidArgument, "1D grid points must be strictly increasing");
    }
    n_lat_ = 0;
    n_lon_ = 0;
  } else {
    if (coords_.size() != 2 * n)
      throw Error(ErrorCode::InvalidArgument, "2D grid needs (lat, lon) per weight");
    if (n_lat_ * n_lon_ != n)
      throw Error(ErrorCode::InvalidArgument, "2D grid shape does not match point count");
  }
  measure_ = weights_.sum();
}

std::shared_ptr<const Grid> Grid::uniform_interval(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "grid must have at least one point");
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  Vector w = Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  return std::make_shared<const Grid>(GridKind::Interval1D, std::move(pts), std::move(w));
}

std::shared_ptr<const Grid> Grid::lat_lon(std::size_t n_lat, std::size_t n_lon) {
  if (n_lat == 0 || n_lon == 0)
    throw Error(ErrorCode::InvalidArgument, "lat/lon grid needs positive dimensions");
  const std::size_t n = n_lat * n_lon;
  std::vector<double> coords;
  coords.reserve(2 * n);
  Vector w(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n_lat; ++i) {
    const double lat = 90.0 - (static_cast<double>(i) + 0.5) * 180.0 / static_cast<double>(n_lat);
    const double c = std::cos(lat * std::numbers::pi / 180.0);
    for (std::size_t j = 0; j < n_lon; ++j) {
      coords.push_back(lat);
      coords.push_back(static_cast<double>(j) * 360.0 / static_cast<double>(n_lon));
      w[static_cast<Eigen::Index>(i * n_lon + j)] = c;
    }
  }
  w /= w.sum();
  return std::make_shared<const Grid>(GridKind::LatLon2D, std::move(coords), std::move(w), n_lat,
                                      n_lon);
}

double Grid::latitude(std::size_t i) const {
  if (kind_ != GridKind::LatLon2D) throw Error(ErrorCode::Unsupported, "latitude on a 1D grid");
  return coords_.at(2 * i);
}

double Grid::longitude(std::size_t i) const {
  if (kind_ != GridKind::LatLon2D) throw Error(ErrorCode::Unsupported, "longitude on a 1D grid");
  return coords_.at(2 * i + 1);
}

bool Grid::same_as(const Grid& other) const noexcept {
  if (this == &other) return true;
  return kind_ == other.kind_ && n_lat_ == other.n_lat_ && n_lon_ == other.n_lon_ &&
         coords_ == other.coords_ && weights_.size() == other.weights_.size() &&
         weights_ == other.weights_;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_as(b)) {
    throw Error(ErrorCode::GridMismatch, "grids differ (" + std::to_string(a.size()) + " vs " +
                                             std::to_string(b.size()) + " points)");
  }
}

FunctionSample::FunctionSample(GridPtr grid, Vector values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorCode::InvalidArgument, "function sample needs a grid");
  if (static_cast<std::size_t>(values_.size()) != grid_->size())
    throw Error(ErrorCode::ShapeMismatch, "sample has " + std::to_string(values_.size()) +
                                              " values for a " + std::to_string(grid_->size()) +
                                              "-point grid");
  if (!values_.allFinite()) throw Error(ErrorCode::InvalidArgument, "sample values must be finite");
}

FunctionSample FunctionSample::zeros(GridPtr grid) { return constant(std::move(grid), 0.0); }

FunctionSample FunctionSample::constant(GridPtr grid, double c) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  return FunctionSample(std::move(grid), Vector::Constant(n, c));
}

FunctionSet::FunctionSet(GridPtr grid, Matrix values, std::optional<std::vector<double>> index_labels)
    : grid_(std::move(grid)), values_(std::move(values)), labels_(std::move(index_labels)) {
  if (!grid_) throw Error(ErrorCode::InvalidArgument, "function set needs a grid");
  if (values_.rows() == 0) {
    values_.resize(0, static_cast<Eigen::Index>(grid_->size()));
  }
  if (static_cast<std::size_t>(values_.cols()) != grid_->size())
    throw Error(ErrorCode::ShapeMismatch, "set has " + std::to_string(values_.cols()) +
                                              " columns for a " + std::to_string(grid_->size()) +
                                              "-point grid");
  if (!values_.allFinite()) throw Error(ErrorCode::InvalidArgument, "set values must be finite");
  if (labels_ && labels_->size() != size())
    throw Error(ErrorCode::ShapeMismatch, "index label count does not match sample count");
}

FunctionSet FunctionSet::from_samples(GridPtr grid, const std::vector<FunctionSample>& samples) {
  Matrix m(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require_same_grid(*grid, samples[i].grid());
    m.row(static_cast<Eigen::Index>(i)) = samples[i].values().transpose();
  }
  return FunctionSet(std::move(grid), std::move(m));
}

FunctionSample FunctionSet::sample(std::size_t i) const {
  if (i >= size()) throw Error(ErrorCode::InvalidArgument, "sample index out of range");
  return FunctionSample(grid_, values_.row(static_cast<Eigen::Index>(i)).transpose());
}

FunctionSet FunctionSet::subset(const std::vector<std::size_t>& rows) const {
  Matrix m(static_cast<Eigen::Index>(rows.size()), values_.cols());
  std::optional<std::vector<double>> labels;
  if (labels_) labels.emplace();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= size()) throw Error(ErrorCode::InvalidArgument, "subset index out of range");
    m.row(static_cast<Eigen::Index>(r)) = values_.row(static_cast<Eigen::Index>(rows[r]));
    if (labels_) labels->push_back((*labels_)[rows[r]]);
  }
  return FunctionSet(grid_, std::move(m), std::move(labels));
}

double l2_norm(const FunctionSample& f) {
  return std::sqrt(f.grid().weights().dot(f.values().cwiseAbs2()));
}

double sup_norm(const FunctionSample& f) { return f.values().cwiseAbs().maxCoeff(); }

double inner(const FunctionSample& a, const FunctionSample& b) {
  require_same_grid(a.grid(), b.grid());
  return a.grid().weights().dot(a.values().cwiseProduct(b.values()));
}

FunctionSample subtract(const FunctionSample& a, const FunctionSample& b) {
  require_same_grid(a.grid(), b.grid());
  return FunctionSample(a.grid_ptr(), a.values() - b.values());
}

FunctionSample add(const FunctionSample& a, const FunctionSample& b) {
  require_same_grid(a.grid(), b.grid());
  return FunctionSample(a.grid_ptr(), a.values() + b.values());
}

FunctionSet subtract(const FunctionSet& a, const FunctionSet& b) {
  require_same_grid(a.grid(), b.grid());
  if (a.size() != b.size())
    throw Error(ErrorCode::ShapeMismatch, "function sets differ in sample count");
  return FunctionSet(a.grid_ptr(), a.values() - b.values(), a.index_labels());
}

}  // namespace lsci
