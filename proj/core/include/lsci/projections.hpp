#pragma once

// Projection families: finite sets of linear functionals phi(r) = <d, r>_W.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lsci/functional.hpp"

namespace lsci {

enum class ProjectionKind { Rand, FPCA, Wave, RFPCA, RWave };

std::string_view to_string(ProjectionKind kind) noexcept;
ProjectionKind parse_projection_kind(std::string_view name);

/// A finite family of directions, each of unit weighted L2 norm.
///
/// FPCA families additionally carry the eigenvalues of their leading
/// components and the weighted mean the covariance was centered on; the
/// sampler reconstructs residuals about that center.
class ProjectionFamily {
 public:
  ProjectionFamily(GridPtr grid, Matrix directions, ProjectionKind kind,
                   std::optional<std::uint64_t> seed = {}, Vector eigenvalues = {},
                   std::optional<Vector> center = {});

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  ProjectionKind kind() const noexcept { return kind_; }
  std::size_t n_phi() const noexcept { return static_cast<std::size_t>(directions_.rows()); }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  /// n_phi x |grid| matrix, one direction per row.
  const Matrix& directions() const noexcept { return directions_; }
  FunctionSample direction(std::size_t k) const;

  /// Directions pre-multiplied by the quadrature weights, so that
  /// projecting a values row is a plain dot product.
  const Matrix& weighted_directions() const noexcept { return weighted_; }

  const Vector& eigenvalues() const noexcept { return eigenvalues_; }
  const std::optional<Vector>& center() const noexcept { return center_; }

 private:
  GridPtr grid_;
  Matrix directions_;
  Matrix weighted_;
  ProjectionKind kind_;
  std::optional<std::uint64_t> seed_;
  Vector eigenvalues_;
  std::optional<Vector> center_;
};

/// Projection scores, n_phi x n_samples; entry (k, t) = phi_k(r_t).
struct ProjectedScores {
  Matrix values;

  std::size_t n_phi() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t n_samples() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

ProjectionFamily build_random(GridPtr grid, std::size_t n_phi, std::uint64_t seed);

/// Leading eigenvectors of the locally weighted covariance operator of the
/// residuals. `weights` need not be normalized.
ProjectionFamily build_fpca(const FunctionSet& residuals, std::span<const double> weights,
                            std::size_t n_phi);

/// First n_phi Haar vectors: scaling function, then wavelets coarse-to-fine
/// and left-to-right. Unequal halves get a weighted zero-mean wavelet.
ProjectionFamily build_wavelet(GridPtr grid, std::size_t n_phi);

/// Base directions followed by n_rand fresh random directions.
ProjectionFamily build_hybrid(const ProjectionFamily& base, GridPtr grid, std::size_t n_rand,
                              std::uint64_t seed);

ProjectedScores project(const ProjectionFamily& family, const FunctionSet& fs);
Vector project(const ProjectionFamily& family, const FunctionSample& f);

nlohmann::json to_json(const ProjectionFamily& family);
ProjectionFamily projection_family_from_json(const nlohmann::json& j, GridPtr grid);

}  // namespace lsci
