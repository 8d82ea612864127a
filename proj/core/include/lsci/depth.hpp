#pragma once

// Weighted univariate depths and the projection (infimum) depth.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "lsci/functional.hpp"
#include "lsci/projections.hpp"

namespace lsci {

enum class DepthKind { Tukey, NormInf, Mahalanobis };

/// Which tail(s) the reserved infinity mass is credited to.
enum class InfinityMass { Upper, Split };

/// Which Tukey tails an atom's own mass is credited to when the atom itself
/// is scored. Upper mirrors the test slot, whose mass sits at +inf.
enum class AtomMass { Both, Upper };

std::string_view to_string(DepthKind kind) noexcept;
DepthKind parse_depth_kind(std::string_view name);
std::string_view to_string(InfinityMass placement) noexcept;
InfinityMass parse_infinity_mass(std::string_view name);
std::string_view to_string(AtomMass placement) noexcept;
AtomMass parse_atom_mass(std::string_view name);

/// Weighted empirical measure on the real line plus a point mass at +inf.
///
/// Atoms are kept sorted by location. Weights are nonnegative and together
/// with inf_mass sum to one (within 1e-12). Each atom optionally remembers
/// the index of the sample it came from.
class LocalMeasure {
 public:
  LocalMeasure(std::vector<double> locations, std::vector<double> weights, double inf_mass,
               InfinityMass placement = InfinityMass::Upper,
               std::vector<std::size_t> source_index = {});

  std::size_t size() const noexcept { return locations_.size(); }
  const std::vector<double>& locations() const noexcept { return locations_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<std::size_t>& source_index() const noexcept { return source_; }
  double inf_mass() const noexcept { return inf_mass_; }
  double finite_mass() const noexcept { return prefix_.back(); }
  InfinityMass placement() const noexcept { return placement_; }

  /// F(x) = mass of finite atoms <= x.
  double cdf(double x) const;
  /// Mass of finite atoms < x.
  double cdf_left(double x) const;

  double depth(double x, DepthKind kind) const;

  /// Depth of the atom stored at sorted position `pos`. With AtomMass::Both
  /// this is bitwise identical to depth(locations()[pos], kind); with Upper
  /// the Tukey lower tail stops strictly below the atom.
  double depth_at(std::size_t pos, DepthKind kind, AtomMass own = AtomMass::Both) const;

  /// Weighted median, mean and variance of the finite atoms.
  double median() const;
  double mean() const;
  double variance() const;

  /// Generalized inverse of the normalized finite-atom CDF; u in (0, 1).
  double quantile(double u) const;

 private:
  double tukey(std::size_t lo, std::size_t hi) const;
  void require_finite_mass() const;

  std::vector<double> locations_;
  std::vector<double> weights_;
  std::vector<double> prefix_;
  std::vector<std::size_t> source_;
  double inf_mass_;
  InfinityMass placement_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double median_ = 0.0;
};

double univariate_depth(double x, const LocalMeasure& m, DepthKind kind);

/// Infimum of univariate depths over precomputed projections phi_k(r).
double phi_depth(std::span<const double> projected, std::span<const LocalMeasure> measures,
                 DepthKind kind);

double phi_depth(const FunctionSample& r, const ProjectionFamily& family,
                 std::span<const LocalMeasure> measures, DepthKind kind);

}  // namespace lsci
