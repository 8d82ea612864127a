#include "lsci/depth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lsci {

namespace {
constexpr double kNormalizationTolerance = 1e-12;
constexpr double kVarianceFloor = 1e-12;
}  // namespace

std::string_view to_string(DepthKind kind) noexcept {
  switch (kind) {
    case DepthKind::Tukey: return "tukey";
    case DepthKind::NormInf: return "norminf";
    case DepthKind::Mahalanobis: return "mahalanobis";
  }
  return "tukey";
}

DepthKind parse_depth_kind(std::string_view name) {
  if (name == "tukey") return DepthKind::Tukey;
  if (name == "norminf" || name == "linf") return DepthKind::NormInf;
  if (name == "mahalanobis" || name == "mahal") return DepthKind::Mahalanobis;
  throw Error(ErrorCode::Parse, "unknown depth kind '" + std::string(name) + "'");
}

std::string_view to_string(InfinityMass placement) noexcept {
  return placement == InfinityMass::Upper ? "upper" : "split";
}

InfinityMass parse_infinity_mass(std::string_view name) {
  if (name == "upper") return InfinityMass::Upper;
  if (name == "split") return InfinityMass::Split;
  throw Error(ErrorCode::Parse, "unknown infinity mass placement '" + std::string(name) + "'");
}

std::string_view to_string(AtomMass placement) noexcept {
  return placement == AtomMass::Both ? "both" : "upper";
}

AtomMass parse_atom_mass(std::string_view name) {
  if (name == "both") return AtomMass::Both;
  if (name == "upper") return AtomMass::Upper;
  throw Error(ErrorCode::Parse, "unknown atom mass placement '" + std::string(name) + "'");
}

LocalMeasure::LocalMeasure(std::vector<double> locations, std::vector<double> weights,
                           double inf_mass, InfinityMass placement,
                           std::vector<std::size_t> source_index)
    : inf_mass_(inf_mass), placement_(placement) {
  const std::size_t n = locations.size();
  if (weights.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "measure needs one weight per atom");
  if (!source_index.empty() && source_index.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "measure source index length mismatch");
  if (!(inf_mass >= 0.0) || inf_mass > 1.0 + kNormalizationTolerance)
    throw Error(ErrorCode::InvalidArgument, "infinity mass must lie in [0, 1]");

  if (std::is_sorted(locations.begin(), locations.end())) {
    locations_ = std::move(locations);
    weights_ = std::move(weights);
    source_ = std::move(source_index);
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return locations[a] < locations[b]; });
    locations_.resize(n);
    weights_.resize(n);
    if (!source_index.empty()) source_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      locations_[i] = locations[order[i]];
      weights_[i] = weights[order[i]];
      if (!source_index.empty()) source_[i] = source_index[order[i]];
    }
  }

  prefix_.resize(n + 1);
  prefix_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(locations_[i]))
      throw Error(ErrorCode::InvalidArgument, "atom locations must be finite");
    if (!(weights_[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "atom weights must be >= 0");
    prefix_[i + 1] = prefix_[i] + weights_[i];
  }
  if (std::abs(prefix_[n] + inf_mass_ - 1.0) > kNormalizationTolerance)
    throw Error(ErrorCode::InvalidArgument, "measure mass does not sum to one");

  const double total = prefix_[n];
  if (total > 0.0) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += weights_[i] * locations_[i];
    mean_ = m / total;
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = locations_[i] - mean_;
      v += weights_[i] * d * d;
    }
    variance_ = std::max(v / total, kVarianceFloor);
    const double half = 0.5 * total;
    const auto it = std::lower_bound(prefix_.begin() + 1, prefix_.end(), half);
    median_ = locations_[static_cast<std::size_t>(std::distance(prefix_.begin() + 1, it))];
  }
}

double LocalMeasure::cdf(double x) const {
  const auto a = std::upper_bound(locations_.begin(), locations_.end(), x) - locations_.begin();
  return prefix_[static_cast<std::size_t>(a)];
}

double LocalMeasure::cdf_left(double x) const {
  const auto b = std::lower_bound(locations_.begin(), locations_.end(), x) - locations_.begin();
  return prefix_[static_cast<std::size_t>(b)];
}

void LocalMeasure::require_finite_mass() const {
  if (locations_.empty()) throw Error(ErrorCode::EmptyMeasure, "measure has no finite atoms");
  if (!(finite_mass() > 0.0))
    throw Error(ErrorCode::EmptyMeasure, "measure has no mass on finite atoms");
}

double LocalMeasure::median() const {
  require_finite_mass();
  return median_;
}

double LocalMeasure::mean() const {
  require_finite_mass();
  return mean_;
}

double LocalMeasure::variance() const {
  require_finite_mass();
  return variance_;
}

// lo = #atoms < x, hi = #atoms <= x.
double LocalMeasure::tukey(std::size_t lo, std::size_t hi) const {
  const double tail_inf = placement_ == InfinityMass::Upper ? 0.0 : 0.5 * inf_mass_;
  const double head_inf = inf_mass_ - tail_inf;
  const double lower = prefix_[hi] + tail_inf;
  const double upper = (prefix_.back() - prefix_[lo]) + head_inf;
  return std::min(lower, upper);
}

double LocalMeasure::depth(double x, DepthKind kind) const {
  if (locations_.empty()) throw Error(ErrorCode::EmptyMeasure, "measure has no finite atoms");
  switch (kind) {
    case DepthKind::Tukey: {
      const auto lo = std::lower_bound(locations_.begin(), locations_.end(), x) - locations_.begin();
      const auto hi = std::upper_bound(locations_.begin() + lo, locations_.end(), x) - locations_.begin();
      return tukey(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi));
    }
    case DepthKind::NormInf:
      require_finite_mass();
      return 1.0 / (1.0 + std::abs(x - median_));
    case DepthKind::Mahalanobis: {
      require_finite_mass();
      const double d = x - mean_;
      return 1.0 / (1.0 + d * d / variance_);
    }
  }
  return 0.0;
}

double LocalMeasure::depth_at(std::size_t pos, DepthKind kind, AtomMass own) const {
  if (pos >= size()) throw Error(ErrorCode::InvalidArgument, "atom position out of range");
  if (kind != DepthKind::Tukey) return depth(locations_[pos], kind);
  const double x = locations_[pos];
  std::size_t lo = pos;
  while (lo > 0 && locations_[lo - 1] == x) --lo;
  std::size_t hi = pos + 1;
  while (hi < size() && locations_[hi] == x) ++hi;
  // The tied group's mass then counts on the upper side only, like a
  // non-atom point's upper tail.
  return tukey(lo, own == AtomMass::Both ? hi : lo);
}

double LocalMeasure::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::InvalidU, "u must lie in (0, 1)");
  require_finite_mass();
  const double target = u * prefix_.back();
  auto it = std::lower_bound(prefix_.begin() + 1, prefix_.end(), target);
  if (it == prefix_.end()) --it;
  return locations_[static_cast<std::size_t>(std::distance(prefix_.begin() + 1, it))];
}

double univariate_depth(double x, const LocalMeasure& m, DepthKind kind) { return m.depth(x, kind); }

double phi_depth(std::span<const double> projected, std::span<const LocalMeasure> measures,
                 DepthKind kind) {
  if (projected.size() != measures.size())
    throw Error(ErrorCode::ShapeMismatch, "one measure per projection is required");
  double best = 1.0;
  for (std::size_t k = 0; k < measures.size(); ++k) {
    best = std::min(best, measures[k].depth(projected[k], kind));
    if (best <= 0.0) break;
  }
  return best;
}

double phi_depth(const FunctionSample& r, const ProjectionFamily& family,
                 std::span<const LocalMeasure> measures, DepthKind kind) {
  const Vector p = project(family, r);
  return phi_depth(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), measures,
                   kind);
}

}  // namespace lsci
