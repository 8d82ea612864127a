#pragma once

// Localization: knock-off inputs, kernel weights, alternative eta-weights,
// and the coverage-gap bound.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lsci/functional.hpp"

namespace lsci {

enum class KernelKind { L2, LInf, KNN };

std::string_view to_string(KernelKind kind) noexcept;
KernelKind parse_kernel_kind(std::string_view name);

struct LocalizerKind {
  KernelKind kernel = KernelKind::L2;
  double bandwidth = 1.0;  // lambda >= 0

  /// Neighbour count for the k-NN kernel: round(n / (1 + lambda)), at least 1.
  std::size_t knn_count(std::size_t n) const;
};

/// Probability vector over n calibration slots plus the test slot (last).
struct LocalWeights {
  std::vector<double> w;
  std::vector<double> distances;
  LocalizerKind localizer;

  std::size_t n() const noexcept { return distances.size(); }
  double test_mass() const { return w.back(); }
  std::span<const double> calibration() const { return {w.data(), distances.size()}; }
};

FunctionSample knockoff(const FunctionSample& f, double noise_scale, std::uint64_t seed);

/// Distance between input functions under the localizer's metric (k-NN uses L2).
double input_distance(const FunctionSample& a, const FunctionSample& b, KernelKind kernel);

LocalWeights local_weights(const FunctionSet& f_cal, const FunctionSample& f_test,
                           const LocalizerKind& kind);

/// Weights from precomputed distances.
LocalWeights weights_from_distances(std::vector<double> distances, const LocalizerKind& kind);

/// sum_t w_t d_t with the n+1 normalizer; exponential kernels only.
double coverage_gap_bound(const LocalWeights& w);

/// Truncated-linear localization weights built from sorted distances:
/// eta_t = max(0, 1/M + 2 (mu - d_t)), renormalized to sum to one.
std::vector<double> campbell_weights(std::span<const double> distances);

}  // namespace lsci
