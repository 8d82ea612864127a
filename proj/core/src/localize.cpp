#include "lsci/localize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lsci/random.hpp"

namespace lsci {

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::L2: return "l2";
    case KernelKind::LInf: return "linf";
    case KernelKind::KNN: return "knn";
  }
  return "l2";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "l2") return KernelKind::L2;
  if (name == "linf") return KernelKind::LInf;
  if (name == "knn") return KernelKind::KNN;
  throw Error(ErrorCode::Parse, "unknown localizer '" + std::string(name) + "'");
}

std::size_t LocalizerKind::knn_count(std::size_t n) const {
  const double k = std::round(static_cast<double>(n) / (1.0 + bandwidth));
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(k, 1.0)), 1, std::max<std::size_t>(n, 1));
}

FunctionSample knockoff(const FunctionSample& f, double noise_scale, std::uint64_t seed) {
  if (!(noise_scale >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise scale must be >= 0");
  if (noise_scale == 0.0) return f;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, noise_scale);
  Vector v = f.values();
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += normal(rng);
  return FunctionSample(f.grid_ptr(), std::move(v));
}

double input_distance(const FunctionSample& a, const FunctionSample& b, KernelKind kernel) {
  const FunctionSample d = subtract(a, b);
  return kernel == KernelKind::LInf ? sup_norm(d) : l2_norm(d);
}

LocalWeights weights_from_distances(std::vector<double> distances, const LocalizerKind& kind) {
  if (!(kind.bandwidth >= 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidth must be >= 0");
  const std::size_t n = distances.size();
  LocalWeights out;
  out.localizer = kind;
  out.w.assign(n + 1, 0.0);
  if (kind.kernel == KernelKind::KNN) {
    const std::size_t k = n == 0 ? 0 : kind.knn_count(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
    const double mass = 1.0 / static_cast<double>(k + 1);
    for (std::size_t i = 0; i < k; ++i) out.w[order[i]] = mass;
    out.w[n] = mass;
  } else {
    for (std::size_t t = 0; t < n; ++t) {
      if (!(distances[t] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "distances must be >= 0");
      out.w[t] = std::exp(-kind.bandwidth * distances[t]);
    }
    out.w[n] = 1.0;
  }
  const double total = std::accumulate(out.w.begin(), out.w.end(), 0.0);
  for (auto& v : out.w) v /= total;
  out.distances = std::move(distances);
  return out;
}

LocalWeights local_weights(const FunctionSet& f_cal, const FunctionSample& f_test,
                           const LocalizerKind& kind) {
  require_same_grid(f_cal.grid(), f_test.grid());
  const std::size_t n = f_cal.size();
  std::vector<double> d(n);
  const Vector& qw = f_test.grid().weights();
  for (std::size_t t = 0; t < n; ++t) {
    const auto diff = f_cal.row(t).transpose() - f_test.values();
    d[t] = kind.kernel == KernelKind::LInf ? diff.cwiseAbs().maxCoeff()
                                           : std::sqrt(qw.dot(diff.cwiseAbs2()));
  }
  return weights_from_distances(std::move(d), kind);
}

double coverage_gap_bound(const LocalWeights& w) {
  if (w.localizer.kernel == KernelKind::KNN)
    throw Error(ErrorCode::Unsupported, "coverage gap bound holds for exponential kernels only");
  double acc = 0.0;
  for (std::size_t t = 0; t < w.n(); ++t) acc += w.w[t] * w.distances[t];
  return acc;
}

std::vector<double> campbell_weights(std::span<const double> distances) {
  const std::size_t n = distances.size();
  if (n == 0) throw Error(ErrorCode::DegenerateWeights, "no distances");
  for (double d : distances)
    if (!std::isfinite(d)) throw Error(ErrorCode::InvalidArgument, "distances must be finite");
  std::vector<double> sorted(distances.begin(), distances.end());
  std::sort(sorted.begin(), sorted.end());

  // Largest M with mean_{m<=M}(1 + 2 d_(m)) >= 2 d_(M).
  std::size_t best_m = 1;
  double running = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    running += 1.0 + 2.0 * sorted[m - 1];
    if (running / static_cast<double>(m) >= 2.0 * sorted[m - 1]) best_m = m;
  }
  double mu = 0.0;
  for (std::size_t m = 0; m < best_m; ++m) mu += sorted[m];
  mu /= static_cast<double>(best_m);

  std::vector<double> eta(n);
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    eta[t] = std::max(0.0, 1.0 / static_cast<double>(best_m) + 2.0 * (mu - distances[t]));
    total += eta[t];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateWeights, "all eta-weights vanish");
  for (auto& e : eta) e /= total;
  return eta;
}

}  // namespace lsci
