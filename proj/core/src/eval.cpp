#include "lsci/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lsci {

namespace {

bool is_constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double scale = std::max({1.0, std::abs(*lo), std::abs(*hi)});
  return (*hi - *lo) <= 1e-12 * scale;
}

std::vector<double> row_means(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(v[i] - v[j]);
    out[i] = s / static_cast<double>(n);
  }
  return out;
}

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

void require_calibration(const FunctionSet& residuals_cal) {
  if (residuals_cal.empty()) throw Error(ErrorCode::InsufficientCalibration, "no calibration residuals");
}

BaselineRule rule_from_scores(BaselineKind kind, const FunctionSet& residuals_cal, double alpha,
                              Vector shape, double band_scale) {
  BaselineRule rule{kind, 0.0, std::move(shape), residuals_cal.grid_ptr()};
  std::vector<double> scores(residuals_cal.size());
  for (std::size_t t = 0; t < scores.size(); ++t) scores[t] = rule.score(residuals_cal.sample(t));
  rule.k = conformal_quantile(std::move(scores), alpha);
  rule.shape *= band_scale;
  return rule;
}

}  // namespace

double inside_fraction(const PredictionBand& band, const FunctionSample& target) {
  require_same_grid(band.lower.grid(), target.grid());
  require_same_grid(band.upper.grid(), target.grid());
  const Vector& w = target.grid().weights();
  double inside = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] >= band.lower[i] && target[i] <= band.upper[i]) inside += w[static_cast<Eigen::Index>(i)];
  }
  return inside / target.grid().measure();
}

double risk(std::span<const PredictionBand> bands, const FunctionSet& targets, double delta) {
  if (bands.size() != targets.size())
    throw Error(ErrorCode::ShapeMismatch, "one band per target required");
  if (bands.empty()) throw Error(ErrorCode::ShapeMismatch, "no targets");
  std::size_t covered = 0;
  for (std::size_t i = 0; i < bands.size(); ++i)
    if (inside_fraction(bands[i], targets.sample(i)) >= 1.0 - delta) ++covered;
  return static_cast<double>(covered) / static_cast<double>(bands.size());
}

double width(const PredictionBand& band) {
  require_same_grid(band.lower.grid(), band.upper.grid());
  const Vector gap = band.upper.values() - band.lower.values();
  return median(std::vector<double>(gap.begin(), gap.end()));
}

double distance_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::ShapeMismatch, "dCor inputs differ in length");
  if (x.size() < 4) throw Error(ErrorCode::InvalidArgument, "dCor needs at least 4 observations");
  if (is_constant(x) || is_constant(y)) return 0.0;

  const std::size_t n = x.size();
  const std::vector<double> ax = row_means(x);
  const std::vector<double> ay = row_means(y);
  const double gx = std::accumulate(ax.begin(), ax.end(), 0.0) / static_cast<double>(n);
  const double gy = std::accumulate(ay.begin(), ay.end(), 0.0) / static_cast<double>(n);

  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::abs(x[i] - x[j]) - ax[i] - ax[j] + gx;
      const double b = std::abs(y[i] - y[j]) - ay[i] - ay[j] + gy;
      xy += a * b;
      xx += a * a;
      yy += b * b;
    }
  }
  const double denom = std::sqrt(xx * yy);
  if (!(denom > 0.0)) return 0.0;
  return std::sqrt(std::clamp(xy / denom, 0.0, 1.0));
}

std::string_view to_string(BaselineKind kind) noexcept {
  switch (kind) {
    case BaselineKind::ConfL2: return "conf1";
    case BaselineKind::Supr: return "supr";
    case BaselineKind::ConfModulated: return "conf2";
  }
  return "conf1";
}

double BaselineRule::score(const FunctionSample& residual) const {
  require_same_grid(*grid, residual.grid());
  switch (kind) {
    case BaselineKind::ConfL2: return l2_norm(residual);
    case BaselineKind::Supr: return sup_norm(residual);
    case BaselineKind::ConfModulated: {
      // shape holds the unscaled modulation for this rule
      return (residual.values().array().abs() / shape.array()).maxCoeff();
    }
  }
  return 0.0;
}

PredictionBand BaselineRule::band(const FunctionSample& prediction) const {
  require_same_grid(*grid, prediction.grid());
  const Vector half = k * shape;
  return PredictionBand{FunctionSample(grid, prediction.values() - half),
                        FunctionSample(grid, prediction.values() + half)};
}

double conformal_quantile(std::vector<double> scores, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  const std::size_t n = scores.size();
  const double rank = std::ceil((1.0 - alpha) * static_cast<double>(n + 1) - 1e-9);
  if (n == 0 || rank > static_cast<double>(n))
    throw Error(ErrorCode::InsufficientCalibration,
                "need at least 1/alpha - 1 calibration scores, have " + std::to_string(n));
  const auto k = static_cast<std::size_t>(std::max(rank, 1.0));
  auto it = scores.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(scores.begin(), it, scores.end());
  return *it;
}

BaselineRule baseline_conf_l2(const FunctionSet& residuals_cal, double alpha) {
  require_calibration(residuals_cal);
  const auto g = static_cast<Eigen::Index>(residuals_cal.grid().size());
  return rule_from_scores(BaselineKind::ConfL2, residuals_cal, alpha, Vector::Ones(g),
                          1.0 / std::sqrt(residuals_cal.grid().measure()));
}

BaselineRule baseline_supr(const FunctionSet& residuals_cal, double alpha) {
  require_calibration(residuals_cal);
  const auto g = static_cast<Eigen::Index>(residuals_cal.grid().size());
  return rule_from_scores(BaselineKind::Supr, residuals_cal, alpha, Vector::Ones(g), 1.0);
}

BaselineRule baseline_conf_modulated(const FunctionSet& residuals_cal, double alpha) {
  const std::size_t n = residuals_cal.size();
  if (n < 3) throw Error(ErrorCode::InsufficientCalibration, "modulated band needs at least 3 residuals");
  // The first half fits the modulation, the second half is scored.
  const auto n_fit = static_cast<Eigen::Index>((n + 1) / 2);
  const auto fit = residuals_cal.values().topRows(n_fit);
  const Eigen::RowVectorXd mean = fit.colwise().mean();
  const Eigen::RowVectorXd var =
      (fit.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(n_fit - 1);
  Vector s = var.transpose().cwiseSqrt().cwiseMax(1e-8);
  std::vector<std::size_t> rest(n - static_cast<std::size_t>(n_fit));
  std::iota(rest.begin(), rest.end(), static_cast<std::size_t>(n_fit));
  return rule_from_scores(BaselineKind::ConfModulated, residuals_cal.subset(rest), alpha, std::move(s), 1.0);
}

EvalReport summarize(std::vector<SampleMetrics> per_sample, double delta, bool bands) {
  if (per_sample.empty()) throw Error(ErrorCode::ShapeMismatch, "no samples to summarize");
  const auto n = static_cast<double>(per_sample.size());
  EvalReport r;
  double gap_sum = 0.0, acc_sum = 0.0;
  bool gap_defined = true;
  for (const auto& s : per_sample) {
    acc_sum += s.acceptance_rate;
    r.mean_marginal_coverage += s.covered ? 1.0 : 0.0;
    if (std::isnan(s.gap_bound)) gap_defined = false;
    gap_sum += s.gap_bound;
  }
  r.mean_marginal_coverage /= n;
  r.mean_acceptance_rate = acc_sum / n;
  r.coverage_gap_bound_mean = gap_defined ? gap_sum / n : std::numeric_limits<double>::quiet_NaN();

  if (bands) {
    std::vector<double> loss, widths, sigma;
    std::size_t within = 0;
    for (const auto& s : per_sample) {
      if (s.inside_fraction >= 1.0 - delta) ++within;
      loss.push_back(1.0 - s.inside_fraction);
      widths.push_back(s.width);
      sigma.push_back(s.true_sigma);
      r.median_width += s.width;
    }
    r.risk = static_cast<double>(within) / n;
    r.median_width /= n;
    if (per_sample.size() >= 4) {
      r.dCR = distance_correlation(loss, sigma);
      r.dCW = distance_correlation(widths, sigma);
    }
  }
  r.per_sample = std::move(per_sample);
  return r;
}

}  // namespace lsci
