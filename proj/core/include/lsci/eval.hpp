#pragma once

// Band metrics, distance correlation, and the split-conformal baselines.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsci/functional.hpp"
#include "lsci/sampler.hpp"

namespace lsci {

/// Quadrature-weighted fraction of the grid where target lies in the band.
double inside_fraction(const PredictionBand& band, const FunctionSample& target);

/// Fraction of targets whose inside fraction is at least 1 - delta.
double risk(std::span<const PredictionBand> bands, const FunctionSet& targets, double delta);

/// Median over grid points of upper - lower.
double width(const PredictionBand& band);

/// Sample distance correlation. Returns 0 when either input is constant.
double distance_correlation(std::span<const double> x, std::span<const double> y);

enum class BaselineKind { ConfL2, Supr, ConfModulated };

std::string_view to_string(BaselineKind kind) noexcept;

/// A fitted constant-shape band rule: residuals r with score(r) <= k are in
/// the set, and the pointwise band is prediction +- k * shape.
struct BaselineRule {
  BaselineKind kind;
  double k = 0.0;
  Vector shape;  // per grid point; ones for the constant rules
  GridPtr grid;

  double score(const FunctionSample& residual) const;
  bool contains_residual(const FunctionSample& residual) const { return score(residual) <= k; }
  PredictionBand band(const FunctionSample& prediction) const;
};

/// The ceil((1-alpha)(n+1))-th smallest score; throws InsufficientCalibration
/// when that rank exceeds n.
double conformal_quantile(std::vector<double> scores, double alpha);

/// L2-ball split conformal, rendered as a constant band of half-width
/// k / sqrt(domain measure).
BaselineRule baseline_conf_l2(const FunctionSet& residuals_cal, double alpha);
/// Sup-norm split conformal: constant band.
BaselineRule baseline_supr(const FunctionSet& residuals_cal, double alpha);
/// Sup-norm scores modulated by the pointwise standard deviation. The
/// modulation is fit on the first ceil(n/2) residuals and the scores come
/// from the rest.
BaselineRule baseline_conf_modulated(const FunctionSet& residuals_cal, double alpha);

struct SampleMetrics {
  double inside_fraction = 0.0;
  double width = 0.0;
  bool covered = false;  // set membership of the target, not the band
  double true_sigma = 0.0;
  double gap_bound = 0.0;  // NaN when undefined
  double acceptance_rate = 0.0;  // NaN when nothing was sampled
};

struct EvalReport {
  double risk = 0.0;
  double mean_marginal_coverage = 0.0;
  /// Mean over test samples of each band's median width.
  double median_width = 0.0;
  double dCR = 0.0;
  double dCW = 0.0;
  /// NaN when the localizer has no bound.
  double coverage_gap_bound_mean = 0.0;
  /// NaN for methods that do not sample.
  double mean_acceptance_rate = 0.0;
  std::vector<SampleMetrics> per_sample;
};

/// Aggregates per-sample metrics. With bands = false only coverage (and the
/// gap bound) are filled in.
EvalReport summarize(std::vector<SampleMetrics> per_sample, double delta, bool bands);

}  // namespace lsci
