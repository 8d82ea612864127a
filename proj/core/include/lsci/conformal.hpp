#pragma once

// Local projection-depth conformal calibration and membership testing.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsci/depth.hpp"
#include "lsci/functional.hpp"
#include "lsci/localize.hpp"
#include "lsci/projections.hpp"

namespace lsci {

/// Rank used to pick the depth threshold from n calibration depths.
///  - Coverage: k = floor(alpha (n+1)) smallest depth (q = 0 when k = 0).
///  - PaperLiteral: k = ceil((1-alpha)(n+1)) smallest depth, clamped to n.
enum class ThresholdRank { Coverage, PaperLiteral };

std::string_view to_string(ThresholdRank rank) noexcept;
ThresholdRank parse_threshold_rank(std::string_view name);

struct LsciConfig {
  ProjectionKind projection = ProjectionKind::Rand;
  std::size_t n_phi = 20;
  DepthKind depth = DepthKind::Tukey;
  LocalizerKind localizer{KernelKind::L2, 1.0};
  double alpha = 0.1;
  /// Knock-off noise standard deviation as a fraction of the calibration
  /// inputs' sample standard deviation. Ignored when knockoff_scale is set.
  double knockoff_factor = 0.05;
  std::optional<double> knockoff_scale;
  std::uint64_t seed = 0;
  ThresholdRank threshold_rank = ThresholdRank::Coverage;
  InfinityMass infinity_mass = InfinityMass::Upper;
  /// Tails credited with a calibration atom's own mass when it is scored.
  AtomMass atom_mass = AtomMass::Upper;

  void validate() const;
};

nlohmann::json to_json(const LsciConfig& c);
LsciConfig lsci_config_from_json(const nlohmann::json& j, LsciConfig base = {});

struct CalibrationScores {
  std::vector<double> depths;
};

/// Frozen prediction set for one test input: accepted candidates g are those
/// with phi_depth(g - prediction) >= q.
struct CalibratedPredictor {
  ProjectionFamily family;
  std::vector<LocalMeasure> measures;
  DepthKind depth_kind = DepthKind::Tukey;
  double q = 0.0;
  double alpha = 0.1;
  FunctionSample prediction;
  LocalWeights weights;
  CalibrationScores scores;

  double residual_depth(const FunctionSample& r) const;
  double residual_depth(std::span<const double> projected) const;
  bool contains(const FunctionSample& g_candidate) const;
};

/// One measure per projection: atoms phi_k(r_t) with mass w_t and the test
/// slot's mass at +inf. `orders`, when given, holds the ascending sort order
/// of each row of the projected scores.
std::vector<LocalMeasure> build_measures(const ProjectedScores& proj_cal, const LocalWeights& w,
                                         InfinityMass placement = InfinityMass::Upper,
                                         const std::vector<std::vector<std::size_t>>* orders = nullptr);

CalibrationScores calibration_scores(const FunctionSet& residuals_cal, const ProjectionFamily& family,
                                     std::span<const LocalMeasure> measures, DepthKind kind);

/// Scores of the atoms themselves, read off the measures' sorted storage.
CalibrationScores calibration_scores_from_measures(std::span<const LocalMeasure> measures,
                                                   std::size_t n, DepthKind kind,
                                                   AtomMass own = AtomMass::Both);

double threshold(const CalibrationScores& scores, double alpha,
                 ThresholdRank rank = ThresholdRank::Coverage);

bool contains(const CalibratedPredictor& pred, const FunctionSample& g_candidate);

/// Reusable calibration state for one calibration set. Projection families
/// that do not depend on the test input are built and projected once.
class LsciCalibrator {
 public:
  LsciCalibrator(FunctionSet residuals_cal, FunctionSet f_cal, LsciConfig config);

  /// `stream` selects the knock-off noise substream; distinct test points
  /// should use distinct streams.
  CalibratedPredictor calibrate(const FunctionSample& f_test, const FunctionSample& prediction,
                                std::uint64_t stream = 0) const;

  /// Localization weights only (knock-off included).
  LocalWeights weights_for(const FunctionSample& f_test, std::uint64_t stream = 0) const;

  const LsciConfig& config() const noexcept { return config_; }
  const FunctionSet& residuals() const noexcept { return residuals_; }
  const FunctionSet& inputs() const noexcept { return inputs_; }
  double knockoff_scale() const noexcept { return knockoff_scale_; }

 private:
  ProjectionFamily family_for(const LocalWeights& w) const;

  FunctionSet residuals_;
  FunctionSet inputs_;
  LsciConfig config_;
  double knockoff_scale_ = 0.0;
  std::optional<ProjectionFamily> fixed_family_;
  std::optional<ProjectedScores> fixed_projection_;
  std::vector<std::vector<std::size_t>> fixed_orders_;
};

CalibratedPredictor calibrate(const FunctionSet& base_residuals, const FunctionSet& f_cal,
                              const FunctionSample& f_test, const FunctionSample& prediction,
                              const LsciConfig& config);

nlohmann::json to_json(const CalibratedPredictor& pred);
CalibratedPredictor calibrated_predictor_from_json(const nlohmann::json& j);

}  // namespace lsci
