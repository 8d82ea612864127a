#include "lsci/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lsci/io.hpp"
#include "lsci/random.hpp"

namespace lsci {

namespace {

constexpr double kRankSlack = 1e-9;

std::vector<std::size_t> ascending_order(const auto& row) {
  std::vector<std::size_t> order(static_cast<std::size_t>(row.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return row[static_cast<Eigen::Index>(a)] < row[static_cast<Eigen::Index>(b)];
  });
  return order;
}

double sample_std(const Matrix& m) {
  const double n = static_cast<double>(m.size());
  if (n < 2) return 0.0;
  const double mean = m.mean();
  return std::sqrt((m.array() - mean).square().sum() / (n - 1.0));
}

}  // namespace

std::string_view to_string(ThresholdRank rank) noexcept {
  return rank == ThresholdRank::Coverage ? "coverage" : "paper_literal";
}

ThresholdRank parse_threshold_rank(std::string_view name) {
  if (name == "coverage") return ThresholdRank::Coverage;
  if (name == "paper_literal") return ThresholdRank::PaperLiteral;
  throw Error(ErrorCode::Parse, "unknown threshold rank '" + std::string(name) + "'");
}

void LsciConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  if (n_phi < 1) throw Error(ErrorCode::InvalidArgument, "n_phi must be at least 1");
  if (!(localizer.bandwidth >= 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidth must be >= 0");
  if (!(knockoff_factor >= 0.0)) throw Error(ErrorCode::InvalidArgument, "knock-off factor must be >= 0");
  if (knockoff_scale && !(*knockoff_scale >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "knock-off scale must be >= 0");
}

nlohmann::json to_json(const LsciConfig& c) {
  nlohmann::json j;
  j["projection"] = to_string(c.projection);
  j["n_phi"] = c.n_phi;
  j["depth"] = to_string(c.depth);
  j["localizer"] = to_string(c.localizer.kernel);
  j["lambda"] = c.localizer.bandwidth;
  j["alpha"] = c.alpha;
  j["knockoff_factor"] = c.knockoff_factor;
  if (c.knockoff_scale) j["knockoff_scale"] = *c.knockoff_scale;
  j["seed"] = c.seed;
  j["threshold_rank"] = to_string(c.threshold_rank);
  j["infinity_mass"] = to_string(c.infinity_mass);
  j["atom_mass"] = to_string(c.atom_mass);
  return j;
}

LsciConfig lsci_config_from_json(const nlohmann::json& j, LsciConfig c) {
  try {
    if (j.contains("projection")) c.projection = parse_projection_kind(j["projection"].get<std::string>());
    if (j.contains("n_phi")) c.n_phi = j["n_phi"].get<std::size_t>();
    if (j.contains("depth")) c.depth = parse_depth_kind(j["depth"].get<std::string>());
    if (j.contains("localizer")) c.localizer.kernel = parse_kernel_kind(j["localizer"].get<std::string>());
    if (j.contains("lambda")) c.localizer.bandwidth = j["lambda"].get<double>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("knockoff_factor")) c.knockoff_factor = j["knockoff_factor"].get<double>();
    if (j.contains("knockoff_scale")) c.knockoff_scale = j["knockoff_scale"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threshold_rank"))
      c.threshold_rank = parse_threshold_rank(j["threshold_rank"].get<std::string>());
    if (j.contains("infinity_mass"))
      c.infinity_mass = parse_infinity_mass(j["infinity_mass"].get<std::string>());
    if (j.contains("atom_mass")) c.atom_mass = parse_atom_mass(j["atom_mass"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("LSCI config: ") + e.what());
  }
  c.validate();
  return c;
}

double CalibratedPredictor::residual_depth(std::span<const double> projected) const {
  return phi_depth(projected, measures, depth_kind);
}

double CalibratedPredictor::residual_depth(const FunctionSample& r) const {
  return phi_depth(r, family, measures, depth_kind);
}

bool CalibratedPredictor::contains(const FunctionSample& g_candidate) const {
  return residual_depth(subtract(g_candidate, prediction)) >= q;
}

bool contains(const CalibratedPredictor& pred, const FunctionSample& g_candidate) {
  return pred.contains(g_candidate);
}

std::vector<LocalMeasure> build_measures(const ProjectedScores& proj_cal, const LocalWeights& w,
                                         InfinityMass placement,
                                         const std::vector<std::vector<std::size_t>>* orders) {
  const std::size_t n = proj_cal.n_samples();
  if (w.w.size() != n + 1)
    throw Error(ErrorCode::ShapeMismatch, "weights must have one entry per calibration sample plus one");
  if (orders && orders->size() != proj_cal.n_phi())
    throw Error(ErrorCode::ShapeMismatch, "one sort order per projection is required");
  std::vector<LocalMeasure> out;
  out.reserve(proj_cal.n_phi());
  for (std::size_t k = 0; k < proj_cal.n_phi(); ++k) {
    const auto row = proj_cal.values.row(static_cast<Eigen::Index>(k));
    std::vector<std::size_t> order = orders ? (*orders)[k] : ascending_order(row);
    std::vector<double> loc(n);
    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i) {
      loc[i] = row[static_cast<Eigen::Index>(order[i])];
      mass[i] = w.w[order[i]];
    }
    out.emplace_back(std::move(loc), std::move(mass), w.w[n], placement, std::move(order));
  }
  return out;
}

CalibrationScores calibration_scores_from_measures(std::span<const LocalMeasure> measures,
                                                   std::size_t n, DepthKind kind, AtomMass own) {
  CalibrationScores s;
  s.depths.assign(n, 1.0);
  for (const auto& m : measures) {
    if (m.size() != n || m.source_index().size() != n)
      throw Error(ErrorCode::ShapeMismatch, "measure does not cover the calibration set");
    for (std::size_t pos = 0; pos < n; ++pos) {
      auto& d = s.depths[m.source_index()[pos]];
      d = std::min(d, m.depth_at(pos, kind, own));
    }
  }
  return s;
}

CalibrationScores calibration_scores(const FunctionSet& residuals_cal, const ProjectionFamily& family,
                                     std::span<const LocalMeasure> measures, DepthKind kind) {
  if (measures.size() != family.n_phi())
    throw Error(ErrorCode::ShapeMismatch, "one measure per projection is required");
  const ProjectedScores p = project(family, residuals_cal);
  CalibrationScores s;
  s.depths.resize(residuals_cal.size());
  std::vector<double> col(family.n_phi());
  for (std::size_t t = 0; t < residuals_cal.size(); ++t) {
    for (std::size_t k = 0; k < family.n_phi(); ++k)
      col[k] = p.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t));
    s.depths[t] = phi_depth(col, measures, kind);
  }
  return s;
}

double threshold(const CalibrationScores& scores, double alpha, ThresholdRank rank) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  const std::size_t n = scores.depths.size();
  const double np1 = static_cast<double>(n + 1);
  std::size_t k = 0;
  if (rank == ThresholdRank::Coverage) {
    k = static_cast<std::size_t>(std::floor(alpha * np1 + kRankSlack));
  } else {
    k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * np1 - kRankSlack));
  }
  k = std::min(k, n);
  if (k < 1) return 0.0;
  std::vector<double> d = scores.depths;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
  return d[k - 1];
}

LsciCalibrator::LsciCalibrator(FunctionSet residuals_cal, FunctionSet f_cal, LsciConfig config)
    : residuals_(std::move(residuals_cal)), inputs_(std::move(f_cal)), config_(config) {
  config_.validate();
  if (residuals_.empty()) throw Error(ErrorCode::EmptyCalibration, "calibration set is empty");
  if (inputs_.size() != residuals_.size())
    throw Error(ErrorCode::ShapeMismatch, "calibration inputs and residuals differ in count");
  knockoff_scale_ = config_.knockoff_scale ? *config_.knockoff_scale
                                           : config_.knockoff_factor * sample_std(inputs_.values());

  const auto& grid = residuals_.grid_ptr();
  switch (config_.projection) {
    case ProjectionKind::Rand:
      fixed_family_ = build_random(grid, config_.n_phi, derive_seed(config_.seed, {1}));
      break;
    case ProjectionKind::Wave:
      fixed_family_ = build_wavelet(grid, config_.n_phi);
      break;
    case ProjectionKind::RWave: {
      const std::size_t n_base = (config_.n_phi + 1) / 2;
      fixed_family_ = build_hybrid(build_wavelet(grid, n_base), grid, config_.n_phi - n_base,
                                   derive_seed(config_.seed, {2}));
      break;
    }
    case ProjectionKind::FPCA:
    case ProjectionKind::RFPCA:
      break;
  }
  if (fixed_family_) {
    fixed_projection_ = project(*fixed_family_, residuals_);
    for (std::size_t k = 0; k < fixed_projection_->n_phi(); ++k)
      fixed_orders_.push_back(ascending_order(fixed_projection_->values.row(static_cast<Eigen::Index>(k))));
  }
}

LocalWeights LsciCalibrator::weights_for(const FunctionSample& f_test, std::uint64_t stream) const {
  const FunctionSample tilde = knockoff(f_test, knockoff_scale_, derive_seed(config_.seed, {3, stream}));
  return local_weights(inputs_, tilde, config_.localizer);
}

ProjectionFamily LsciCalibrator::family_for(const LocalWeights& w) const {
  if (fixed_family_) return *fixed_family_;
  const auto& grid = residuals_.grid_ptr();
  if (config_.projection == ProjectionKind::FPCA)
    return build_fpca(residuals_, w.calibration(), std::min(config_.n_phi, grid->size()));
  const std::size_t n_base = (config_.n_phi + 1) / 2;
  return build_hybrid(build_fpca(residuals_, w.calibration(), std::min(n_base, grid->size())), grid,
                      config_.n_phi - n_base, derive_seed(config_.seed, {2}));
}

CalibratedPredictor LsciCalibrator::calibrate(const FunctionSample& f_test,
                                              const FunctionSample& prediction,
                                              std::uint64_t stream) const {
  require_same_grid(prediction.grid(), residuals_.grid());
  LocalWeights w = weights_for(f_test, stream);
  ProjectionFamily family = family_for(w);
  std::vector<LocalMeasure> measures;
  if (fixed_family_) {
    measures = build_measures(*fixed_projection_, w, config_.infinity_mass, &fixed_orders_);
  } else {
    measures = build_measures(project(family, residuals_), w, config_.infinity_mass);
  }
  CalibrationScores scores =
      calibration_scores_from_measures(measures, residuals_.size(), config_.depth, config_.atom_mass);
  const double q = threshold(scores, config_.alpha, config_.threshold_rank);
  return CalibratedPredictor{std::move(family), std::move(measures), config_.depth, q,
                             config_.alpha,     prediction,          std::move(w),  std::move(scores)};
}

CalibratedPredictor calibrate(const FunctionSet& base_residuals, const FunctionSet& f_cal,
                              const FunctionSample& f_test, const FunctionSample& prediction,
                              const LsciConfig& config) {
  return LsciCalibrator(base_residuals, f_cal, config).calibrate(f_test, prediction);
}

nlohmann::json to_json(const CalibratedPredictor& pred) {
  nlohmann::json j;
  j["grid"] = io::grid_to_json(pred.prediction.grid());
  j["depth"] = to_string(pred.depth_kind);
  j["q"] = pred.q;
  j["scores"] = pred.scores.depths;
  j["alpha"] = pred.alpha;
  j["prediction"] = io::vector_to_json(pred.prediction.values());
  j["family"] = to_json(pred.family);
  auto& ms = j["measures"] = nlohmann::json::array();
  for (const auto& m : pred.measures) {
    nlohmann::json mj;
    mj["locations"] = m.locations();
    mj["weights"] = m.weights();
    mj["inf_mass"] = m.inf_mass();
    mj["placement"] = to_string(m.placement());
    mj["source_index"] = m.source_index();
    ms.push_back(std::move(mj));
  }
  nlohmann::json wj;
  wj["w"] = pred.weights.w;
  wj["distances"] = pred.weights.distances;
  wj["localizer"] = to_string(pred.weights.localizer.kernel);
  wj["lambda"] = pred.weights.localizer.bandwidth;
  j["weights"] = std::move(wj);
  return j;
}

CalibratedPredictor calibrated_predictor_from_json(const nlohmann::json& j) {
  try {
    GridPtr grid = io::grid_from_json(j.at("grid"));
    ProjectionFamily family = projection_family_from_json(j.at("family"), grid);
    std::vector<LocalMeasure> measures;
    for (const auto& mj : j.at("measures")) {
      measures.emplace_back(mj.at("locations").get<std::vector<double>>(),
                            mj.at("weights").get<std::vector<double>>(),
                            mj.at("inf_mass").get<double>(),
                            parse_infinity_mass(mj.value("placement", std::string("upper"))),
                            mj.value("source_index", std::vector<std::size_t>{}));
    }
    const auto& wj = j.at("weights");
    LocalWeights w;
    w.w = wj.at("w").get<std::vector<double>>();
    w.distances = wj.at("distances").get<std::vector<double>>();
    w.localizer.kernel = parse_kernel_kind(wj.at("localizer").get<std::string>());
    w.localizer.bandwidth = wj.at("lambda").get<double>();
    FunctionSample prediction(grid, io::vector_from_json(j.at("prediction")));
    return CalibratedPredictor{std::move(family),
                               std::move(measures),
                               parse_depth_kind(j.at("depth").get<std::string>()),
                               j.at("q").get<double>(),
                               j.at("alpha").get<double>(),
                               std::move(prediction),
                               std::move(w),
                               {j.value("scores", std::vector<double>{})}};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("calibrated predictor: ") + e.what());
  }
}

}  // namespace lsci
