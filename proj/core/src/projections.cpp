#include "lsci/projections.hpp"

#include <cmath>
#include <deque>
#include <utility>

#include <Eigen/Eigenvalues>

#include "lsci/io.hpp"
#include "lsci/random.hpp"

namespace lsci {

namespace {

constexpr double kUnitNormTolerance = 1e-10;

double weighted_norm(const Vector& w, const auto& d) {
  return std::sqrt(w.dot(d.transpose().cwiseAbs2()));
}

// Entry of largest magnitude made positive; first index wins ties.
void fix_sign(auto&& d) {
  Eigen::Index arg = 0;
  d.cwiseAbs().maxCoeff(&arg);
  if (d[arg] < 0.0) d = -d;
}

}  // namespace

std::string_view to_string(ProjectionKind kind) noexcept {
  switch (kind) {
    case ProjectionKind::Rand: return "rand";
    case ProjectionKind::FPCA: return "fpca";
    case ProjectionKind::Wave: return "wave";
    case ProjectionKind::RFPCA: return "rfpca";
    case ProjectionKind::RWave: return "rwave";
  }
  return "rand";
}

ProjectionKind parse_projection_kind(std::string_view name) {
  if (name == "rand") return ProjectionKind::Rand;
  if (name == "fpca") return ProjectionKind::FPCA;
  if (name == "wave") return ProjectionKind::Wave;
  if (name == "rfpca" || name == "r-fpca") return ProjectionKind::RFPCA;
  if (name == "rwave" || name == "r-wave") return ProjectionKind::RWave;
  throw Error(ErrorCode::Parse, "unknown projection kind '" + std::string(name) + "'");
}

ProjectionFamily::ProjectionFamily(GridPtr grid, Matrix directions, ProjectionKind kind,
                                   std::optional<std::uint64_t> seed, Vector eigenvalues,
                                   std::optional<Vector> center)
    : grid_(std::move(grid)),
      directions_(std::move(directions)),
      kind_(kind),
      seed_(seed),
      eigenvalues_(std::move(eigenvalues)),
      center_(std::move(center)) {
  if (!grid_) throw Error(ErrorCode::InvalidArgument, "projection family needs a grid");
  if (directions_.rows() < 1)
    throw Error(ErrorCode::InvalidArgument, "projection family needs at least one direction");
  if (static_cast<std::size_t>(directions_.cols()) != grid_->size())
    throw Error(ErrorCode::GridMismatch, "direction length does not match grid");
  const Vector& w = grid_->weights();
  for (Eigen::Index k = 0; k < directions_.rows(); ++k) {
    const double norm = weighted_norm(w, directions_.row(k));
    if (std::abs(norm - 1.0) > kUnitNormTolerance)
      throw Error(ErrorCode::InvalidArgument, "direction " + std::to_string(k) +
                                                  " does not have unit weighted norm");
  }
  if (center_ && static_cast<std::size_t>(center_->size()) != grid_->size())
    throw Error(ErrorCode::GridMismatch, "family center length does not match grid");
  weighted_ = directions_ * w.asDiagonal();
}

FunctionSample ProjectionFamily::direction(std::size_t k) const {
  if (k >= n_phi()) throw Error(ErrorCode::InvalidArgument, "direction index out of range");
  return FunctionSample(grid_, directions_.row(static_cast<Eigen::Index>(k)).transpose());
}

ProjectionFamily build_random(GridPtr grid, std::size_t n_phi, std::uint64_t seed) {
  if (n_phi < 1) throw Error(ErrorCode::InvalidArgument, "n_phi must be at least 1");
  const auto g = static_cast<Eigen::Index>(grid->size());
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix d(static_cast<Eigen::Index>(n_phi), g);
  const Vector& w = grid->weights();
  for (Eigen::Index k = 0; k < d.rows(); ++k) {
    double norm = 0.0;
    do {
      for (Eigen::Index i = 0; i < g; ++i) d(k, i) = normal(rng);
      norm = weighted_norm(w, d.row(k));
    } while (!(norm > 0.0));
    d.row(k) /= norm;
  }
  return ProjectionFamily(std::move(grid), std::move(d), ProjectionKind::Rand, seed);
}

ProjectionFamily build_fpca(const FunctionSet& residuals, std::span<const double> weights,
                            std::size_t n_phi) {
  const std::size_t n = residuals.size();
  const std::size_t g = residuals.grid().size();
  if (weights.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "FPCA weights do not match residual count");
  if (n_phi < 1 || n_phi > g)
    throw Error(ErrorCode::InvalidArgument, "n_phi must lie in [1, grid size]");
  double total = 0.0;
  std::vector<Eigen::Index> active;
  for (std::size_t t = 0; t < n; ++t) {
    if (!(weights[t] >= 0.0) || !std::isfinite(weights[t]))
      throw Error(ErrorCode::InvalidArgument, "FPCA weights must be finite and nonnegative");
    total += weights[t];
    if (weights[t] > 0.0) active.push_back(static_cast<Eigen::Index>(t));
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "FPCA weights are all zero");

  const auto& r = residuals.values();
  const Vector& qw = residuals.grid().weights();
  const Vector sqrt_qw = qw.cwiseSqrt();

  Vector mean = Vector::Zero(static_cast<Eigen::Index>(g));
  for (auto t : active) mean += (weights[static_cast<std::size_t>(t)] / total) * r.row(t).transpose();

  // Rows sqrt(w_t) (r_t - mean) W^{1/2}; the covariance operator in the
  // W-inner product is similar to X^T X.
  const auto m = static_cast<Eigen::Index>(active.size());
  Matrix x(m, static_cast<Eigen::Index>(g));
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto t = active[static_cast<std::size_t>(a)];
    const double s = std::sqrt(weights[static_cast<std::size_t>(t)] / total);
    x.row(a) = s * (r.row(t) - mean.transpose()).cwiseProduct(sqrt_qw.transpose());
  }
  const double trace = x.squaredNorm();
  const double scale = [&] {
    double acc = 0.0;
    for (auto t : active)
      acc += (weights[static_cast<std::size_t>(t)] / total) * qw.dot(r.row(t).transpose().cwiseAbs2());
    return acc;
  }();
  if (!(trace > 1e-24 * scale))
    throw Error(ErrorCode::DegenerateCovariance, "residuals have no weighted variance");

  Vector evals(static_cast<Eigen::Index>(n_phi));
  Matrix dirs(static_cast<Eigen::Index>(n_phi), static_cast<Eigen::Index>(g));

  const bool use_gram = g > 256 && static_cast<std::size_t>(m) < g;
  if (!use_gram) {
    Eigen::MatrixXd cov = Eigen::MatrixXd(x.transpose()) * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success)
      throw Error(ErrorCode::DegenerateCovariance, "eigensolver did not converge");
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    for (std::size_t k = 0; k < n_phi; ++k) {
      const Eigen::Index col = static_cast<Eigen::Index>(g - 1 - k);
      evals[static_cast<Eigen::Index>(k)] = std::max(vals[col], 0.0);
      dirs.row(static_cast<Eigen::Index>(k)) = vecs.col(col).cwiseQuotient(sqrt_qw).transpose();
    }
  } else {
    Eigen::MatrixXd gram = x * x.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success)
      throw Error(ErrorCode::DegenerateCovariance, "eigensolver did not converge");
    const auto& vals = es.eigenvalues();
    const double top = vals[m - 1];
    if (n_phi > static_cast<std::size_t>(m))
      throw Error(ErrorCode::Unsupported, "n_phi exceeds the number of weighted residuals");
    for (std::size_t k = 0; k < n_phi; ++k) {
      const Eigen::Index col = m - 1 - static_cast<Eigen::Index>(k);
      if (!(vals[col] > 1e-12 * top))
        throw Error(ErrorCode::Unsupported, "n_phi exceeds the rank of the weighted residuals");
      Vector v = x.transpose() * es.eigenvectors().col(col);
      v /= std::sqrt(vals[col]);
      v.normalize();
      evals[static_cast<Eigen::Index>(k)] = vals[col];
      dirs.row(static_cast<Eigen::Index>(k)) = v.cwiseQuotient(sqrt_qw).transpose();
    }
  }
  for (Eigen::Index k = 0; k < dirs.rows(); ++k) {
    auto row = dirs.row(k);
    row /= weighted_norm(qw, row);
    fix_sign(row);
  }
  return ProjectionFamily(residuals.grid_ptr(), std::move(dirs), ProjectionKind::FPCA, {},
                          std::move(evals), std::move(mean));
}

ProjectionFamily build_wavelet(GridPtr grid, std::size_t n_phi) {
  if (grid->kind() != GridKind::Interval1D)
    throw Error(ErrorCode::Unsupported, "wavelet projections are defined for 1D grids only");
  const std::size_t g = grid->size();
  if (n_phi < 1 || n_phi > g)
    throw Error(ErrorCode::InvalidArgument, "n_phi must lie in [1, grid size]");
  const Vector& w = grid->weights();
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(n_phi), static_cast<Eigen::Index>(g));
  d.row(0).setConstant(1.0 / std::sqrt(grid->measure()));

  std::deque<std::pair<std::size_t, std::size_t>> queue{{0, g}};
  std::size_t k = 1;
  while (k < n_phi && !queue.empty()) {
    const auto [lo, hi] = queue.front();
    queue.pop_front();
    if (hi - lo < 2) continue;
    const std::size_t mid = lo + (hi - lo) / 2;
    const double wl = w.segment(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(mid - lo)).sum();
    const double wr = w.segment(static_cast<Eigen::Index>(mid), static_cast<Eigen::Index>(hi - mid)).sum();
    auto row = d.row(static_cast<Eigen::Index>(k));
    for (std::size_t i = lo; i < mid; ++i) row[static_cast<Eigen::Index>(i)] = 1.0;
    for (std::size_t i = mid; i < hi; ++i) row[static_cast<Eigen::Index>(i)] = -wl / wr;
    row /= weighted_norm(w, row);
    queue.emplace_back(lo, mid);
    queue.emplace_back(mid, hi);
    ++k;
  }
  return ProjectionFamily(std::move(grid), std::move(d), ProjectionKind::Wave);
}

ProjectionFamily build_hybrid(const ProjectionFamily& base, GridPtr grid, std::size_t n_rand,
                              std::uint64_t seed) {
  require_same_grid(base.grid(), *grid);
  if (n_rand == 0) return base;
  const ProjectionFamily extra = build_random(grid, n_rand, seed);
  Matrix d(base.directions().rows() + extra.directions().rows(), base.directions().cols());
  d << base.directions(), extra.directions();
  ProjectionKind kind = base.kind();
  if (kind == ProjectionKind::FPCA) kind = ProjectionKind::RFPCA;
  if (kind == ProjectionKind::Wave) kind = ProjectionKind::RWave;
  return ProjectionFamily(std::move(grid), std::move(d), kind, seed, base.eigenvalues(),
                          base.center());
}

ProjectedScores project(const ProjectionFamily& family, const FunctionSet& fs) {
  require_same_grid(family.grid(), fs.grid());
  return ProjectedScores{family.weighted_directions() * fs.values().transpose()};
}

Vector project(const ProjectionFamily& family, const FunctionSample& f) {
  require_same_grid(family.grid(), f.grid());
  return family.weighted_directions() * f.values();
}

nlohmann::json to_json(const ProjectionFamily& family) {
  nlohmann::json j;
  j["kind"] = to_string(family.kind());
  j["n_phi"] = family.n_phi();
  if (family.seed()) j["seed"] = *family.seed();
  auto& dirs = j["directions"] = nlohmann::json::array();
  for (Eigen::Index k = 0; k < family.directions().rows(); ++k)
    dirs.push_back(io::vector_to_json(family.directions().row(k).transpose()));
  if (family.eigenvalues().size() > 0) j["eigenvalues"] = io::vector_to_json(family.eigenvalues());
  if (family.center()) j["center"] = io::vector_to_json(*family.center());
  return j;
}

ProjectionFamily projection_family_from_json(const nlohmann::json& j, GridPtr grid) {
  try {
    const auto& dirs = j.at("directions");
    Matrix d(static_cast<Eigen::Index>(dirs.size()), static_cast<Eigen::Index>(grid->size()));
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const Vector v = io::vector_from_json(dirs[k]);
      if (v.size() != d.cols()) throw Error(ErrorCode::GridMismatch, "direction length mismatch");
      d.row(static_cast<Eigen::Index>(k)) = v.transpose();
    }
    std::optional<std::uint64_t> seed;
    if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
    Vector evals;
    if (j.contains("eigenvalues")) evals = io::vector_from_json(j["eigenvalues"]);
    std::optional<Vector> center;
    if (j.contains("center")) center = io::vector_from_json(j["center"]);
    return ProjectionFamily(std::move(grid), std::move(d),
                            parse_projection_kind(j.at("kind").get<std::string>()), seed,
                            std::move(evals), std::move(center));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("projection family: ") + e.what());
  }
}

}  // namespace lsci
