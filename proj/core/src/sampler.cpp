#include "lsci/sampler.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "lsci/random.hpp"

namespace lsci {

std::string_view to_string(ProposalFamily p) noexcept {
  return p == ProposalFamily::LocalFpca ? "local_fpca" : "scoring";
}

ProposalFamily parse_proposal_family(std::string_view name) {
  if (name == "local_fpca") return ProposalFamily::LocalFpca;
  if (name == "scoring") return ProposalFamily::Scoring;
  throw Error(ErrorCode::Parse, "unknown proposal family '" + std::string(name) + "'");
}

namespace {

// Proposal geometry: r = base + D^T c, with base the center minus its
// projection on the proposal directions.
struct Proposal {
  Vector base;
  Matrix directions;  // M x G
};

Proposal make_proposal(const ProjectionFamily& family) {
  const auto g = static_cast<Eigen::Index>(family.grid().size());
  Vector center = family.center() ? *family.center() : Vector::Zero(g);
  const Vector coords = family.weighted_directions() * center;
  Vector base = center - family.directions().transpose() * coords;
  return Proposal{std::move(base), family.directions()};
}

double open_uniform(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = 0.0;
  do {
    u = unif(rng);
  } while (!(u > 0.0));
  return u;
}

}  // namespace

FunctionSample inverse_transform_sample(std::span<const LocalMeasure> measures,
                                        std::span<const double> u, const ProjectionFamily& family) {
  if (measures.size() != family.n_phi() || u.size() != family.n_phi())
    throw Error(ErrorCode::ShapeMismatch, "need one measure and one u per direction");
  for (double v : u)
    if (!(v > 0.0 && v < 1.0)) throw Error(ErrorCode::InvalidU, "u must lie in (0, 1)");
  const Proposal p = make_proposal(family);
  Vector c(static_cast<Eigen::Index>(u.size()));
  for (std::size_t k = 0; k < u.size(); ++k) c[static_cast<Eigen::Index>(k)] = measures[k].quantile(u[k]);
  return FunctionSample(family.grid_ptr(), p.base + p.directions.transpose() * c);
}

PredictionEnsemble sample_ensemble(const CalibratedPredictor& pred, const FunctionSet& residuals_cal,
                                   const SamplerConfig& config, std::uint64_t seed) {
  if (config.M < 1 || config.n_s < 1)
    throw Error(ErrorCode::InvalidArgument, "M and n_s must be at least 1");
  require_same_grid(residuals_cal.grid(), pred.prediction.grid());
  if (pred.weights.n() != residuals_cal.size())
    throw Error(ErrorCode::ShapeMismatch, "predictor weights do not match the calibration set");

  const auto& grid = residuals_cal.grid_ptr();
  const auto g = static_cast<Eigen::Index>(grid->size());

  // Proposal family and its local measures.
  std::optional<ProjectionFamily> family;
  std::vector<LocalMeasure> proposal_measures;
  Vector fallback;
  if (config.proposal == ProposalFamily::Scoring) {
    family = pred.family;
    proposal_measures = pred.measures;
  } else {
    try {
      family = build_fpca(residuals_cal, pred.weights.calibration(),
                          std::min<std::size_t>(config.M, grid->size()));
      proposal_measures = build_measures(project(*family, residuals_cal), pred.weights);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateCovariance) throw;
      // All weighted residuals coincide: every proposal is their mean.
      fallback = Vector::Zero(g);
      double total = 0.0;
      for (std::size_t t = 0; t < residuals_cal.size(); ++t) {
        const double w = pred.weights.w[t];
        fallback += w * residuals_cal.row(t).transpose();
        total += w;
      }
      fallback /= total;
    }
  }

  const std::size_t budget = config.proposal_budget();
  Rng rng(seed);
  Matrix accepted(static_cast<Eigen::Index>(config.n_s), g);
  std::size_t n_acc = 0;
  std::size_t n_prop = 0;

  const Matrix& scoring = pred.family.weighted_directions();
  std::vector<double> projected(pred.family.n_phi());

  if (!family) {
    const Vector proj = scoring * fallback;
    projected.assign(proj.data(), proj.data() + proj.size());
    const bool ok = pred.residual_depth(projected) >= pred.q;
    while (n_acc < config.n_s && n_prop < budget) {
      ++n_prop;
      if (!ok) continue;
      accepted.row(static_cast<Eigen::Index>(n_acc++)) = (pred.prediction.values() + fallback).transpose();
    }
  } else {
    const Proposal p = make_proposal(*family);
    const std::size_t m = family->n_phi();
    Vector c(static_cast<Eigen::Index>(m));
    Vector member(g);
    Vector proj(static_cast<Eigen::Index>(pred.family.n_phi()));
    while (n_acc < config.n_s && n_prop < budget) {
      ++n_prop;
      for (std::size_t k = 0; k < m; ++k)
        c[static_cast<Eigen::Index>(k)] = proposal_measures[k].quantile(open_uniform(rng));
      member.noalias() = pred.prediction.values() + p.base + p.directions.transpose() * c;
      // Same arithmetic as CalibratedPredictor::contains, so acceptance and
      // later membership checks agree bit for bit.
      const Vector residual = member - pred.prediction.values();
      proj.noalias() = scoring * residual;
      if (pred.residual_depth(std::span<const double>(proj.data(), static_cast<std::size_t>(proj.size()))) <
          pred.q)
        continue;
      accepted.row(static_cast<Eigen::Index>(n_acc++)) = member.transpose();
    }
  }

  if (n_acc < config.n_s) {
    const double rate = n_prop ? static_cast<double>(n_acc) / static_cast<double>(n_prop) : 0.0;
    throw Error(ErrorCode::AcceptanceStalled,
                "accepted " + std::to_string(n_acc) + " of " + std::to_string(n_prop) +
                    " proposals (rate " + std::to_string(rate) + ")");
  }
  return PredictionEnsemble{FunctionSet(grid, std::move(accepted)), n_prop, n_acc};
}

PredictionBand to_band(const PredictionEnsemble& e) {
  if (e.members.empty()) throw Error(ErrorCode::EmptyEnsemble, "ensemble has no members");
  const auto& m = e.members.values();
  Vector lo = m.colwise().minCoeff().transpose();
  Vector hi = m.colwise().maxCoeff().transpose();
  return PredictionBand{FunctionSample(e.members.grid_ptr(), std::move(lo)),
                        FunctionSample(e.members.grid_ptr(), std::move(hi))};
}

}  // namespace lsci
