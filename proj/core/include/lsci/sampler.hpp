#pragma once

// Inverse-transform residual sampling with depth-region rejection, and the
// pointwise band summary of the accepted ensemble.

#include <cstdint>
#include <span>
#include <string_view>

#include "lsci/conformal.hpp"

namespace lsci {

enum class ProposalFamily { LocalFpca, Scoring };

std::string_view to_string(ProposalFamily p) noexcept;
ProposalFamily parse_proposal_family(std::string_view name);

struct SamplerConfig {
  std::size_t M = 20;
  std::size_t n_s = 500;
  /// 0 means 100 * n_s.
  std::size_t max_proposals = 0;
  ProposalFamily proposal = ProposalFamily::LocalFpca;

  std::size_t proposal_budget() const noexcept { return max_proposals ? max_proposals : 100 * n_s; }
};

struct PredictionEnsemble {
  FunctionSet members;
  std::size_t n_proposed = 0;
  std::size_t n_accepted = 0;

  double acceptance_rate() const noexcept {
    return n_proposed ? static_cast<double>(n_accepted) / static_cast<double>(n_proposed) : 0.0;
  }
};

struct PredictionBand {
  FunctionSample lower;
  FunctionSample upper;
};

/// r = c0 + sum_k (Q_k(u_k) - phi_k(c0)) d_k, where Q_k is the finite-atom
/// quantile function of measures[k] and c0 the family's center (zero when
/// the family has none).
FunctionSample inverse_transform_sample(std::span<const LocalMeasure> measures,
                                        std::span<const double> u, const ProjectionFamily& family);

PredictionEnsemble sample_ensemble(const CalibratedPredictor& pred, const FunctionSet& residuals_cal,
                                   const SamplerConfig& config, std::uint64_t seed);

PredictionBand to_band(const PredictionEnsemble& e);

}  // namespace lsci
