#pragma once

// End-to-end evaluation: base model, calibration, sampling, bands, metrics,
// and the replicate harness.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lsci/basemodel.hpp"
#include "lsci/config.hpp"
#include "lsci/eval.hpp"
#include "lsci/io.hpp"

namespace lsci {

/// Calibration and test splits with base-model predictions and residuals.
struct PreparedTask {
  GridPtr grid;
  FunctionSet f_cal;
  FunctionSet residuals_cal;
  FunctionSet f_test;
  FunctionSet g_test;
  FunctionSet pred_test;
  std::vector<double> sigma_test;
};

std::unique_ptr<OperatorModel> fit_base_model(const SynthDataset& ds, BaseModelKind kind,
                                              std::size_t half_width, double ridge);

PreparedTask prepare_task(const SynthDataset& ds, const OperatorModel& model);

SynthDataset generate(const RunConfig& config, std::uint64_t seed);

struct LsciEvalOptions {
  LsciConfig lsci;
  SamplerConfig sampler;
  bool bands = true;
  double delta = 0.01;
  std::size_t threads = 1;
};

/// Calibrates at every test input; with bands, also samples an ensemble.
EvalReport evaluate_lsci(const PreparedTask& task, const LsciEvalOptions& options);
EvalReport evaluate_baseline(const PreparedTask& task, MethodKind kind, double alpha, double delta,
                             bool bands);

struct BandwidthSelection {
  double lambda = 0.0;
  std::vector<double> coverage;  // per candidate, pooled over folds
  std::vector<double> width;     // per candidate, mean band width
};

struct CvOptions {
  std::size_t folds = 5;
  /// Held-out points per fold used for the width estimate.
  std::size_t width_points = 20;
  SamplerConfig sampler{20, 50, 0, ProposalFamily::LocalFpca};
  std::size_t threads = 1;
};

/// K-fold selection over the calibration split: smallest mean width among
/// candidates whose coverage reaches 1 - alpha - 0.01, else the highest
/// coverage; ties go to the smaller lambda.
BandwidthSelection select_bandwidth(const FunctionSet& f_cal, const FunctionSet& residuals_cal,
                                    const LsciConfig& base, const std::vector<double>& lambda_grid,
                                    const CvOptions& options = {});

struct ReplicateResult {
  std::string method;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double lambda = 0.0;
  EvalReport report;
};

struct MetricSummary {
  double mean = 0.0;
  double err = 0.0;  // 2 standard deviations across replicates
};

struct MethodSummary {
  std::string method;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  MetricSummary coverage, risk, width, dCR, dCW, gap_bound;
};

struct BenchmarkResult {
  std::vector<ReplicateResult> replicates;  // method-major, replicate-minor
  std::vector<MethodSummary> summary;
  bool all_ok() const;
};

/// Called after each replicate finishes; calls are serialized.
using ProgressFn = std::function<void(const ReplicateResult&)>;

BenchmarkResult run_benchmark(const RunConfig& config, const ProgressFn& progress = {});

MethodSummary summarize_method(const std::string& method, const std::vector<ReplicateResult>& rows);

io::Table results_table(const BenchmarkResult& result, TaskKind task);
nlohmann::json summary_json(const BenchmarkResult& result, const RunConfig& config);

/// results.csv and summary.json under `dir`.
void write_benchmark(const std::filesystem::path& dir, const BenchmarkResult& result,
                     const RunConfig& config);

}  // namespace lsci
