#include "lsci/benchmark.hpp"

#include <cmath>
#include <limits>
#include <algorithm>
#include <mutex>
#include <optional>

#include "lsci/parallel.hpp"
#include "lsci/random.hpp"

namespace lsci {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum SeedStream : std::uint64_t { kMethodSeed = 1, kSamplerSeed = 4, kCvSeed = 5 };

double gap_bound_or_nan(const LocalWeights& w) {
  return w.localizer.kernel == KernelKind::KNN ? kNaN : coverage_gap_bound(w);
}

MetricSummary mean_err(const std::vector<double>& v) {
  MetricSummary s;
  if (v.empty()) return MetricSummary{kNaN, kNaN};
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() >= 2) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.err = 2.0 * std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

std::string fmt(double v) { return std::isnan(v) ? std::string("nan") : io::format_double(v); }

nlohmann::json metric_json(const MetricSummary& m) {
  nlohmann::json j;
  j["mean"] = std::isnan(m.mean) ? nlohmann::json(nullptr) : nlohmann::json(m.mean);
  j["err2sd"] = std::isnan(m.err) ? nlohmann::json(nullptr) : nlohmann::json(m.err);
  return j;
}

}  // namespace

std::unique_ptr<OperatorModel> fit_base_model(const SynthDataset& ds, BaseModelKind kind,
                                              std::size_t half_width, double ridge) {
  if (kind == BaseModelKind::Auto)
    kind = ds.task == TaskKind::Reg1D ? BaseModelKind::Ridge : BaseModelKind::Persistence;
  if (kind == BaseModelKind::Persistence) return std::make_unique<Persistence>();
  return std::make_unique<FunctionalRidge>(FunctionalRidge::fit(ds.train.pairs, half_width, ridge));
}

PreparedTask prepare_task(const SynthDataset& ds, const OperatorModel& model) {
  FunctionSet pred_test = model.predict_set(ds.test.pairs.f);
  return PreparedTask{ds.grid,
                      ds.cal.pairs.f,
                      residuals(model, ds.cal.pairs),
                      ds.test.pairs.f,
                      ds.test.pairs.g,
                      std::move(pred_test),
                      ds.test.sigma};
}

SynthDataset generate(const RunConfig& config, std::uint64_t seed) {
  switch (config.task) {
    case TaskKind::Reg1D: return gen_reg1d(config.sizes, seed, config.grid_points);
    case TaskKind::AR1D: return gen_ar1d(config.sizes, seed, config.grid_points);
    case TaskKind::ARSphere2D: return gen_ar_sphere2d(config.sizes, seed, config.n_lat, config.n_lon);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown task");
}

EvalReport evaluate_lsci(const PreparedTask& task, const LsciEvalOptions& options) {
  const LsciCalibrator calibrator(task.residuals_cal, task.f_cal, options.lsci);
  const std::size_t n = task.f_test.size();
  std::vector<SampleMetrics> per(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    const FunctionSample target = task.g_test.sample(i);
    const CalibratedPredictor cp = calibrator.calibrate(task.f_test.sample(i), task.pred_test.sample(i), i);
    SampleMetrics& m = per[i];
    m.covered = cp.contains(target);
    m.true_sigma = task.sigma_test[i];
    m.gap_bound = gap_bound_or_nan(cp.weights);
    m.acceptance_rate = kNaN;
    if (options.bands) {
      const PredictionEnsemble ens = sample_ensemble(cp, task.residuals_cal, options.sampler,
                                                     derive_seed(options.lsci.seed, {kSamplerSeed, i}));
      const PredictionBand band = to_band(ens);
      m.inside_fraction = inside_fraction(band, target);
      m.width = width(band);
      m.acceptance_rate = ens.acceptance_rate();
    }
  });
  return summarize(std::move(per), options.delta, options.bands);
}

EvalReport evaluate_baseline(const PreparedTask& task, MethodKind kind, double alpha, double delta,
                             bool bands) {
  BaselineRule rule = [&] {
    switch (kind) {
      case MethodKind::Conf1: return baseline_conf_l2(task.residuals_cal, alpha);
      case MethodKind::Conf2: return baseline_conf_modulated(task.residuals_cal, alpha);
      case MethodKind::Supr: return baseline_supr(task.residuals_cal, alpha);
      case MethodKind::Lsci: break;
    }
    throw Error(ErrorCode::InvalidArgument, "not a baseline method");
  }();
  std::vector<SampleMetrics> per(task.f_test.size());
  for (std::size_t i = 0; i < per.size(); ++i) {
    const FunctionSample target = task.g_test.sample(i);
    const FunctionSample pred = task.pred_test.sample(i);
    SampleMetrics& m = per[i];
    m.covered = rule.contains_residual(subtract(target, pred));
    m.true_sigma = task.sigma_test[i];
    m.gap_bound = kNaN;
    m.acceptance_rate = kNaN;
    if (bands) {
      const PredictionBand band = rule.band(pred);
      m.inside_fraction = inside_fraction(band, target);
      m.width = width(band);
    }
  }
  return summarize(std::move(per), delta, bands);
}

BandwidthSelection select_bandwidth(const FunctionSet& f_cal, const FunctionSet& residuals_cal,
                                    const LsciConfig& base, const std::vector<double>& lambda_grid,
                                    const CvOptions& options) {
  if (lambda_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty lambda grid");
  if (f_cal.size() != residuals_cal.size())
    throw Error(ErrorCode::ShapeMismatch, "inputs and residuals differ in row count");
  if (lambda_grid.size() == 1) return BandwidthSelection{lambda_grid.front(), {kNaN}, {kNaN}};
  const std::size_t n = f_cal.size();
  const std::size_t folds = options.folds;
  if (folds < 2 || n < 2 * folds)
    throw Error(ErrorCode::InvalidArgument, "too few calibration pairs for the requested folds");

  std::vector<std::vector<std::size_t>> train(folds), held(folds);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < folds; ++k) (i % folds == k ? held[k] : train[k]).push_back(i);

  const std::size_t n_lambda = lambda_grid.size();
  std::vector<std::size_t> covered(n_lambda * folds, 0);
  std::vector<double> width_sum(n_lambda * folds, 0.0);
  std::vector<std::size_t> width_count(n_lambda * folds, 0);

  parallel_for(n_lambda * folds, options.threads, [&](std::size_t job) {
    const std::size_t li = job / folds, k = job % folds;
    LsciConfig cfg = base;
    cfg.localizer.bandwidth = lambda_grid[li];
    const FunctionSet res_train = residuals_cal.subset(train[k]);
    const LsciCalibrator calibrator(res_train, f_cal.subset(train[k]), cfg);
    const FunctionSample zero = FunctionSample::zeros(residuals_cal.grid_ptr());
    for (std::size_t j = 0; j < held[k].size(); ++j) {
      const std::size_t row = held[k][j];
      const CalibratedPredictor cp = calibrator.calibrate(f_cal.sample(row), zero, row);
      const FunctionSample r = residuals_cal.sample(row);
      if (cp.contains(r)) ++covered[job];
      if (j < options.width_points) {
        const auto ens = sample_ensemble(cp, res_train, options.sampler, derive_seed(base.seed, {kCvSeed, row}));
        width_sum[job] += width(to_band(ens));
        ++width_count[job];
      }
    }
  });

  BandwidthSelection sel;
  for (std::size_t li = 0; li < n_lambda; ++li) {
    std::size_t c = 0, wc = 0;
    double ws = 0.0;
    for (std::size_t k = 0; k < folds; ++k) {
      c += covered[li * folds + k];
      ws += width_sum[li * folds + k];
      wc += width_count[li * folds + k];
    }
    sel.coverage.push_back(static_cast<double>(c) / static_cast<double>(n));
    sel.width.push_back(wc ? ws / static_cast<double>(wc) : kNaN);
  }

  // Candidates in ascending lambda order so strict comparisons break ties low.
  std::vector<std::size_t> order(n_lambda);
  for (std::size_t i = 0; i < n_lambda; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lambda_grid[a] < lambda_grid[b]; });
  const double target = 1.0 - base.alpha - 0.01;
  std::optional<std::size_t> best;
  for (std::size_t i : order)
    if (sel.coverage[i] >= target && (!best || sel.width[i] < sel.width[*best])) best = i;
  if (!best) {
    for (std::size_t i : order)
      if (!best || sel.coverage[i] > sel.coverage[*best]) best = i;
  }
  sel.lambda = lambda_grid[*best];
  return sel;
}

bool BenchmarkResult::all_ok() const {
  for (const auto& r : replicates)
    if (!r.ok) return false;
  return true;
}

MethodSummary summarize_method(const std::string& method, const std::vector<ReplicateResult>& rows) {
  MethodSummary s;
  s.method = method;
  std::vector<double> cov, risk, wid, dcr, dcw, gap;
  for (const auto& r : rows) {
    if (r.method != method) continue;
    if (!r.ok) {
      ++s.n_failed;
      continue;
    }
    ++s.n_ok;
    cov.push_back(r.report.mean_marginal_coverage);
    risk.push_back(r.report.risk);
    wid.push_back(r.report.median_width);
    dcr.push_back(r.report.dCR);
    dcw.push_back(r.report.dCW);
    gap.push_back(r.report.coverage_gap_bound_mean);
  }
  s.coverage = mean_err(cov);
  s.risk = mean_err(risk);
  s.width = mean_err(wid);
  s.dCR = mean_err(dcr);
  s.dCW = mean_err(dcw);
  s.gap_bound = mean_err(gap);
  return s;
}

BenchmarkResult run_benchmark(const RunConfig& input, const ProgressFn& progress) {
  RunConfig config = input;
  config.finalize();
  const std::size_t n_rep = config.replicates;
  const std::size_t n_methods = config.methods.size();
  const std::size_t threads = config.thread_count();
  // Parallelize over replicates when there are enough of them, otherwise
  // over test points inside each replicate. Results do not depend on this.
  const std::size_t outer = n_rep >= threads ? threads : 1;
  const std::size_t inner = outer == 1 ? threads : 1;

  BenchmarkResult result;
  result.replicates.resize(n_rep * n_methods);
  std::mutex mutex;

  parallel_for(n_rep, outer, [&](std::size_t r) {
    const std::uint64_t seed_r = derive_seed(config.seed, {r});
    std::optional<PreparedTask> task;
    std::string setup_error;
    try {
      const SynthDataset ds = generate(config, seed_r);
      const auto model = fit_base_model(ds, config.base_model, config.ridge_half_width, config.ridge_penalty);
      task = prepare_task(ds, *model);
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    for (std::size_t m = 0; m < n_methods; ++m) {
      const MethodSpec& spec = config.methods[m];
      ReplicateResult res;
      res.method = spec.label;
      res.replicate = r;
      res.seed = seed_r;
      res.lambda = spec.kind == MethodKind::Lsci ? spec.lsci.localizer.bandwidth : kNaN;
      if (!task) {
        res.error = setup_error;
      } else {
        try {
          if (spec.kind == MethodKind::Lsci) {
            LsciEvalOptions opt{spec.lsci, config.sampler, config.bands, config.delta, inner};
            opt.lsci.seed = derive_seed(seed_r, {kMethodSeed, spec.lsci.seed});
            if (config.cross_validate) {
              CvOptions cv;
              cv.threads = inner;
              opt.lsci.localizer.bandwidth =
                  select_bandwidth(task->f_cal, task->residuals_cal, opt.lsci, config.lambda_grid, cv).lambda;
              res.lambda = opt.lsci.localizer.bandwidth;
            }
            res.report = evaluate_lsci(*task, opt);
          } else {
            res.report = evaluate_baseline(*task, spec.kind, config.alpha, config.delta, config.bands);
          }
          res.ok = true;
        } catch (const std::exception& e) {
          res.error = e.what();
        }
      }
      res.report.per_sample.clear();
      const std::lock_guard lock(mutex);
      result.replicates[m * n_rep + r] = res;
      if (progress) progress(res);
    }
  });

  for (const auto& spec : config.methods) result.summary.push_back(summarize_method(spec.label, result.replicates));
  return result;
}

io::Table results_table(const BenchmarkResult& result, TaskKind task) {
  io::Table t;
  t.columns = {"task", "method", "replicate", "seed", "status", "lambda", "coverage", "risk",
               "width", "dCR", "dCW", "gap_bound", "acceptance_rate", "error"};
  for (const auto& r : result.replicates) {
    const EvalReport& e = r.report;
    t.rows.push_back({std::string(to_string(task)), r.method, std::to_string(r.replicate),
                      std::to_string(r.seed), r.ok ? "ok" : "failed", fmt(r.lambda),
                      r.ok ? fmt(e.mean_marginal_coverage) : "nan", r.ok ? fmt(e.risk) : "nan",
                      r.ok ? fmt(e.median_width) : "nan", r.ok ? fmt(e.dCR) : "nan",
                      r.ok ? fmt(e.dCW) : "nan", r.ok ? fmt(e.coverage_gap_bound_mean) : "nan",
                      r.ok ? fmt(e.mean_acceptance_rate) : "nan", r.error});
  }
  return t;
}

nlohmann::json summary_json(const BenchmarkResult& result, const RunConfig& config) {
  nlohmann::json j;
  j["task"] = to_string(config.task);
  j["alpha"] = config.alpha;
  j["delta"] = config.delta;
  j["replicates"] = config.replicates;
  j["bands"] = config.bands;
  j["seed"] = config.seed;
  auto methods = nlohmann::json::array();
  for (const auto& s : result.summary) {
    nlohmann::json m;
    m["method"] = s.method;
    m["n_ok"] = s.n_ok;
    m["n_failed"] = s.n_failed;
    m["coverage"] = metric_json(s.coverage);
    if (config.bands) {
      m["risk"] = metric_json(s.risk);
      m["width"] = metric_json(s.width);
      m["dCR"] = metric_json(s.dCR);
      m["dCW"] = metric_json(s.dCW);
    }
    m["coverage_gap_bound"] = metric_json(s.gap_bound);
    methods.push_back(std::move(m));
  }
  j["methods"] = std::move(methods);
  return j;
}

void write_benchmark(const std::filesystem::path& dir, const BenchmarkResult& result,
                     const RunConfig& config) {
  io::write_table(dir / "results.csv", results_table(result, config.task));
  io::write_json(dir / "summary.json", summary_json(result, config));
}

}  // namespace lsci
