#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <sstream>

#include "lsci/benchmark.hpp"
#include "lsci/io.hpp"
#include "lsci/random.hpp"

namespace lsci::cli {

namespace {

namespace fs = std::filesystem;

const char* const kSplits[] = {"train", "cal", "test"};

Split& split_of(SynthDataset& ds, std::size_t i) { return i == 0 ? ds.train : i == 1 ? ds.cal : ds.test; }
const Split& split_of(const SynthDataset& ds, std::size_t i) {
  return i == 0 ? ds.train : i == 1 ? ds.cal : ds.test;
}

SynthDataset load_dataset(const fs::path& dir) {
  const DatasetPaths paths{dir};
  const nlohmann::json meta = io::read_json(paths.meta());
  const GridPtr grid = io::read_grid(paths.grid());
  SynthDataset ds{parse_task_kind(meta.at("task").get<std::string>()), grid,
                  Split{PairedSet{FunctionSet(grid), FunctionSet(grid)}, {}, {}},
                  Split{PairedSet{FunctionSet(grid), FunctionSet(grid)}, {}, {}},
                  Split{PairedSet{FunctionSet(grid), FunctionSet(grid)}, {}, {}}};
  for (std::size_t s = 0; s < 3; ++s) {
    Split& split = split_of(ds, s);
    split.pairs = PairedSet{io::read_function_set(paths.split(kSplits[s], 'f'), grid),
                            io::read_function_set(paths.split(kSplits[s], 'g'), grid)};
    split.pairs.validate();
  }
  const io::Table sigma = io::read_table(paths.sigma());
  for (const auto& row : sigma.rows) {
    if (row.size() != 4) throw Error(ErrorCode::Parse, "malformed row in " + paths.sigma().string());
    for (std::size_t s = 0; s < 3; ++s) {
      if (row[0] != kSplits[s]) continue;
      split_of(ds, s).t.push_back(io::parse_double(row[2]));
      split_of(ds, s).sigma.push_back(io::parse_double(row[3]));
    }
  }
  for (std::size_t s = 0; s < 3; ++s)
    if (split_of(ds, s).sigma.size() != split_of(ds, s).pairs.size())
      throw Error(ErrorCode::ShapeMismatch, "true_sigma rows do not match split " + std::string(kSplits[s]));
  return ds;
}

PreparedTask load_task(const RunConfig& config, const PredictArgs& args) {
  const SynthDataset ds = load_dataset(args.data);
  if (args.cal_predictions.has_value() != args.test_predictions.has_value())
    throw Error(ErrorCode::InvalidArgument, "external predictions need both calibration and test files");
  if (args.cal_predictions) {
    const ExternalPredictions cal(io::read_function_set(*args.cal_predictions, ds.grid));
    const ExternalPredictions test(io::read_function_set(*args.test_predictions, ds.grid));
    return PreparedTask{ds.grid,          ds.cal.pairs.f,          residuals(cal, ds.cal.pairs),
                        ds.test.pairs.f,  ds.test.pairs.g,         test.predict_set(ds.test.pairs.f),
                        ds.test.sigma};
  }
  const auto model = fit_base_model(ds, config.base_model, config.ridge_half_width, config.ridge_penalty);
  return prepare_task(ds, *model);
}

LsciConfig resolve_lsci(const RunConfig& config, const PreparedTask& task) {
  LsciConfig lsci = config.lsci;
  lsci.alpha = config.alpha;
  if (config.cross_validate) {
    CvOptions cv;
    cv.threads = config.thread_count();
    lsci.localizer.bandwidth =
        select_bandwidth(task.f_cal, task.residuals_cal, lsci, config.lambda_grid, cv).lambda;
  }
  return lsci;
}

void check_index(const PreparedTask& task, std::size_t index) {
  if (index >= task.f_test.size())
    throw Error(ErrorCode::InvalidArgument, "test index " + std::to_string(index) + " out of range (" +
                                                std::to_string(task.f_test.size()) + " test samples)");
}

nlohmann::json nan_to_null(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

double gap_or_nan(const LocalWeights& w) {
  return w.localizer.kernel == KernelKind::KNN ? std::nan("") : coverage_gap_bound(w);
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void cmd_gen(const RunConfig& config, const fs::path& out) {
  const SynthDataset ds = generate(config, config.seed);
  const DatasetPaths paths{out};
  io::write_grid(paths.grid(), *ds.grid);
  io::Table sigma{{"split", "row", "t", "sigma"}, {}};
  for (std::size_t s = 0; s < 3; ++s) {
    const Split& split = split_of(ds, s);
    io::write_function_set(paths.split(kSplits[s], 'f'), split.pairs.f);
    io::write_function_set(paths.split(kSplits[s], 'g'), split.pairs.g);
    for (std::size_t i = 0; i < split.sigma.size(); ++i)
      sigma.rows.push_back({kSplits[s], std::to_string(i), io::format_double(split.t[i]),
                            io::format_double(split.sigma[i])});
  }
  io::write_table(paths.sigma(), sigma);
  nlohmann::json meta;
  meta["task"] = to_string(ds.task);
  meta["seed"] = config.seed;
  meta["n_train"] = ds.train.pairs.size();
  meta["n_cal"] = ds.cal.pairs.size();
  meta["n_test"] = ds.test.pairs.size();
  meta["grid_points"] = ds.grid->size();
  io::write_json(paths.meta(), meta);
}

void cmd_calibrate(const RunConfig& config, const PredictArgs& args) {
  const PreparedTask task = load_task(config, args);
  check_index(task, args.index);
  const LsciConfig lsci = resolve_lsci(config, task);
  const LsciCalibrator calibrator(task.residuals_cal, task.f_cal, lsci);
  const CalibratedPredictor cp =
      calibrator.calibrate(task.f_test.sample(args.index), task.pred_test.sample(args.index), args.index);
  nlohmann::json j;
  j["index"] = args.index;
  j["q"] = cp.q;
  j["lambda"] = lsci.localizer.bandwidth;
  j["alpha"] = lsci.alpha;
  j["config"] = to_json(lsci);
  j["coverage_gap_bound"] = nan_to_null(gap_or_nan(cp.weights));
  j["predictor"] = to_json(cp);
  io::write_json(args.out, j);
}

void cmd_predict(const RunConfig& config, const PredictArgs& args) {
  const PreparedTask task = load_task(config, args);
  check_index(task, args.index);
  LsciConfig lsci;
  std::optional<CalibratedPredictor> cp;
  if (args.predictor) {
    const nlohmann::json j = io::read_json(*args.predictor);
    lsci = lsci_config_from_json(j.at("config"));
    cp = calibrated_predictor_from_json(j.at("predictor"));
  } else {
    lsci = resolve_lsci(config, task);
    const LsciCalibrator calibrator(task.residuals_cal, task.f_cal, lsci);
    cp = calibrator.calibrate(task.f_test.sample(args.index), task.pred_test.sample(args.index), args.index);
  }
  const PredictionEnsemble ens =
      sample_ensemble(*cp, task.residuals_cal, config.sampler, derive_seed(lsci.seed, {4, args.index}));
  const PredictionBand band = to_band(ens);
  const FunctionSample target = task.g_test.sample(args.index);

  const fs::path& out = args.out;
  io::write_function_set(out / "prediction.csv", FunctionSet::from_samples(task.grid, {cp->prediction}));
  io::write_function_set(out / "band.csv", FunctionSet::from_samples(task.grid, {band.lower, band.upper}));
  io::write_function_set(out / "ensemble.csv", ens.members);

  const double frac = inside_fraction(band, target);
  nlohmann::json side;
  side["index"] = args.index;
  side["q"] = cp->q;
  side["lambda"] = lsci.localizer.bandwidth;
  side["alpha"] = cp->alpha;
  side["delta"] = config.delta;
  side["n_proposed"] = ens.n_proposed;
  side["n_accepted"] = ens.n_accepted;
  side["acceptance_rate"] = ens.acceptance_rate();
  side["coverage_gap_bound"] = nan_to_null(gap_or_nan(cp->weights));
  side["inside_fraction"] = frac;
  side["covered"] = frac >= 1.0 - config.delta;
  side["in_set"] = cp->contains(target);
  side["width"] = width(band);
  side["true_sigma"] = task.sigma_test[args.index];
  io::write_json(out / "sidecar.json", side);
}

bool cmd_benchmark(const RunConfig& input, const fs::path& out) {
  RunConfig config = input;
  config.finalize();
  io::write_json(out / "config.json", to_json(config));
  BenchmarkResult partial;
  std::mutex mutex;
  auto progress = [&](const ReplicateResult& r) {
    if (r.ok) {
      std::cerr << "[" << r.method << "] replicate " << r.replicate
                << " coverage=" << fixed(r.report.mean_marginal_coverage, 4);
      if (config.bands)
        std::cerr << " risk=" << fixed(r.report.risk, 4) << " width=" << fixed(r.report.median_width, 4)
                  << " dCW=" << fixed(r.report.dCW, 3);
      std::cerr << "\n";
    } else {
      std::cerr << "[" << r.method << "] replicate " << r.replicate << " FAILED: " << r.error << "\n";
    }
    partial.replicates.push_back(r);
    io::write_table(out / "results.partial.csv", results_table(partial, config.task));
  };
  const BenchmarkResult result = run_benchmark(config, progress);
  write_benchmark(out, result, config);
  fs::remove(out / "results.partial.csv");
  return result.all_ok();
}

void cmd_report(const fs::path& results, const std::optional<fs::path>& out) {
  const fs::path summary_path = fs::is_directory(results) ? results / "summary.json" : results;
  const nlohmann::json s = io::read_json(summary_path);
  const bool bands = s.value("bands", true);
  io::Table table;
  table.columns = {"method", "n_ok", "n_failed", "coverage", "coverage_err"};
  if (bands) {
    for (const char* k : {"risk", "dCR", "width", "dCW"}) {
      table.columns.push_back(k);
      table.columns.push_back(std::string(k) + "_err");
    }
  }
  auto value = [](const nlohmann::json& m, const char* key, const char* field) {
    if (!m.contains(key) || m[key][field].is_null()) return std::nan("");
    return m[key][field].get<double>();
  };
  auto cell = [&](const nlohmann::json& m, const char* key, const char* field) {
    const double v = value(m, key, field);
    return std::isnan(v) ? std::string("nan") : io::format_double(v);
  };
  std::ostringstream text;
  text << "task " << s.value("task", std::string("?")) << ", alpha " << s.value("alpha", 0.0) << ", "
       << s.value("replicates", 0) << " replicates\n";
  for (const auto& m : s.at("methods")) {
    std::vector<std::string> row{m.at("method").get<std::string>(), std::to_string(m.at("n_ok").get<int>()),
                                 std::to_string(m.at("n_failed").get<int>()), cell(m, "coverage", "mean"),
                                 cell(m, "coverage", "err2sd")};
    text << "  " << row[0] << ": coverage " << fixed(value(m, "coverage", "mean"), 3);
    if (bands) {
      for (const char* k : {"risk", "dCR", "width", "dCW"}) {
        row.push_back(cell(m, k, "mean"));
        row.push_back(cell(m, k, "err2sd"));
        text << "  " << k << " " << fixed(value(m, k, "mean"), 3);
      }
    }
    text << "\n";
    table.rows.push_back(std::move(row));
  }
  std::cout << text.str();
  if (out) io::write_table(*out, table);
}

}  // namespace lsci::cli
