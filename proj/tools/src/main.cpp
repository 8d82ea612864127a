#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "lsci/io.hpp"

namespace {

using namespace lsci;

constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw flag values; only flags the user actually passed override the config.
struct Flags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string task;
  std::size_t n_train = 0, n_cal = 0, n_test = 0, grid_points = 0;
  double alpha = 0.1, delta = 0.01;
  std::string projection, depth, localizer, threshold_rank, base_model, proposal;
  std::size_t n_phi = 0, M = 0, n_s = 0, max_proposals = 0, replicates = 0;
  double lambda = 1.0, knockoff_factor = 0.05;
  std::vector<double> lambda_grid;
  std::vector<std::string> methods, projections, depths, localizers;
  bool coverage_only = false;
  bool cross_validate = false;
};

template <typename T>
std::vector<T> parse_list(const std::vector<std::string>& names, T (*parse)(std::string_view)) {
  std::vector<T> out;
  for (const auto& n : names) out.push_back(parse(n));
  return out;
}

bool given(const CLI::App& app, const std::string& name) {
  const CLI::Option* opt = app.get_option_no_throw(name);
  return opt && opt->count() > 0;
}

RunConfig build_config(const CLI::App& root, const CLI::App& sub, const Flags& f) {
  RunConfig c;
  if (!f.config_path.empty()) c = run_config_from_json(io::read_json(f.config_path));

  if (given(root, "--seed")) {
    c.seed = f.seed;
  } else if (const char* env = std::getenv("LSCI_SEED"); env && f.config_path.empty()) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("LSCI_SEED must be an unsigned integer");
    }
  }
  c.lsci.seed = c.seed;
  if (given(root, "--threads")) c.threads = f.threads;

  auto has = [&](const char* name) { return given(sub, name); };
  if (has("--task")) c.task = parse_task_kind(f.task);
  if (has("--n-train")) c.sizes.n_train = f.n_train;
  if (has("--n-cal")) c.sizes.n_cal = f.n_cal;
  if (has("--n-test")) c.sizes.n_test = f.n_test;
  if (has("--grid-points")) c.grid_points = f.grid_points;
  if (has("--alpha")) c.alpha = f.alpha;
  if (has("--delta")) c.delta = f.delta;
  if (has("--projection")) c.lsci.projection = parse_projection_kind(f.projection);
  if (has("--n-phi")) c.lsci.n_phi = f.n_phi;
  if (has("--depth")) c.lsci.depth = parse_depth_kind(f.depth);
  if (has("--localizer")) c.lsci.localizer.kernel = parse_kernel_kind(f.localizer);
  if (has("--lambda")) c.lsci.localizer.bandwidth = f.lambda;
  if (has("--knockoff-factor")) c.lsci.knockoff_factor = f.knockoff_factor;
  if (has("--threshold-rank")) c.lsci.threshold_rank = parse_threshold_rank(f.threshold_rank);
  if (has("--M")) c.sampler.M = f.M;
  if (has("--n-s")) c.sampler.n_s = f.n_s;
  if (has("--max-proposals")) c.sampler.max_proposals = f.max_proposals;
  if (has("--proposal")) c.sampler.proposal = parse_proposal_family(f.proposal);
  if (has("--base-model")) c.base_model = parse_base_model_kind(f.base_model);
  if (has("--replicates")) c.replicates = f.replicates;
  if (has("--lambda-grid")) c.lambda_grid = f.lambda_grid;
  if (has("--cv")) c.cross_validate = f.cross_validate;
  if (has("--coverage-only")) c.bands = !f.coverage_only;
  c.lsci.alpha = c.alpha;
  c.lsci.validate();

  const bool sweep = has("--projections") || has("--depths") || has("--localizers") ||
                     (has("--lambda-grid") && !c.cross_validate);
  if (has("--methods") || sweep) {
    std::vector<MethodSpec> methods;
    const std::vector<std::string> names = has("--methods") ? f.methods : std::vector<std::string>{"lsci"};
    for (const auto& name : names) {
      const MethodKind kind = parse_method_kind(name);
      if (kind != MethodKind::Lsci) {
        methods.push_back(MethodSpec{"", kind, c.lsci});
        continue;
      }
      auto projections = has("--projections") ? parse_list(f.projections, parse_projection_kind)
                                              : std::vector<ProjectionKind>{c.lsci.projection};
      auto depths = has("--depths") ? parse_list(f.depths, parse_depth_kind) : std::vector<DepthKind>{c.lsci.depth};
      auto localizers = has("--localizers") ? parse_list(f.localizers, parse_kernel_kind)
                                            : std::vector<KernelKind>{c.lsci.localizer.kernel};
      auto lambdas = (has("--lambda-grid") && !c.cross_validate) ? c.lambda_grid
                                                                 : std::vector<double>{c.lsci.localizer.bandwidth};
      for (auto& m : lsci_grid(c.lsci, projections, depths, localizers, lambdas)) methods.push_back(std::move(m));
    }
    c.methods = std::move(methods);
  }
  c.finalize();
  return c;
}

void add_data_flags(CLI::App* app, Flags& f) {
  app->add_option("--task", f.task, "reg1d | ar1d | sphere2d");
  app->add_option("--n-train", f.n_train, "Training pairs");
  app->add_option("--n-cal", f.n_cal, "Calibration pairs");
  app->add_option("--n-test", f.n_test, "Test pairs");
  app->add_option("--grid-points", f.grid_points, "Points on the 1D grid");
}

void add_method_flags(CLI::App* app, Flags& f) {
  app->add_option("--alpha", f.alpha, "Miscoverage level");
  app->add_option("--delta", f.delta, "Risk slack");
  app->add_option("--projection", f.projection, "rand | fpca | wave | rfpca | rwave");
  app->add_option("--n-phi", f.n_phi, "Number of projections");
  app->add_option("--depth", f.depth, "tukey | norminf | mahalanobis");
  app->add_option("--localizer", f.localizer, "l2 | linf | knn");
  app->add_option("--lambda", f.lambda, "Localizer bandwidth");
  app->add_option("--lambda-grid", f.lambda_grid, "Candidate bandwidths")->delimiter(',');
  app->add_flag("--cv", f.cross_validate, "Pick lambda from --lambda-grid by cross-validation");
  app->add_option("--knockoff-factor", f.knockoff_factor, "Knock-off noise relative to input spread");
  app->add_option("--threshold-rank", f.threshold_rank, "coverage | paper_literal");
  app->add_option("--M", f.M, "Sampling components");
  app->add_option("--n-s", f.n_s, "Accepted samples per prediction");
  app->add_option("--max-proposals", f.max_proposals, "Proposal budget (default 100 * n_s)");
  app->add_option("--proposal", f.proposal, "local_fpca | scoring");
  app->add_option("--base-model", f.base_model, "auto | ridge | persistence");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local spectral conformal inference for operator models"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", f.seed, "Global seed (falls back to LSCI_SEED)");
  app.add_option("--threads", f.threads, "Worker threads (default: all cores)");

  std::string out;
  std::string results;
  cli::PredictArgs pargs;
  std::string cal_pred, test_pred, predictor;

  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset directory");
  add_data_flags(gen, f);
  gen->add_option("--out", out, "Dataset directory")->required();

  auto add_predict = [&](const char* name, const char* help, const char* out_help) {
    auto* sub = app.add_subcommand(name, help);
    add_method_flags(sub, f);
    sub->add_option("--data", pargs.data, "Dataset directory from `gen`")->required();
    sub->add_option("--index", pargs.index, "Test row");
    sub->add_option("--cal-predictions", cal_pred, "External predictions for the calibration inputs");
    sub->add_option("--test-predictions", test_pred, "External predictions for the test inputs");
    sub->add_option("--out", out, out_help)->required();
    return sub;
  };
  auto* calibrate = add_predict("calibrate", "Calibrate at one test input", "Output JSON file");
  auto* predict = add_predict("predict", "Calibrate, sample, and write a band", "Output directory");
  predict->add_option("--predictor", predictor, "Reuse a `calibrate` output");

  auto* bench = app.add_subcommand("benchmark", "Replicated coverage and band metrics");
  add_data_flags(bench, f);
  add_method_flags(bench, f);
  bench->add_option("--methods", f.methods, "lsci, conf1, conf2, supr")->delimiter(',');
  bench->add_option("--projections", f.projections, "Projection sweep")->delimiter(',');
  bench->add_option("--depths", f.depths, "Depth sweep")->delimiter(',');
  bench->add_option("--localizers", f.localizers, "Localizer sweep")->delimiter(',');
  bench->add_option("--replicates", f.replicates, "Replicates (default 20)");
  bench->add_flag("--coverage-only", f.coverage_only, "Skip sampling and band metrics");
  bench->add_option("--out", out, "Results directory")->required();

  auto* report = app.add_subcommand("report", "Summarize benchmark results");
  report->add_option("--results", results, "Benchmark directory or summary.json")->required();
  report->add_option("--out", out, "Optional CSV table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*report) {
      cli::cmd_report(results, out.empty() ? std::nullopt : std::optional<std::filesystem::path>(out));
      return 0;
    }
    const CLI::App& sub = *app.get_subcommands().front();
    RunConfig config;
    try {
      config = build_config(app, sub, f);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Parse || e.code() == ErrorCode::InvalidArgument) throw UsageError(e.what());
      throw;
    }
    if (!cal_pred.empty()) pargs.cal_predictions = cal_pred;
    if (!test_pred.empty()) pargs.test_predictions = test_pred;
    if (!predictor.empty()) pargs.predictor = predictor;
    pargs.out = out;
    if (*gen) {
      cli::cmd_gen(config, out);
    } else if (*calibrate) {
      cli::cmd_calibrate(config, pargs);
    } else if (*predict) {
      cli::cmd_predict(config, pargs);
    } else if (*bench) {
      return cli::cmd_benchmark(config, out) ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
