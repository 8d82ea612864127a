#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "lsci/benchmark.hpp"
#include "lsci/random.hpp"

using namespace lsci;

namespace {

const PreparedTask& task_for(TaskKind kind) {
  static std::map<TaskKind, PreparedTask> cache;
  auto it = cache.find(kind);
  if (it == cache.end()) {
    RunConfig c;
    c.task = kind;
    c.sizes = GenSizes{200, 1000, 16};
    const auto ds = generate(c, 7);
    const auto model = fit_base_model(ds, BaseModelKind::Auto, 2, 1e-6);
    it = cache.emplace(kind, prepare_task(ds, *model)).first;
  }
  return it->second;
}

void BM_TukeyDepth(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::normal_distribution<double> n01;
  std::vector<double> loc(n), w(n, 1.0 / static_cast<double>(n + 1));
  for (auto& v : loc) v = n01(rng);
  const LocalMeasure m(loc, w, 1.0 / static_cast<double>(n + 1));
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.depth(x, DepthKind::Tukey));
    x = x > 3.0 ? -3.0 : x + 0.01;
  }
}
BENCHMARK(BM_TukeyDepth)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Calibrate(benchmark::State& state) {
  const auto& task = task_for(TaskKind::Reg1D);
  LsciConfig l;
  l.projection = static_cast<ProjectionKind>(state.range(0));
  const LsciCalibrator cal(task.residuals_cal, task.f_cal, l);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cal.calibrate(task.f_test.sample(i), task.pred_test.sample(i), i).q);
    i = (i + 1) % task.f_test.size();
  }
  state.SetLabel(std::string(to_string(l.projection)));
}
BENCHMARK(BM_Calibrate)
    ->Arg(static_cast<int>(ProjectionKind::Rand))
    ->Arg(static_cast<int>(ProjectionKind::FPCA))
    ->Arg(static_cast<int>(ProjectionKind::RFPCA))
    ->Unit(benchmark::kMillisecond);

void BM_SampleEnsemble(benchmark::State& state) {
  const auto& task = task_for(TaskKind::Reg1D);
  const LsciCalibrator cal(task.residuals_cal, task.f_cal, LsciConfig{});
  const auto cp = cal.calibrate(task.f_test.sample(0), task.pred_test.sample(0), 0);
  const SamplerConfig sc{20, static_cast<std::size_t>(state.range(0)), 0, ProposalFamily::LocalFpca};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_ensemble(cp, task.residuals_cal, sc, ++seed).n_accepted);
}
BENCHMARK(BM_SampleEnsemble)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SphereFpca(benchmark::State& state) {
  const auto& task = task_for(TaskKind::ARSphere2D);
  const std::vector<double> w(task.residuals_cal.size(), 1.0 / static_cast<double>(task.residuals_cal.size()));
  for (auto _ : state) benchmark::DoNotOptimize(build_fpca(task.residuals_cal, w, 20).n_phi());
}
BENCHMARK(BM_SphereFpca)->Unit(benchmark::kMillisecond);

void BM_DistanceCorrelation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  std::normal_distribution<double> n01;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = n01(rng);
    y[i] = x[i] * x[i] + n01(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(distance_correlation(x, y));
}
BENCHMARK(BM_DistanceCorrelation)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
