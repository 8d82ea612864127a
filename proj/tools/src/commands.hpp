#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "lsci/config.hpp"

namespace lsci::cli {

/// Dataset directory layout written by `gen`.
struct DatasetPaths {
  std::filesystem::path root;
  std::filesystem::path split(const std::string& name, char side) const {
    return root / (name + "_" + side + ".csv");
  }
  std::filesystem::path grid() const { return root / "grid.json"; }
  std::filesystem::path sigma() const { return root / "true_sigma.csv"; }
  std::filesystem::path meta() const { return root / "meta.json"; }
};

struct PredictArgs {
  std::filesystem::path data;
  std::filesystem::path out;
  std::size_t index = 0;
  std::optional<std::filesystem::path> cal_predictions;
  std::optional<std::filesystem::path> test_predictions;
  std::optional<std::filesystem::path> predictor;  // calibrate output to reuse
};

void cmd_gen(const RunConfig& config, const std::filesystem::path& out);
void cmd_calibrate(const RunConfig& config, const PredictArgs& args);
void cmd_predict(const RunConfig& config, const PredictArgs& args);
/// Returns true when every replicate of every method succeeded.
bool cmd_benchmark(const RunConfig& config, const std::filesystem::path& out);
void cmd_report(const std::filesystem::path& results, const std::optional<std::filesystem::path>& out);

}  // namespace lsci::cli
