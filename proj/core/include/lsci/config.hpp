#pragma once

// Run configuration shared by the benchmark harness and the command line.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsci/conformal.hpp"
#include "lsci/datagen.hpp"
#include "lsci/sampler.hpp"

namespace lsci {

enum class MethodKind { Lsci, Conf1, Conf2, Supr };

std::string_view to_string(MethodKind kind) noexcept;
MethodKind parse_method_kind(std::string_view name);

struct MethodSpec {
  std::string label;
  MethodKind kind = MethodKind::Lsci;
  LsciConfig lsci;  // used by MethodKind::Lsci only
};

enum class BaseModelKind { Auto, Ridge, Persistence };

std::string_view to_string(BaseModelKind kind) noexcept;
BaseModelKind parse_base_model_kind(std::string_view name);

struct RunConfig {
  TaskKind task = TaskKind::Reg1D;
  std::vector<MethodSpec> methods;
  /// Template for LSCI methods that do not override a field.
  LsciConfig lsci;
  double alpha = 0.1;
  double delta = 0.01;
  GenSizes sizes;
  std::size_t grid_points = 64;
  std::size_t n_lat = 32;
  std::size_t n_lon = 64;
  SamplerConfig sampler;
  /// Candidate bandwidths; when non-empty and cross_validate is set, each
  /// replicate picks lambda by cross-validation on its calibration split.
  std::vector<double> lambda_grid;
  bool cross_validate = false;
  /// false: coverage only (no sampling, no band metrics).
  bool bands = true;
  std::uint64_t seed = 0;
  std::size_t replicates = 20;
  /// 0 means all available hardware threads.
  std::size_t threads = 0;
  BaseModelKind base_model = BaseModelKind::Auto;
  std::size_t ridge_half_width = 2;
  double ridge_penalty = 1e-6;
  std::string output_dir;

  /// Falls back to a single LSCI method built from `lsci`, pushes alpha
  /// into every LSCI method, and checks ranges.
  void finalize();
  void validate() const;
  std::size_t thread_count() const;
};

/// Keys mirror the field names; `methods` is a list of objects with
/// "method", optional "label", and LSCI overrides.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json to_json(const RunConfig& c);

/// One LSCI method per element of the cartesian product, labelled
/// "<projection>/<depth>/<localizer>/<lambda>".
std::vector<MethodSpec> lsci_grid(const LsciConfig& base, const std::vector<ProjectionKind>& projections,
                                  const std::vector<DepthKind>& depths,
                                  const std::vector<KernelKind>& localizers,
                                  const std::vector<double>& lambdas);

std::string default_label(const MethodSpec& m);

}  // namespace lsci
