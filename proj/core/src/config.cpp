#include "lsci/config.hpp"

#include "lsci/io.hpp"
#include "lsci/parallel.hpp"

namespace lsci {

std::string_view to_string(MethodKind kind) noexcept {
  switch (kind) {
    case MethodKind::Lsci: return "lsci";
    case MethodKind::Conf1: return "conf1";
    case MethodKind::Conf2: return "conf2";
    case MethodKind::Supr: return "supr";
  }
  return "lsci";
}

MethodKind parse_method_kind(std::string_view name) {
  if (name == "lsci") return MethodKind::Lsci;
  if (name == "conf1") return MethodKind::Conf1;
  if (name == "conf2") return MethodKind::Conf2;
  if (name == "supr") return MethodKind::Supr;
  throw Error(ErrorCode::Parse, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(BaseModelKind kind) noexcept {
  switch (kind) {
    case BaseModelKind::Auto: return "auto";
    case BaseModelKind::Ridge: return "ridge";
    case BaseModelKind::Persistence: return "persistence";
  }
  return "auto";
}

BaseModelKind parse_base_model_kind(std::string_view name) {
  if (name == "auto") return BaseModelKind::Auto;
  if (name == "ridge") return BaseModelKind::Ridge;
  if (name == "persistence") return BaseModelKind::Persistence;
  throw Error(ErrorCode::Parse, "unknown base model '" + std::string(name) + "'");
}

std::string default_label(const MethodSpec& m) {
  if (m.kind != MethodKind::Lsci) return std::string(to_string(m.kind));
  return std::string(to_string(m.lsci.projection)) + "/" + std::string(to_string(m.lsci.depth)) + "/" +
         std::string(to_string(m.lsci.localizer.kernel)) + "/" + io::format_double(m.lsci.localizer.bandwidth);
}

void RunConfig::finalize() {
  if (methods.empty()) methods.push_back(MethodSpec{"", MethodKind::Lsci, lsci});
  for (auto& m : methods) {
    m.lsci.alpha = alpha;
    if (m.label.empty()) m.label = default_label(m);
  }
  validate();
}

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidArgument, "delta must lie in [0, 1)");
  if (sampler.M < 1 || sampler.n_s < 1) throw Error(ErrorCode::InvalidArgument, "M and n_s must be at least 1");
  if (replicates < 1) throw Error(ErrorCode::InvalidArgument, "replicates must be at least 1");
  if (sizes.n_cal < 1 || sizes.n_test < 1 || sizes.n_train < 1)
    throw Error(ErrorCode::InvalidArgument, "split sizes must be at least 1");
  for (double l : lambda_grid)
    if (!(l >= 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidths must be >= 0");
  if (cross_validate && lambda_grid.empty())
    throw Error(ErrorCode::InvalidArgument, "cross-validation needs a lambda grid");
  for (const auto& m : methods) m.lsci.validate();
}

std::size_t RunConfig::thread_count() const { return threads ? threads : default_thread_count(); }

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig c) {
  try {
    if (j.contains("task")) c.task = parse_task_kind(j["task"].get<std::string>());
    if (j.contains("lsci")) c.lsci = lsci_config_from_json(j["lsci"], c.lsci);
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("delta")) c.delta = j["delta"].get<double>();
    if (j.contains("n_train")) c.sizes.n_train = j["n_train"].get<std::size_t>();
    if (j.contains("n_cal")) c.sizes.n_cal = j["n_cal"].get<std::size_t>();
    if (j.contains("n_test")) c.sizes.n_test = j["n_test"].get<std::size_t>();
    if (j.contains("grid_points")) c.grid_points = j["grid_points"].get<std::size_t>();
    if (j.contains("n_lat")) c.n_lat = j["n_lat"].get<std::size_t>();
    if (j.contains("n_lon")) c.n_lon = j["n_lon"].get<std::size_t>();
    if (j.contains("M")) c.sampler.M = j["M"].get<std::size_t>();
    if (j.contains("n_s")) c.sampler.n_s = j["n_s"].get<std::size_t>();
    if (j.contains("max_proposals")) c.sampler.max_proposals = j["max_proposals"].get<std::size_t>();
    if (j.contains("proposal_family"))
      c.sampler.proposal = parse_proposal_family(j["proposal_family"].get<std::string>());
    if (j.contains("lambda_grid")) c.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    if (j.contains("cross_validate")) c.cross_validate = j["cross_validate"].get<bool>();
    if (j.contains("bands")) c.bands = j["bands"].get<bool>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("replicates")) c.replicates = j["replicates"].get<std::size_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<std::size_t>();
    if (j.contains("base_model")) c.base_model = parse_base_model_kind(j["base_model"].get<std::string>());
    if (j.contains("ridge_half_width")) c.ridge_half_width = j["ridge_half_width"].get<std::size_t>();
    if (j.contains("ridge_penalty")) c.ridge_penalty = j["ridge_penalty"].get<double>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j["methods"]) {
        MethodSpec spec;
        spec.kind = parse_method_kind(m.value("method", std::string("lsci")));
        spec.label = m.value("label", std::string());
        spec.lsci = lsci_config_from_json(m, c.lsci);
        c.methods.push_back(std::move(spec));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("run config: ") + e.what());
  }
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["task"] = to_string(c.task);
  j["lsci"] = to_json(c.lsci);
  j["alpha"] = c.alpha;
  j["delta"] = c.delta;
  j["n_train"] = c.sizes.n_train;
  j["n_cal"] = c.sizes.n_cal;
  j["n_test"] = c.sizes.n_test;
  j["grid_points"] = c.grid_points;
  j["n_lat"] = c.n_lat;
  j["n_lon"] = c.n_lon;
  j["M"] = c.sampler.M;
  j["n_s"] = c.sampler.n_s;
  j["max_proposals"] = c.sampler.proposal_budget();
  j["proposal_family"] = to_string(c.sampler.proposal);
  j["lambda_grid"] = c.lambda_grid;
  j["cross_validate"] = c.cross_validate;
  j["bands"] = c.bands;
  j["seed"] = c.seed;
  j["replicates"] = c.replicates;
  j["threads"] = c.threads;
  j["base_model"] = to_string(c.base_model);
  j["ridge_half_width"] = c.ridge_half_width;
  j["ridge_penalty"] = c.ridge_penalty;
  j["output_dir"] = c.output_dir;
  auto methods = nlohmann::json::array();
  for (const auto& m : c.methods) {
    nlohmann::json mj = m.kind == MethodKind::Lsci ? to_json(m.lsci) : nlohmann::json::object();
    mj["method"] = to_string(m.kind);
    mj["label"] = m.label;
    methods.push_back(std::move(mj));
  }
  j["methods"] = std::move(methods);
  return j;
}

std::vector<MethodSpec> lsci_grid(const LsciConfig& base, const std::vector<ProjectionKind>& projections,
                                  const std::vector<DepthKind>& depths,
                                  const std::vector<KernelKind>& localizers,
                                  const std::vector<double>& lambdas) {
  std::vector<MethodSpec> out;
  for (auto p : projections)
    for (auto d : depths)
      for (auto k : localizers)
        for (double l : lambdas) {
          MethodSpec m{"", MethodKind::Lsci, base};
          m.lsci.projection = p;
          m.lsci.depth = d;
          m.lsci.localizer = LocalizerKind{k, l};
          m.label = default_label(m);
          out.push_back(std::move(m));
        }
  return out;
}

}  // namespace lsci
