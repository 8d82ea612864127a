#include "lsci/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace lsci::io {

namespace {

std::vector<std::string_view> split_line(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) throw Error(ErrorCode::Io, "cannot format number");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::Parse, "not a number: '" + std::string(s) + "'");
  return v;
}

nlohmann::json grid_to_json(const Grid& grid) {
  nlohmann::json j;
  j["kind"] = grid.kind() == GridKind::Interval1D ? "interval1d" : "latlon2d";
  j["n_points"] = grid.size();
  if (grid.kind() == GridKind::LatLon2D) {
    j["n_lat"] = grid.n_lat();
    j["n_lon"] = grid.n_lon();
  }
  j["points"] = grid.coords();
  j["weights"] = vector_to_json(grid.weights());
  return j;
}

GridPtr grid_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    auto pts = j.at("points").get<std::vector<double>>();
    Vector w = vector_from_json(j.at("weights"));
    if (kind == "interval1d") {
      return std::make_shared<const Grid>(GridKind::Interval1D, std::move(pts), std::move(w));
    }
    if (kind == "latlon2d") {
      return std::make_shared<const Grid>(GridKind::LatLon2D, std::move(pts), std::move(w),
                                          j.at("n_lat").get<std::size_t>(),
                                          j.at("n_lon").get<std::size_t>());
    }
    throw Error(ErrorCode::Parse, "unknown grid kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("grid header: ") + e.what());
  }
}

void write_grid(const std::filesystem::path& path, const Grid& grid) {
  write_json(path, grid_to_json(grid));
}

GridPtr read_grid(const std::filesystem::path& path) { return grid_from_json(read_json(path)); }

std::string function_set_to_csv(const FunctionSet& fs) {
  std::string out;
  const auto& labels = fs.index_labels();
  const auto& m = fs.values();
  out.reserve(fs.size() * static_cast<std::size_t>(m.cols()) * 24);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (labels) {
      out += format_double((*labels)[static_cast<std::size_t>(r)]);
      out += ',';
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_function_set(const std::filesystem::path& path, const FunctionSet& fs) {
  write_text(path, function_set_to_csv(fs));
}

FunctionSet function_set_from_csv(std::string_view text, GridPtr grid) {
  const std::size_t g = grid->size();
  std::vector<double> values;
  std::vector<double> labels;
  std::optional<bool> has_index;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_line(line);
    const bool indexed = cells.size() == g + 1;
    if (!indexed && cells.size() != g) {
      throw Error(ErrorCode::ShapeMismatch, "line " + std::to_string(line_no) + " has " +
                                                std::to_string(cells.size()) + " columns, grid has " +
                                                std::to_string(g) + " points");
    }
    if (has_index && *has_index != indexed)
      throw Error(ErrorCode::ShapeMismatch, "inconsistent index column at line " +
                                                std::to_string(line_no));
    has_index = indexed;
    std::size_t first = 0;
    if (indexed) {
      labels.push_back(parse_double(cells[0]));
      first = 1;
    }
    for (std::size_t c = first; c < cells.size(); ++c) values.push_back(parse_double(cells[c]));
    ++rows;
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(g));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < g; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * g + c];
  std::optional<std::vector<double>> lab;
  if (has_index.value_or(false)) lab = std::move(labels);
  return FunctionSet(std::move(grid), std::move(m), std::move(lab));
}

FunctionSet read_function_set(const std::filesystem::path& path, GridPtr grid) {
  try {
    return function_set_from_csv(read_text(path), std::move(grid));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_table(const std::filesystem::path& path, const Table& table) {
  std::ostringstream os;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) os << ',';
    os << table.columns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) os << ',';
      os << row[c];
    }
    os << '\n';
  }
  write_text(path, os.str());
}

Table read_table(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  Table t;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    auto v = trim(line);
    if (v.empty()) continue;
    std::vector<std::string> cells;
    for (auto c : split_line(v)) cells.emplace_back(trim(c));
    if (header) {
      t.columns = std::move(cells);
      header = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json vector_to_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector vector_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace lsci::io
