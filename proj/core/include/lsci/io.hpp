#pragma once

// CSV and JSON persistence for grids and function sets.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsci/functional.hpp"

namespace lsci::io {

/// Shortest round-trip-safe text for a double (17 significant digits).
std::string format_double(double v);
double parse_double(std::string_view s);

nlohmann::json grid_to_json(const Grid& grid);
GridPtr grid_from_json(const nlohmann::json& j);

void write_grid(const std::filesystem::path& path, const Grid& grid);
GridPtr read_grid(const std::filesystem::path& path);

/// One row per sample, one column per grid point. When the set carries index
/// labels they are written as a leading column.
void write_function_set(const std::filesystem::path& path, const FunctionSet& fs);
std::string function_set_to_csv(const FunctionSet& fs);

/// Reads rows of |grid| values, or |grid|+1 values when a leading index
/// column is present.
FunctionSet read_function_set(const std::filesystem::path& path, GridPtr grid);
FunctionSet function_set_from_csv(std::string_view text, GridPtr grid);

/// Plain numeric table with a header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const std::filesystem::path& path, const Table& table);
Table read_table(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

}  // namespace lsci::io
