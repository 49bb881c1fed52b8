#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "roughnum_cli/config.hpp"

namespace roughnum::cli {

inline constexpr const char* kToolVersion = "0.3.0";

/// Column table; cells are JSON scalars so both writers share one source.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  /// Extra `# key: value` metadata lines (and "notes" in JSON).
  std::vector<std::pair<std::string, std::string>> notes;
};

/// Shortest round-trip decimal form.
[[nodiscard]] std::string format_double(double x);
[[nodiscard]] std::string format_cell(const nlohmann::json& cell);

/// Header lines: tool version, config hash, seed, config echo, notes.
void write_csv(std::ostream& os, const RunConfig& config, const Table& table);
[[nodiscard]] nlohmann::json metadata(const RunConfig& config, const Table& table);
void write_json(std::ostream& os, const RunConfig& config, const Table& table);

/// Writes `out` (and `out.json` alongside CSV) through temporaries renamed on
/// success; with an empty `out` the table goes to `fallback`.
void emit(const RunConfig& config, const Table& table, std::ostream& fallback);

/// A path file: CSV with columns t, x_1..x_d and an optional leading `trial`
/// column; '#' lines are skipped. With a trial column, rows of `trial` are kept.
struct PathFile {
  std::vector<double> grid;
  std::vector<std::vector<double>> rows;  // per grid point, d values
};
[[nodiscard]] PathFile read_path_file(const std::string& path, std::uint64_t trial);

}  // namespace roughnum::cli
