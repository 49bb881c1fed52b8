#include "roughnum_cli/output.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "roughnum/errors.hpp"

namespace roughnum::cli {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::string format_cell(const nlohmann::json& cell) {
  if (cell.is_number_float()) return format_double(cell.get<double>());
  if (cell.is_number()) return cell.dump();
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  if (cell.is_string()) {
    const auto& s = cell.get_ref<const std::string&>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return cell.dump();
}

void write_csv(std::ostream& os, const RunConfig& config, const Table& table) {
  os << "# tool: roughnum " << kToolVersion << '\n';
  os << "# config_hash: " << hex64(config_hash(config)) << '\n';
  os << "# seed: " << config.seed << '\n';
  os << "# config: " << canonical_json(config) << '\n';
  for (const auto& [key, value] : table.notes) {
    os << "# " << key << ": " << value << '\n';
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    os << (c ? "," : "") << table.columns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << format_cell(row[c]);
    }
    os << '\n';
  }
}

nlohmann::json metadata(const RunConfig& config, const Table& table) {
  nlohmann::json meta;
  meta["tool"] = "roughnum";
  meta["version"] = kToolVersion;
  meta["config_hash"] = hex64(config_hash(config));
  meta["seed"] = config.seed;
  meta["config"] = to_json(config);
  meta["columns"] = table.columns;
  nlohmann::json notes = nlohmann::json::object();
  for (const auto& [key, value] : table.notes) notes[key] = value;
  meta["notes"] = notes;
  return meta;
}

void write_json(std::ostream& os, const RunConfig& config, const Table& table) {
  nlohmann::json doc;
  doc["meta"] = metadata(config, table);
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) doc["rows"].push_back(row);
  os << doc.dump(2) << '\n';
}

namespace {

void write_file(const std::filesystem::path& target, const std::string& body) {
  std::filesystem::path partial = target;
  partial += ".partial";
  {
    std::ofstream os(partial, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + partial.string() + " for writing");
    os << body;
    if (!os.flush()) {
      std::filesystem::remove(partial);
      throw std::runtime_error("failed writing " + partial.string());
    }
  }
  std::filesystem::rename(partial, target);
}

}  // namespace

void emit(const RunConfig& config, const Table& table, std::ostream& fallback) {
  std::ostringstream body;
  if (config.format == Format::Csv) {
    write_csv(body, config, table);
  } else {
    write_json(body, config, table);
  }
  if (config.out.empty()) {
    fallback << body.str();
    return;
  }
  const std::filesystem::path target(config.out);
  if (config.format == Format::Csv) {
    nlohmann::json sidecar = metadata(config, table);
    sidecar["output"] = config.out;
    std::filesystem::path side = target;
    side += ".json";
    write_file(side, sidecar.dump(2) + "\n");
    try {
      write_file(target, body.str());
    } catch (...) {
      std::filesystem::remove(side);
      throw;
    }
  } else {
    write_file(target, body.str());
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

double to_number(const std::string& cell, const std::string& path, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ValidationError(path + ":" + std::to_string(line) + ": not a number: '" + cell + "'");
  }
  return v;
}

}  // namespace

PathFile read_path_file(const std::string& path, std::uint64_t trial) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open path file " + path);
  std::string line;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  PathFile file;
  bool has_trial = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (header.empty()) {
      header = cells;
      has_trial = !header.empty() && header[0] == "trial";
      const std::size_t t_col = has_trial ? 1 : 0;
      if (header.size() < t_col + 2 || header[t_col] != "t") {
        throw ValidationError(path + ": expected columns [trial,] t, x_1, ..., x_d");
      }
      continue;
    }
    if (cells.size() != header.size()) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": wrong number of columns");
    }
    std::size_t col = 0;
    if (has_trial) {
      if (to_number(cells[0], path, line_no) != static_cast<double>(trial)) continue;
      col = 1;
    }
    file.grid.push_back(to_number(cells[col], path, line_no));
    std::vector<double> values;
    for (std::size_t c = col + 1; c < cells.size(); ++c) values.push_back(to_number(cells[c], path, line_no));
    file.rows.push_back(std::move(values));
  }
  if (file.grid.size() < 2) throw ValidationError(path + ": need at least two grid points");
  return file;
}

}  // namespace roughnum::cli
