#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughnum/tails.hpp"

namespace roughnum::cli {

enum class Format { Csv, Json };

/// Every run is described by one flat JSON object; keys mirror the fields.
/// `out` is where results go and is not part of the hashed configuration.
struct RunConfig {
  std::string subcommand;
  std::string model = "brownian";  // brownian | fbm | she
  double hurst = 0.5;
  double epsilon = 0.0;
  std::uint64_t truncation = 100000;
  std::uint64_t dimension = 2;
  double horizon = 1.0;

  double p = 2.5;
  double alpha = 1.0;
  std::uint64_t grid = 512;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  std::uint64_t first_trial = 0;
  std::string statistic = "nalpha_x";
  std::string mode = "level-split";  // level1 | level2 | homogeneous | level-split
  double q = 1.0;
  double tail_fraction = 0.10;
  double clip_fraction = 0.005;

  std::vector<double> epsilons{0.0, 0.1, 0.5, 1.0};
  std::uint64_t she_grid = 256;
  std::uint64_t she_coarse_grid = 128;

  std::string input;  // path file for pvar / nalpha / rde / linrde / jacobian
  std::string out;
  Format format = Format::Csv;
};

/// Invalid configuration; `field` is the offending key path, e.g. "p" or "epsilons[2]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

[[nodiscard]] const std::vector<std::string>& subcommands();

/// Strict: unknown keys, wrong types and out-of-range values throw ConfigError.
/// `seed` and `subcommand` are mandatory.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] RunConfig parse_config_text(const std::string& text);

/// All fields except `out`, with defaults filled in.
[[nodiscard]] nlohmann::json to_json(const RunConfig& config);
[[nodiscard]] std::string canonical_json(const RunConfig& config);
/// FNV-1a 64 of canonical_json.
[[nodiscard]] std::uint64_t config_hash(const RunConfig& config);
[[nodiscard]] std::uint64_t fnv1a64(const std::string& text) noexcept;
[[nodiscard]] std::string hex64(std::uint64_t value);

[[nodiscard]] GaussianModel model_of(const RunConfig& config);
[[nodiscard]] PVarMode mode_of(const RunConfig& config);
[[nodiscard]] TrialConfig trial_config_of(const RunConfig& config);

}  // namespace roughnum::cli
