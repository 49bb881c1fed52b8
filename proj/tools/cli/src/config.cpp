#include "roughnum_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "roughnum/errors.hpp"

namespace roughnum::cli {

using nlohmann::json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"sample", "pvar",   "nalpha",  "rde",     "linrde",
                                              "jacobian", "she", "tailfit", "selftest"};
  return names;
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "subcommand", "model",         "hurst",         "epsilon",  "truncation", "dimension", "horizon",
      "p",          "alpha",         "grid",          "trials",   "seed",       "first_trial", "statistic",
      "mode",       "q",             "tail_fraction", "clip_fraction", "epsilons", "she_grid", "she_coarse_grid",
      "input",      "out",           "format"};
  return keys;
}

double read_number(const json& doc, const std::string& key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

std::uint64_t read_count(const json& doc, const std::string& key, std::uint64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError(key, "must be nonnegative");
  throw ConfigError(key, "expected a nonnegative integer");
}

std::string read_string(const json& doc, const std::string& key, const std::string& fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "configuration must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  }
  RunConfig c;
  require(doc.contains("subcommand"), "subcommand", "missing");
  c.subcommand = read_string(doc, "subcommand", "");
  require(std::find(subcommands().begin(), subcommands().end(), c.subcommand) != subcommands().end(), "subcommand",
          "unknown subcommand '" + c.subcommand + "'");
  require(doc.contains("seed"), "seed", "missing (seeds are mandatory)");
  c.seed = read_count(doc, "seed", 0);

  c.model = read_string(doc, "model", c.model);
  require(c.model == "brownian" || c.model == "fbm" || c.model == "she", "model",
          "expected one of brownian, fbm, she");
  c.hurst = read_number(doc, "hurst", c.hurst);
  require(c.hurst > 1.0 / 3.0 && c.hurst < 1.0, "hurst", fmt(c.hurst) + " outside (1/3, 1)");
  c.epsilon = read_number(doc, "epsilon", c.epsilon);
  require(c.epsilon >= 0.0, "epsilon", "must be >= 0");
  c.truncation = read_count(doc, "truncation", c.truncation);
  require(c.truncation >= 1 && c.truncation <= 100000000, "truncation", "must be in [1, 1e8]");
  c.dimension = read_count(doc, "dimension", c.dimension);
  require(c.dimension >= 1 && c.dimension <= 16, "dimension", "must be in [1, 16]");
  c.horizon = read_number(doc, "horizon", c.horizon);
  require(c.horizon > 0.0, "horizon", "must be positive");

  c.p = read_number(doc, "p", c.p);
  require(c.p > 2.0 && c.p < 3.0, "p", fmt(c.p) + " outside the supported range (2,3)");
  c.alpha = read_number(doc, "alpha", c.alpha);
  require(c.alpha > 0.0, "alpha", "must be positive");
  c.grid = read_count(doc, "grid", c.grid);
  require(c.grid >= 1 && c.grid <= 65536, "grid", "must be in [1, 65536]");
  c.trials = read_count(doc, "trials", c.trials);
  require(c.trials >= 1 && c.trials <= 10000000, "trials", "must be in [1, 1e7]");
  c.first_trial = read_count(doc, "first_trial", c.first_trial);
  c.statistic = read_string(doc, "statistic", c.statistic);
  try {
    (void)parse_statistic(c.statistic);
  } catch (const ValidationError& e) {
    throw ConfigError("statistic", e.what());
  }
  c.mode = read_string(doc, "mode", c.mode);
  require(c.mode == "level1" || c.mode == "level2" || c.mode == "homogeneous" || c.mode == "level-split", "mode",
          "expected one of level1, level2, homogeneous, level-split");
  c.q = read_number(doc, "q", c.q);
  require(c.q > 0.0, "q", "must be positive");
  c.tail_fraction = read_number(doc, "tail_fraction", c.tail_fraction);
  require(c.tail_fraction > 0.0 && c.tail_fraction < 1.0, "tail_fraction", "must be in (0, 1)");
  c.clip_fraction = read_number(doc, "clip_fraction", c.clip_fraction);
  require(c.clip_fraction >= 0.0 && c.clip_fraction < c.tail_fraction, "clip_fraction",
          "must be in [0, tail_fraction)");

  if (doc.contains("epsilons")) {
    const json& list = doc.at("epsilons");
    require(list.is_array() && !list.empty(), "epsilons", "expected a non-empty array of numbers");
    c.epsilons.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string key = "epsilons[" + std::to_string(i) + "]";
      require(list[i].is_number(), key, "expected a number");
      const double e = list[i].get<double>();
      require(std::isfinite(e) && e >= 0.0, key, "must be >= 0");
      c.epsilons.push_back(e);
    }
  }
  c.she_grid = read_count(doc, "she_grid", c.she_grid);
  require(c.she_grid >= 2 && c.she_grid <= 4096, "she_grid", "must be in [2, 4096]");
  c.she_coarse_grid = read_count(doc, "she_coarse_grid", c.she_coarse_grid);
  require(c.she_coarse_grid >= 2 && c.she_coarse_grid <= 4096, "she_coarse_grid", "must be in [2, 4096]");

  c.input = read_string(doc, "input", c.input);
  c.out = read_string(doc, "out", c.out);
  const std::string format = read_string(doc, "format", "csv");
  require(format == "csv" || format == "json", "format", "expected csv or json");
  c.format = format == "csv" ? Format::Csv : Format::Json;

  if (c.subcommand == "she") {
    require(c.model == "she" || !doc.contains("model"), "model", "the she subcommand uses the she model");
    c.model = "she";
  }
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["model"] = c.model;
  j["hurst"] = c.hurst;
  j["epsilon"] = c.epsilon;
  j["truncation"] = c.truncation;
  j["dimension"] = c.dimension;
  j["horizon"] = c.horizon;
  j["p"] = c.p;
  j["alpha"] = c.alpha;
  j["grid"] = c.grid;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["first_trial"] = c.first_trial;
  j["statistic"] = c.statistic;
  j["mode"] = c.mode;
  j["q"] = c.q;
  j["tail_fraction"] = c.tail_fraction;
  j["clip_fraction"] = c.clip_fraction;
  j["epsilons"] = c.epsilons;
  j["she_grid"] = c.she_grid;
  j["she_coarse_grid"] = c.she_coarse_grid;
  j["input"] = c.input;
  j["format"] = c.format == Format::Csv ? "csv" : "json";
  return j;
}

std::string canonical_json(const RunConfig& config) { return to_json(config).dump(); }

std::uint64_t fnv1a64(const std::string& text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const RunConfig& config) { return fnv1a64(canonical_json(config)); }

std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

GaussianModel model_of(const RunConfig& c) {
  GaussianModel m;
  if (c.model == "brownian") {
    m = GaussianModel::brownian(c.dimension, c.horizon);
  } else if (c.model == "fbm") {
    m = GaussianModel::fbm(c.hurst, c.dimension, c.horizon);
  } else {
    m = GaussianModel::stochastic_heat(c.epsilon, c.dimension, c.truncation);
  }
  m.validate();
  return m;
}

PVarMode mode_of(const RunConfig& c) {
  if (c.mode == "level1") return PVarMode::Level1;
  if (c.mode == "level2") return PVarMode::Level2;
  if (c.mode == "homogeneous") return PVarMode::Homogeneous;
  return PVarMode::LevelSplit;
}

TrialConfig trial_config_of(const RunConfig& c) {
  TrialConfig t;
  t.model = model_of(c);
  t.p = c.p;
  t.alpha = c.alpha;
  t.grid = c.grid;
  t.trials = c.trials;
  t.seed = c.seed;
  t.first_trial = c.first_trial;
  t.statistic = parse_statistic(c.statistic);
  t.mode = mode_of(c);
  t.q = c.q;
  return t;
}

}  // namespace roughnum::cli
