#include "roughnum_cli/run.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "roughnum/errors.hpp"
#include "roughnum/greedy.hpp"
#include "roughnum/rho_variation.hpp"
#include "roughnum_selftest/selftest.hpp"

namespace roughnum::cli {

using nlohmann::json;

namespace {

struct Driver {
  Level2RoughPath path;
  std::string source;
};

Driver load_driver(const RunConfig& c) {
  if (!c.input.empty()) {
    const PathFile file = read_path_file(c.input, c.first_trial);
    const auto d = static_cast<Eigen::Index>(file.rows.front().size());
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(file.rows.size()), d);
    for (std::size_t i = 0; i < file.rows.size(); ++i) {
      for (Eigen::Index a = 0; a < d; ++a) samples(static_cast<Eigen::Index>(i), a) = file.rows[i][static_cast<std::size_t>(a)];
    }
    return {lift_piecewise_linear(file.grid, samples), c.input};
  }
  const GaussianModel model = model_of(c);
  const GaussianSampler sampler(model, model.uniform_grid(c.grid));
  return {lift_piecewise_linear({sampler.grid().begin(), sampler.grid().end()}, sampler.sample(c.seed, c.first_trial)),
          "sampled " + c.model + " trial " + std::to_string(c.first_trial)};
}

void require_planar(const Level2RoughPath& x, const char* what) {
  if (x.dimension() != 2) {
    throw ConfigError("dimension", std::string(what) + " uses the 2-dimensional reference fields");
  }
}

Table sample_table(const RunConfig& c) {
  const GaussianModel model = model_of(c);
  const GaussianSampler sampler(model, model.uniform_grid(c.grid));
  Table t;
  t.columns = {"trial", "t"};
  for (std::size_t a = 0; a < model.dimension; ++a) t.columns.push_back("x_" + std::to_string(a + 1));
  t.notes.emplace_back("jitter", format_double(sampler.jitter()));
  for (std::uint64_t k = 0; k < c.trials; ++k) {
    const auto trial = c.first_trial + k;
    const Eigen::MatrixXd s = sampler.sample(c.seed, trial);
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      std::vector<json> row{trial, sampler.grid()[static_cast<std::size_t>(i)]};
      for (Eigen::Index a = 0; a < s.cols(); ++a) row.emplace_back(s(i, a));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table pvar_table(const RunConfig& c) {
  const Driver drv = load_driver(c);
  Table t;
  t.columns = {"mode", "p", "p_variation", "power_sum"};
  t.notes.emplace_back("driver", drv.source);
  const std::pair<const char*, PVarMode> modes[] = {{"level1", PVarMode::Level1},
                                                    {"level2", PVarMode::Level2},
                                                    {"homogeneous", PVarMode::Homogeneous},
                                                    {"level-split", PVarMode::LevelSplit}};
  for (const auto& [name, mode] : modes) {
    const double power = p_variation_power(drv.path, c.p, drv.path.full_window(), mode);
    t.rows.push_back({name, c.p, p_variation(drv.path, c.p, mode), power});
  }
  return t;
}

json nalpha_row(const Level2RoughPath& x, const RunConfig& c, std::uint64_t trial) {
  const Control omega = control_from_rough_path(x, c.p, mode_of(c));
  const auto part = greedy_partition(omega, c.alpha);
  const auto var = accumulated_alpha_variation(omega, c.alpha, omega.full_window());
  std::string taus;
  for (std::size_t k = 0; k < part.taus.size(); ++k) taus += (k ? ";" : "") + std::to_string(part.taus[k]);
  return json::array({trial, part.count, var.value, var.admissible, taus});
}

Table nalpha_table(const RunConfig& c) {
  Table t;
  t.columns = {"trial", "count", "alpha_variation", "admissible", "taus"};
  if (!c.input.empty()) {
    const Driver drv = load_driver(c);
    t.notes.emplace_back("driver", drv.source);
    t.rows.push_back(nalpha_row(drv.path, c, c.first_trial));
    return t;
  }
  const GaussianModel model = model_of(c);
  const GaussianSampler sampler(model, model.uniform_grid(c.grid));
  const std::vector<double> grid(sampler.grid().begin(), sampler.grid().end());
  t.notes.emplace_back("driver", "sampled " + c.model);
  for (std::uint64_t k = 0; k < c.trials; ++k) {
    const auto trial = c.first_trial + k;
    t.rows.push_back(nalpha_row(lift_piecewise_linear(grid, sampler.sample(c.seed, trial)), c, trial));
  }
  return t;
}

Table solution_table(const RdeSolution& y, const std::string& prefix, const std::vector<std::string>& names) {
  Table t;
  t.columns = {"t"};
  for (const auto& n : names) t.columns.push_back(prefix + n);
  for (Eigen::Index i = 0; i < y.path.rows(); ++i) {
    std::vector<json> row{y.grid[static_cast<std::size_t>(i)]};
    for (Eigen::Index a = 0; a < y.path.cols(); ++a) row.emplace_back(y.path(i, a));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table rde_table(const RunConfig& c) {
  const Driver drv = load_driver(c);
  require_planar(drv.path, "rde");
  Table t = solution_table(solve_rde(reference_vector_fields(), drv.path, reference_initial_state()), "y_", {"1", "2"});
  t.notes.emplace_back("driver", drv.source);
  t.notes.emplace_back("fields", "V_1(y) = (sin y2, cos y1), V_2(y) = (cos y2, -sin y1)/2, y0 = (1, 0)");
  return t;
}

Table linrde_table(const RunConfig& c) {
  const Driver drv = load_driver(c);
  require_planar(drv.path, "linrde");
  const LinearField field = reference_linear_field();
  Table t = solution_table(solve_linear_rde(field, drv.path, reference_initial_state()), "y_", {"1", "2"});
  t.notes.emplace_back("driver", drv.source);
  t.notes.emplace_back("fields", "A_1 = [[0,1],[-1,0]], A_2 = diag(1/2,-1/2), b_1 = (1/10,0), b_2 = (0,1/10), y0 = (1, 0)");
  t.notes.emplace_back("nu", format_double(field.nu()));
  return t;
}

Table jacobian_table(const RunConfig& c) {
  const Driver drv = load_driver(c);
  require_planar(drv.path, "jacobian");
  Table t = solution_table(jacobian_flow(reference_vector_fields(), drv.path, reference_initial_state()), "J_",
                           {"11", "12", "21", "22"});
  t.notes.emplace_back("driver", drv.source);
  t.notes.emplace_back("fields", "V_1(y) = (sin y2, cos y1), V_2(y) = (cos y2, -sin y1)/2, y0 = (1, 0)");
  return t;
}

Table she_table(const RunConfig& c) {
  Table t;
  t.columns = {"section", "epsilon", "x_or_n", "value", "reference", "residual", "bound"};
  t.notes.emplace_back("truncation", std::to_string(c.truncation));
  t.notes.emplace_back("series_tail_bound", format_double(she_series_tail_bound(c.truncation)));
  for (double eps : c.epsilons) {
    for (int k = 0; k <= 8; ++k) {
      const double x = -std::numbers::pi + 2.0 * std::numbers::pi * k / 8.0;
      const double full = she_kernel_series(eps, x, c.truncation);
      t.rows.push_back({"kernel", eps, x, full, "", "", she_series_tail_bound(c.truncation)});
      if (eps > 0.0) {
        const double partial = she_partial_kernel_series(eps, x, c.truncation);
        const double closed = she_kernel_closed_reference(eps, x);
        t.rows.push_back({"closed-form", eps, x, partial, closed, std::abs(partial - closed),
                          she_partial_tail_bound(eps, c.truncation)});
      }
    }
  }
  double lo = INFINITY, hi = 0.0;
  for (double eps : c.epsilons) {
    const GaussianModel model = GaussianModel::stochastic_heat(eps, 1, c.truncation);
    const double fine = rho_variation_2d(model, model.uniform_grid(c.she_grid), 1.0).value;
    const double coarse = rho_variation_2d(model, model.uniform_grid(c.she_coarse_grid), 1.0).value;
    lo = std::min(lo, fine);
    hi = std::max(hi, fine);
    t.rows.push_back({"rho1", eps, c.she_grid, fine, coarse, std::abs(fine - coarse) / coarse, 0.1});
  }
  t.rows.push_back({"uniformity", "", c.she_grid, hi / lo, lo, hi, 2.0});
  return t;
}

Table tailfit_table(const RunConfig& c, std::size_t workers, int& exit_code) {
  TrialConfig tc = trial_config_of(c);
  tc.workers = workers;
  const TrialSample sample = run_trials(tc);
  const TailFit fit = fit_weibull_shape(sample.values, c.tail_fraction, c.clip_fraction);
  Table t;
  t.columns = {"section", "name", "value"};
  t.notes.emplace_back("statistic", c.statistic);
  t.notes.emplace_back("predicted_shape", format_double(tc.predicted_shape()));
  t.notes.emplace_back("caveat",
                       "desk-scale fits carry wide error bars; brackets are checked, not the exact exponent");
  t.rows.push_back({"fit", "shape", fit.shape});
  t.rows.push_back({"fit", "shape_se", fit.shape_se});
  t.rows.push_back({"fit", "scale", fit.scale});
  t.rows.push_back({"fit", "mle_shape", fit.mle_shape});
  t.rows.push_back({"fit", "method", fit.method});
  t.rows.push_back({"fit", "tail_fraction", fit.tail_fraction});
  t.rows.push_back({"fit", "clip_fraction", fit.clip_fraction});
  t.rows.push_back({"fit", "tail_points", fit.tail_points});
  t.rows.push_back({"fit", "samples", fit.samples});
  t.rows.push_back({"fit", "excluded", sample.excluded.size()});
  t.rows.push_back({"fit", "predicted_shape", tc.predicted_shape()});
  const double probs[] = {0.5, 0.9, 0.95, 0.99, 0.995};
  const auto levels = quantile_levels(sample.values, probs);
  for (const auto& row : survival_table(sample.values, levels)) {
    t.rows.push_back({"survival", format_double(row.level), row.survival});
  }
  if (!sample.excluded.empty()) exit_code = kExitNumeric;
  return t;
}

Table selftest_table(const RunConfig& c, int& exit_code) {
  Table t;
  t.columns = {"suite", "passed", "detail"};
  for (const auto& r : selftest::run_all(c.seed)) {
    t.rows.push_back({r.name, r.passed, r.detail});
    if (!r.passed) exit_code = kExitNumeric;
  }
  return t;
}

}  // namespace

Outcome execute(const RunConfig& c, std::size_t workers) {
  Outcome o;
  const std::string& s = c.subcommand;
  if (s == "sample") o.table = sample_table(c);
  else if (s == "pvar") o.table = pvar_table(c);
  else if (s == "nalpha") o.table = nalpha_table(c);
  else if (s == "rde") o.table = rde_table(c);
  else if (s == "linrde") o.table = linrde_table(c);
  else if (s == "jacobian") o.table = jacobian_table(c);
  else if (s == "she") o.table = she_table(c);
  else if (s == "tailfit") o.table = tailfit_table(c, workers, o.exit_code);
  else if (s == "selftest") o.table = selftest_table(c, o.exit_code);
  else throw ConfigError("subcommand", "unknown subcommand '" + s + "'");
  return o;
}

namespace {

enum class FlagKind { Text, Count, Number };

struct Flag {
  const char* name;   // command line spelling
  const char* key;    // configuration key
  FlagKind kind;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"--seed", "seed", FlagKind::Count, "random seed (mandatory)"},
    {"--trials", "trials", FlagKind::Count, "number of trials"},
    {"--first-trial", "first_trial", FlagKind::Count, "index of the first trial"},
    {"--out", "out", FlagKind::Text, "output path (stdout when omitted)"},
    {"--format", "format", FlagKind::Text, "csv or json"},
    {"--model", "model", FlagKind::Text, "brownian, fbm or she"},
    {"--hurst", "hurst", FlagKind::Number, "fBM Hurst parameter in (1/3, 1)"},
    {"--epsilon", "epsilon", FlagKind::Number, "hyper-viscosity for the she model"},
    {"--truncation", "truncation", FlagKind::Count, "she series truncation"},
    {"--dimension", "dimension", FlagKind::Count, "driver dimension"},
    {"--horizon", "horizon", FlagKind::Number, "time horizon for brownian / fbm"},
    {"--p", "p", FlagKind::Number, "variation exponent in (2,3)"},
    {"--alpha", "alpha", FlagKind::Number, "greedy threshold"},
    {"--grid", "grid", FlagKind::Count, "grid intervals"},
    {"--statistic", "statistic", FlagKind::Text, "tailfit statistic"},
    {"--mode", "mode", FlagKind::Text, "level1, level2, homogeneous or level-split"},
    {"--q", "q", FlagKind::Number, "complementary regularity; predicted shape 2/q"},
    {"--tail-fraction", "tail_fraction", FlagKind::Number, "upper fraction used by the fit"},
    {"--clip-fraction", "clip_fraction", FlagKind::Number, "extreme fraction dropped by the fit"},
    {"--she-grid", "she_grid", FlagKind::Count, "grid intervals of the she sweep"},
    {"--she-coarse-grid", "she_coarse_grid", FlagKind::Count, "coarse grid of the she refinement check"},
    {"--input", "input", FlagKind::Text, "path file (t, x_1..x_d)"},
};

json flag_value(const Flag& f, const std::string& text) {
  if (f.kind == FlagKind::Text) return text;
  if (f.kind == FlagKind::Count) {
    std::uint64_t v = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
      throw ConfigError(f.key, "expected a nonnegative integer, got '" + text + "'");
    }
    return v;
  }
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ConfigError(f.key, "expected a number, got '" + text + "'");
  }
  return v;
}

}  // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"roughnum: greedy partitions, p-variation, Gaussian rough paths and tail fits"};
  app.require_subcommand(1);
  std::string config_path;
  std::size_t workers = 0;
  app.add_option("--config", config_path, "JSON configuration (flags override its fields)");
  app.add_option("--workers", workers, "worker threads (0 = all cores); results do not depend on it");
  std::map<std::string, std::string> values;
  std::vector<std::pair<const Flag*, CLI::Option*>> options;
  for (const auto& f : kFlags) {
    options.emplace_back(&f, app.add_option(f.name, values[f.key], f.help));
  }
  static const std::map<std::string, std::string> blurbs{
      {"sample", "sample Gaussian driver paths"},
      {"pvar", "p-variation of a path file or a sampled path"},
      {"nalpha", "greedy partition counts per trial"},
      {"rde", "solve the reference nonlinear RDE"},
      {"linrde", "solve the reference linear RDE"},
      {"jacobian", "Jacobian flow of the reference RDE"},
      {"she", "SHE kernel and 2D 1-variation sweep over epsilon"},
      {"tailfit", "Weibull tail fit of a per-trial statistic"},
      {"selftest", "quick built-in consistency suites"}};
  for (const auto& name : subcommands()) app.add_subcommand(name, blurbs.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e, out, err);
    return kExitConfig;
  }

  RunConfig config;
  try {
    json doc = json::object();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ConfigError("--config", "cannot read " + config_path);
      std::stringstream text;
      text << is.rdbuf();
      try {
        doc = json::parse(text.str());
      } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
      }
      if (!doc.is_object()) throw ConfigError("$", "configuration must be a JSON object");
    }
    doc["subcommand"] = app.get_subcommands().front()->get_name();
    for (const auto& [flag, opt] : options) {
      if (opt->count() > 0) doc[flag->key] = flag_value(*flag, values[flag->key]);
    }
    config = parse_config(doc);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const Outcome outcome = execute(config, workers);
    emit(config, outcome.table, out);
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    if (!config.out.empty()) {
      std::error_code ec;
      std::filesystem::remove(config.out, ec);
      std::filesystem::remove(config.out + ".json", ec);
      std::filesystem::remove(config.out + ".partial", ec);
    }
    return kExitNumeric;
  }
}

}  // namespace roughnum::cli
