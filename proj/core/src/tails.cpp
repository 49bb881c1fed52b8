#include "roughnum/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "roughnum/errors.hpp"
#include "roughnum/greedy.hpp"
#include "roughnum/parallel.hpp"

namespace roughnum {

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::NAlphaX: return "nalpha_x";
    case Statistic::PVarX: return "pvar_x";
    case Statistic::NAlphaY: return "nalpha_y";
    case Statistic::LogPVarY: return "log_pvar_y";
    case Statistic::AbsIntegralG: return "abs_integral_g";
    case Statistic::PVarJ: return "pvar_j";
  }
  return "unknown";
}

Statistic parse_statistic(const std::string& name) {
  for (auto s : {Statistic::NAlphaX, Statistic::PVarX, Statistic::NAlphaY, Statistic::LogPVarY,
                 Statistic::AbsIntegralG, Statistic::PVarJ}) {
    if (to_string(s) == name) return s;
  }
  throw ValidationError("unknown statistic '" + name + "'");
}

std::string to_string(TransferMap m) {
  switch (m) {
    case TransferMap::NonlinearRde: return "rde";
    case TransferMap::RoughIntegral: return "integral";
    case TransferMap::LinearRde: return "linrde";
  }
  return "unknown";
}

VectorFieldFamily reference_vector_fields() {
  VectorFieldFamily v;
  v.state_dim = 2;
  v.driver_dim = 2;
  v.lip_bound = 1.0;
  v.value = [](const Eigen::VectorXd& y) {
    Eigen::MatrixXd f(2, 2);
    f << std::sin(y[1]), 0.5 * std::cos(y[1]),
         std::cos(y[0]), -0.5 * std::sin(y[0]);
    return f;
  };
  v.derivative = [](const Eigen::VectorXd& y) {
    Eigen::MatrixXd d0(2, 2), d1(2, 2);
    d0 << 0.0, 0.0,
          -std::sin(y[0]), -0.5 * std::cos(y[0]);
    d1 << std::cos(y[1]), -0.5 * std::sin(y[1]),
          0.0, 0.0;
    return std::vector<Eigen::MatrixXd>{d0, d1};
  };
  v.second_derivative = [](const Eigen::VectorXd& y) {
    Eigen::MatrixXd d00(2, 2), d11(2, 2);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 2);
    d00 << 0.0, 0.0,
           -std::cos(y[0]), 0.5 * std::sin(y[0]);
    d11 << -std::sin(y[1]), -0.5 * std::cos(y[1]),
           0.0, 0.0;
    return std::vector<std::vector<Eigen::MatrixXd>>{{d00, zero}, {zero, d11}};
  };
  return v;
}

LinearField reference_linear_field() {
  LinearField f;
  Eigen::MatrixXd a1(2, 2), a2(2, 2);
  a1 << 0.0, 1.0, -1.0, 0.0;
  a2 << 0.5, 0.0, 0.0, -0.5;
  f.a = {a1, a2};
  f.b = {Eigen::Vector2d(0.1, 0.0), Eigen::Vector2d(0.0, 0.1)};
  return f;
}

OneForm reference_one_form() {
  OneForm g;
  g.input_dim = 2;
  g.output_dim = 1;
  g.lip_bound = 1.0;
  g.value = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd f(1, 2);
    f << std::sin(x[1]), std::cos(x[0]);
    return f;
  };
  g.derivative = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd d0(1, 2), d1(1, 2);
    d0 << 0.0, -std::sin(x[0]);
    d1 << std::cos(x[1]), 0.0;
    return std::vector<Eigen::MatrixXd>{d0, d1};
  };
  return g;
}

Eigen::VectorXd reference_initial_state() { return Eigen::Vector2d(1.0, 0.0); }

void TrialConfig::validate() const {
  model.validate();
  require_rough_exponent(p);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
  if (grid < 1) throw ValidationError("grid must have at least one interval");
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (!(q > 0.0) || !std::isfinite(q)) throw ValidationError("q must be positive");
  const bool needs_plane = statistic != Statistic::NAlphaX && statistic != Statistic::PVarX;
  if (needs_plane && model.dimension != 2) {
    throw ValidationError("statistic " + to_string(statistic) + " needs a 2-dimensional driver");
  }
}

namespace {

double sup_norm(const Eigen::MatrixXd& path) { return path.rowwise().norm().maxCoeff(); }

std::size_t count_of(const Level2RoughPath& x, const TrialConfig& c) {
  return n_alpha(control_from_rough_path(x, c.p, c.mode), c.alpha);
}

double evaluate(const TrialConfig& c, const Level2RoughPath& x) {
  switch (c.statistic) {
    case Statistic::NAlphaX:
      return static_cast<double>(count_of(x, c));
    case Statistic::PVarX:
      return p_variation(x, c.p, c.mode);
    case Statistic::NAlphaY: {
      const auto y = solve_rde(reference_vector_fields(), x, reference_initial_state());
      return static_cast<double>(count_of(*y.lift, c));
    }
    case Statistic::LogPVarY: {
      const auto y = solve_linear_rde(reference_linear_field(), x, reference_initial_state());
      return std::log(p_variation(*y.lift, c.p, c.mode));
    }
    case Statistic::AbsIntegralG: {
      const auto z = rough_integral(reference_one_form(), x, false);
      return std::abs(z.path(z.path.rows() - 1, 0));
    }
    case Statistic::PVarJ: {
      const auto j = jacobian_flow(reference_vector_fields(), x, reference_initial_state());
      return path_p_variation(j.path, c.p);
    }
  }
  return 0.0;
}

}  // namespace

TrialSample run_trials(const TrialConfig& config) {
  config.validate();
  const GaussianSampler sampler(config.model, config.model.uniform_grid(config.grid));
  const std::vector<double> grid(sampler.grid().begin(), sampler.grid().end());
  std::vector<double> values(config.trials, 0.0);
  std::vector<char> ok(config.trials, 1);
  parallel_for(
      config.trials,
      [&](std::size_t i) {
        const auto trial = config.first_trial + i;
        const Level2RoughPath x = lift_piecewise_linear(grid, sampler.sample(config.seed, trial));
        try {
          values[i] = evaluate(config, x);
        } catch (const NumericFailure&) {
          ok[i] = 0;
        }
      },
      config.workers);
  TrialSample out;
  for (std::size_t i = 0; i < config.trials; ++i) {
    const auto trial = config.first_trial + i;
    if (ok[i]) {
      out.values.push_back(values[i]);
      out.trials.push_back(trial);
    } else {
      out.excluded.push_back(trial);
    }
  }
  return out;
}

namespace {

// Profile log-likelihood of exceedances r_i > u under P(Z > r | Z > u) = exp(-c (r^k - u^k)).
double exceedance_profile(std::span<const double> r, double u, double k) {
  const double m = static_cast<double>(r.size());
  const double top = r.back();
  const double floor_term = std::pow(u / top, k);
  double excess = 0.0;
  double logs = 0.0;
  for (double v : r) {
    excess += std::pow(v / top, k) - floor_term;
    logs += std::log(v);
  }
  if (!(excess > 0.0)) return -std::numeric_limits<double>::infinity();
  return m * std::log(k) - m * std::log(excess / m) - m * k * std::log(top) + (k - 1.0) * logs - m;
}

double exceedance_mle(std::span<const double> r, double u) {
  if (r.size() < 2 || !(u > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  // coarse scan over log k, then golden section around the best cell
  const double lo = std::log(0.02);
  const double hi = std::log(50.0);
  const int cells = 200;
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int c = 0; c <= cells; ++c) {
    const double v = exceedance_profile(r, u, std::exp(lo + (hi - lo) * c / cells));
    if (v > best_value) {
      best_value = v;
      best = c;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / cells;
  double b = lo + (hi - lo) * std::min(cells, best + 1) / cells;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double c1 = b - phi * (b - a);
    const double c2 = a + phi * (b - a);
    if (exceedance_profile(r, u, std::exp(c1)) < exceedance_profile(r, u, std::exp(c2))) {
      a = c1;
    } else {
      b = c2;
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace

TailFit fit_weibull_shape(std::span<const double> samples, double tail_fraction, double clip_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0) || !(clip_fraction >= 0.0 && clip_fraction < tail_fraction)) {
    throw ValidationError("fit_weibull_shape: need 0 <= clip_fraction < tail_fraction < 1");
  }
  if (samples.size() < 100) throw ValidationError("fit_weibull_shape: need at least 100 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw ValidationError("fit_weibull_shape: samples must be finite");
  }
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double nd = static_cast<double>(n);

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double surv = static_cast<double>(n - j) / nd;
    if (surv >= clip_fraction && surv <= tail_fraction && surv > 0.0) {
      if (!(sorted[i] > 0.0)) throw ValidationError("fit_weibull_shape: tail values must be positive");
      xs.push_back(std::log(sorted[i]));
      ys.push_back(std::log(-std::log(surv)));
    }
    i = j;
  }
  if (xs.size() < 10) {
    std::ostringstream os;
    os << "fit_weibull_shape: only " << xs.size() << " distinct tail points (need 10)";
    throw NumericFailure(os.str());
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - intercept - slope * xs[i];
    rss += e * e;
  }

  TailFit fit;
  fit.shape = slope;
  fit.scale = std::exp(-intercept / slope);
  fit.tail_fraction = tail_fraction;
  fit.clip_fraction = clip_fraction;
  fit.shape_se = std::sqrt(rss / (m - 2.0) / sxx);
  fit.samples = n;
  fit.tail_points = xs.size();

  const auto cut = static_cast<std::size_t>(std::floor(nd * (1.0 - tail_fraction)));
  const double threshold = sorted[cut == 0 ? 0 : cut - 1];
  const auto first = std::upper_bound(sorted.begin(), sorted.end(), threshold);
  fit.mle_shape = exceedance_mle(std::span<const double>(&*first, static_cast<std::size_t>(sorted.end() - first)),
                                 threshold);
  if (!(fit.shape > 0.0) || !std::isfinite(fit.shape_se)) {
    throw NumericFailure("fit_weibull_shape: non-positive or undefined slope");
  }
  return fit;
}

std::vector<SurvivalRow> survival_table(std::span<const double> samples, std::span<const double> levels) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<SurvivalRow> rows;
  rows.reserve(levels.size());
  const double n = static_cast<double>(sorted.size());
  for (double r : levels) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), r);
    rows.push_back({r, sorted.empty() ? 0.0 : static_cast<double>(above) / n});
  }
  return rows;
}

std::vector<double> quantile_levels(std::span<const double> samples, std::span<const double> probs) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  if (sorted.empty()) return out;
  for (double prob : probs) {
    const double pos = std::clamp(prob, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
    out.push_back(sorted[static_cast<std::size_t>(std::floor(pos))]);
  }
  return out;
}

TransferConstants transfer_constants(const TrialConfig& config, TransferMap map) {
  TrialConfig checked = config;
  checked.statistic = Statistic::NAlphaY;  // needs the planar driver
  checked.validate();
  const GaussianSampler sampler(config.model, config.model.uniform_grid(config.grid));
  const std::vector<double> grid(sampler.grid().begin(), sampler.grid().end());
  std::vector<double> count_ratio(config.trials, 0.0);
  std::vector<double> log_count_ratio(config.trials, 0.0);
  std::vector<double> growth_ratio(config.trials, 0.0);
  std::vector<char> ok(config.trials, 1);
  parallel_for(
      config.trials,
      [&](std::size_t i) {
        const Level2RoughPath x = lift_piecewise_linear(grid, sampler.sample(config.seed, config.first_trial + i));
        const double nx = static_cast<double>(count_of(x, config)) + 1.0;
        try {
          RdeSolution y;
          switch (map) {
            case TransferMap::NonlinearRde:
              y = solve_rde(reference_vector_fields(), x, reference_initial_state());
              break;
            case TransferMap::RoughIntegral:
              y = rough_integral(reference_one_form(), x);
              break;
            case TransferMap::LinearRde:
              y = solve_linear_rde(reference_linear_field(), x, reference_initial_state());
              break;
          }
          const double ny = static_cast<double>(count_of(*y.lift, config)) + 1.0;
          count_ratio[i] = ny / nx;
          log_count_ratio[i] = std::log(ny) / nx;
          growth_ratio[i] = std::log1p(sup_norm(y.path)) / nx;
        } catch (const NumericFailure&) {
          ok[i] = 0;
        }
      },
      config.workers);
  TransferConstants out;
  for (std::size_t i = 0; i < config.trials; ++i) {
    if (!ok[i]) {
      ++out.excluded;
      continue;
    }
    ++out.trials;
    out.count_ratio = std::max(out.count_ratio, count_ratio[i]);
    out.log_count_ratio = std::max(out.log_count_ratio, log_count_ratio[i]);
    out.growth_ratio = std::max(out.growth_ratio, growth_ratio[i]);
  }
  return out;
}

}  // namespace roughnum
