#include "roughnum/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "roughnum/control.hpp"
#include "roughnum/errors.hpp"
#include "roughnum/random.hpp"

namespace roughnum {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_uniform(std::span<const double> grid) {
  if (grid.size() < 3) {
    return true;
  }
  const double h = grid[1] - grid[0];
  const double scale = std::max(std::abs(grid.front()), std::abs(grid.back())) + std::abs(h);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (std::abs((grid[i + 1] - grid[i]) - h) > 1e-12 * scale) {
      return false;
    }
  }
  return true;
}

}  // namespace

GaussianModel GaussianModel::brownian(std::size_t dimension, double horizon) {
  GaussianModel m;
  m.kind = GaussianKind::Brownian;
  m.dimension = dimension;
  m.horizon = horizon;
  return m;
}

GaussianModel GaussianModel::fbm(double hurst, std::size_t dimension, double horizon) {
  GaussianModel m;
  m.kind = GaussianKind::FractionalBrownian;
  m.hurst = hurst;
  m.dimension = dimension;
  m.horizon = horizon;
  return m;
}

GaussianModel GaussianModel::stochastic_heat(double epsilon, std::size_t dimension, std::size_t truncation) {
  GaussianModel m;
  m.kind = GaussianKind::StochasticHeat;
  m.epsilon = epsilon;
  m.dimension = dimension;
  m.truncation = truncation;
  m.horizon = 2.0 * kPi;
  return m;
}

double GaussianModel::domain_start() const noexcept { return kind == GaussianKind::StochasticHeat ? -kPi : 0.0; }

double GaussianModel::domain_end() const noexcept { return kind == GaussianKind::StochasticHeat ? kPi : horizon; }

std::vector<double> GaussianModel::uniform_grid(std::size_t intervals) const {
  if (intervals < 1) {
    throw ValidationError("uniform_grid: need at least one interval");
  }
  const double a = domain_start();
  const double b = domain_end();
  std::vector<double> grid(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    grid[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(intervals);
  }
  grid.back() = b;
  return grid;
}

void GaussianModel::validate() const {
  if (dimension < 1) {
    throw ValidationError("GaussianModel: dimension must be at least 1");
  }
  switch (kind) {
    case GaussianKind::Brownian:
      break;
    case GaussianKind::FractionalBrownian:
      if (!(hurst > 1.0 / 3.0 && hurst < 1.0)) {
        throw ValidationError("GaussianModel: hurst must lie in (1/3, 1)");
      }
      break;
    case GaussianKind::StochasticHeat:
      if (!(epsilon >= 0.0) || truncation < 1) {
        throw ValidationError("GaussianModel: epsilon must be >= 0 and truncation >= 1");
      }
      return;
  }
  if (!(horizon > 0.0)) {
    throw ValidationError("GaussianModel: horizon must be positive");
  }
}

std::string to_string(GaussianKind kind) {
  switch (kind) {
    case GaussianKind::Brownian:
      return "brownian";
    case GaussianKind::FractionalBrownian:
      return "fbm";
    case GaussianKind::StochasticHeat:
      return "she";
  }
  return "unknown";
}

double she_kernel_series(double epsilon, double x, std::size_t truncation) {
  const double e2 = epsilon * epsilon;
  double sum = 0.0;
  // Smallest terms first.
  for (std::size_t k = truncation; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    const double k2 = kd * kd;
    sum += std::cos(kd * x) / (1.0 + k2 + e2 * k2 * k2);
  }
  return 1.0 + 2.0 * sum;
}

double she_series_tail_bound(std::size_t truncation) noexcept { return 2.0 / static_cast<double>(truncation); }

double she_partial_kernel_series(double epsilon, double x, std::size_t truncation) {
  const double e2 = epsilon * epsilon;
  double sum = 0.0;
  for (std::size_t k = truncation; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    sum += std::cos(kd * x) / (1.0 + e2 * kd * kd);
  }
  return 1.0 + 2.0 * sum;
}

double she_kernel_closed_reference(double epsilon, double x) {
  if (!(epsilon > 0.0)) {
    throw ValidationError("she_kernel_closed_reference: epsilon must be positive");
  }
  const double ax = std::abs(x);
  // cosh((|x|-π)/ε) / sinh(π/ε) rewritten without overflow for small ε.
  const double num = std::exp((ax - 2.0 * kPi) / epsilon) + std::exp(-ax / epsilon);
  const double den = 1.0 - std::exp(-2.0 * kPi / epsilon);
  return kPi / epsilon * num / den;
}

double she_partial_tail_bound(double epsilon, std::size_t truncation) noexcept {
  return 2.0 / (epsilon * epsilon * static_cast<double>(truncation));
}

double covariance(const GaussianModel& model, double s, double t) {
  switch (model.kind) {
    case GaussianKind::Brownian:
      return std::min(s, t);
    case GaussianKind::FractionalBrownian: {
      const double h2 = 2.0 * model.hurst;
      return 0.5 * (std::pow(std::abs(s), h2) + std::pow(std::abs(t), h2) - std::pow(std::abs(s - t), h2));
    }
    case GaussianKind::StochasticHeat:
      return she_kernel_series(model.epsilon, s - t, model.truncation);
  }
  return 0.0;
}

Eigen::MatrixXd covariance_matrix(const GaussianModel& model, std::span<const double> grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd r(n, n);
  if (model.kind == GaussianKind::StochasticHeat && is_uniform(grid)) {
    const double h = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
    std::vector<double> lag(grid.size());
    for (std::size_t m = 0; m < grid.size(); ++m) {
      lag[m] = she_kernel_series(model.epsilon, static_cast<double>(m) * h, model.truncation);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        r(i, j) = lag[static_cast<std::size_t>(std::abs(i - j))];
      }
    }
    return r;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      r(i, j) = covariance(model, grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]);
      r(j, i) = r(i, j);
    }
  }
  return r;
}

GaussianSampler::GaussianSampler(const GaussianModel& model, std::vector<double> grid)
    : model_(model), grid_(std::move(grid)) {
  model_.validate();
  require_strictly_increasing(grid_, "GaussianSampler");
  if (grid_.front() < model_.domain_start() - 1e-12 || grid_.back() > model_.domain_end() + 1e-12) {
    throw ValidationError("GaussianSampler: grid leaves the model's domain");
  }
  const Eigen::MatrixXd full = covariance_matrix(model_, grid_);
  for (Eigen::Index i = 0; i < full.rows(); ++i) {
    if (full(i, i) > 0.0) {
      active_.push_back(i);
    }
  }
  const auto m = static_cast<Eigen::Index>(active_.size());
  if (m == 0) {
    factor_.resize(0, 0);
    return;
  }
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      gram(a, b) = full(active_[static_cast<std::size_t>(a)], active_[static_cast<std::size_t>(b)]);
    }
  }
  const double mean_var = gram.diagonal().mean();
  const double levels[] = {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8};
  for (double level : levels) {
    Eigen::MatrixXd jittered = gram;
    jittered.diagonal().array() += level * mean_var;
    Eigen::LLT<Eigen::MatrixXd> llt(jittered);
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
      jitter_ = level * mean_var;
      return;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  std::ostringstream os;
  os << "GaussianSampler: Gram matrix not factorizable after jitter 1e-8; smallest eigenvalue "
     << eig.eigenvalues().minCoeff();
  throw NumericFailure(os.str());
}

Eigen::MatrixXd GaussianSampler::sample(std::uint64_t seed, std::uint64_t trial) const {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  const auto d = static_cast<Eigen::Index>(model_.dimension);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, d);
  const Eigen::Index m = factor_.rows();
  Eigen::VectorXd z(m);
  for (Eigen::Index c = 0; c < d; ++c) {
    CounterRng rng(stream_key(seed, trial, static_cast<std::uint64_t>(c)));
    for (Eigen::Index a = 0; a < m; ++a) {
      z[a] = rng.normal();
    }
    const Eigen::VectorXd values = factor_.triangularView<Eigen::Lower>() * z;
    for (Eigen::Index a = 0; a < m; ++a) {
      out(active_[static_cast<std::size_t>(a)], c) = values[a];
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> sample_paths(const GaussianModel& model, std::vector<double> grid, std::size_t count,
                                          std::uint64_t seed) {
  if (count < 1) {
    throw ValidationError("sample_paths: count must be at least 1");
  }
  const GaussianSampler sampler(model, std::move(grid));
  std::vector<Eigen::MatrixXd> paths;
  paths.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    paths.push_back(sampler.sample(seed, t));
  }
  return paths;
}

}  // namespace roughnum
