#include "roughnum/pvariation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "roughnum/errors.hpp"

namespace roughnum {

namespace {

// Per-block quantities read straight from the running sums of a path.
class BlockKernel {
 public:
  BlockKernel(const Level2RoughPath& x, double p, PVarMode mode) : x_(x), p_(p), mode_(mode), d_(x.dimension()) {}

  [[nodiscard]] PVarMode mode() const noexcept { return mode_; }

  [[nodiscard]] double level1_power(std::size_t v, std::size_t u) const noexcept {
    return std::pow(level1_sq(v, u), 0.5 * p_);
  }

  [[nodiscard]] double level2_power(std::size_t v, std::size_t u) const noexcept {
    double sq = 0.0;
    for (std::size_t a = 0; a < d_; ++a) {
      const double xa = x_.running1(v, a);
      for (std::size_t b = 0; b < d_; ++b) {
        const double inc = x_.running2(u, a, b) - x_.running2(v, a, b) - xa * (x_.running1(u, b) - x_.running1(v, b));
        sq += inc * inc;
      }
    }
    return std::pow(sq, 0.25 * p_);
  }

  [[nodiscard]] double homogeneous_power(std::size_t v, std::size_t u) const noexcept {
    // Anti(x²_{vu}) = Anti(S_u - S_v) - Anti(x_v ⊗ x_u); the symmetric parts drop out.
    double anti_sq = 0.0;
    for (std::size_t a = 0; a < d_; ++a) {
      for (std::size_t b = a + 1; b < d_; ++b) {
        const double su = 0.5 * (x_.running2(u, a, b) - x_.running2(u, b, a));
        const double sv = 0.5 * (x_.running2(v, a, b) - x_.running2(v, b, a));
        const double cross = 0.5 * (x_.running1(v, a) * x_.running1(u, b) - x_.running1(v, b) * x_.running1(u, a));
        const double entry = su - sv - cross;
        anti_sq += 2.0 * entry * entry;  // (a,b) and (b,a)
      }
    }
    const double area = 2.0 * std::sqrt(anti_sq);
    return std::pow(std::max(level1_sq(v, u), area), 0.5 * p_);
  }

 private:
  [[nodiscard]] double level1_sq(std::size_t v, std::size_t u) const noexcept {
    double sq = 0.0;
    for (std::size_t a = 0; a < d_; ++a) {
      const double inc = x_.running1(u, a) - x_.running1(v, a);
      sq += inc * inc;
    }
    return sq;
  }

  const Level2RoughPath& x_;
  double p_;
  PVarMode mode_;
  std::size_t d_;
};

// One or two running dynamic programs anchored at `start`:
//   best[u] = max_{start <= v < u} best[v] + f(v, u).
class DissectionDp {
 public:
  DissectionDp(const BlockKernel& kernel, std::size_t start) : kernel_(kernel), start_(start) {
    first_.push_back(0.0);
    if (kernel_.mode() == PVarMode::LevelSplit) {
      second_.push_back(0.0);
    }
  }

  double extend() {
    const std::size_t u = start_ + first_.size();
    double best1 = 0.0;
    double best2 = 0.0;
    for (std::size_t k = 0; k < first_.size(); ++k) {
      const std::size_t v = start_ + k;
      switch (kernel_.mode()) {
        case PVarMode::Level1:
          best1 = std::max(best1, first_[k] + kernel_.level1_power(v, u));
          break;
        case PVarMode::Level2:
          best1 = std::max(best1, first_[k] + kernel_.level2_power(v, u));
          break;
        case PVarMode::Homogeneous:
          best1 = std::max(best1, first_[k] + kernel_.homogeneous_power(v, u));
          break;
        case PVarMode::LevelSplit:
          best1 = std::max(best1, first_[k] + kernel_.level1_power(v, u));
          best2 = std::max(best2, second_[k] + kernel_.level2_power(v, u));
          break;
      }
    }
    first_.push_back(best1);
    if (kernel_.mode() == PVarMode::LevelSplit) {
      second_.push_back(best2);
    }
    return best1 + best2;
  }

 private:
  const BlockKernel& kernel_;
  std::size_t start_;
  std::vector<double> first_;
  std::vector<double> second_;
};

struct SharedPath {
  SharedPath(Level2RoughPath path, double p, PVarMode mode) : x(std::move(path)), kernel(x, p, mode) {}
  Level2RoughPath x;
  BlockKernel kernel;
};

class RoughPathScan final : public ControlScan {
 public:
  RoughPathScan(std::shared_ptr<const SharedPath> shared, std::size_t start)
      : shared_(std::move(shared)), dp_(shared_->kernel, start) {}
  double advance() override { return dp_.extend(); }

 private:
  std::shared_ptr<const SharedPath> shared_;
  DissectionDp dp_;
};

class RoughPathSource final : public ControlSource {
 public:
  explicit RoughPathSource(std::shared_ptr<const SharedPath> shared) : shared_(std::move(shared)) {}

  double value(std::size_t i, std::size_t j) const override {
    DissectionDp dp(shared_->kernel, i);
    double v = 0.0;
    for (std::size_t u = i + 1; u <= j; ++u) {
      v = dp.extend();
    }
    return v;
  }

  std::unique_ptr<ControlScan> scan_from(std::size_t start) const override {
    return std::make_unique<RoughPathScan>(shared_, start);
  }

 private:
  std::shared_ptr<const SharedPath> shared_;
};

double root_for(PVarMode mode, double p) { return mode == PVarMode::Level2 ? 2.0 / p : 1.0 / p; }

}  // namespace

void require_rough_exponent(double p) {
  if (!(p > 2.0 && p < 3.0)) {
    std::ostringstream os;
    os << "p = " << p << " outside the supported range (2,3)";
    throw ValidationError(os.str());
  }
}

double p_variation_power(const Level2RoughPath& x, double p, Window window, PVarMode mode) {
  require_rough_exponent(p);
  if (window.first >= window.last || window.last >= x.points()) {
    throw ValidationError("p_variation: invalid window");
  }
  const BlockKernel kernel(x, p, mode);
  DissectionDp dp(kernel, window.first);
  double v = 0.0;
  for (std::size_t u = window.first + 1; u <= window.last; ++u) {
    v = dp.extend();
  }
  return v;
}

double p_variation(const Level2RoughPath& x, double p, Window window, PVarMode mode) {
  return std::pow(p_variation_power(x, p, window, mode), root_for(mode, p));
}

double p_variation(const Level2RoughPath& x, double p, PVarMode mode) {
  return p_variation(x, p, x.full_window(), mode);
}

double path_p_variation(const Eigen::MatrixXd& path, double p) {
  if (!(p >= 1.0)) {
    throw ValidationError("path_p_variation: p must be at least 1");
  }
  const Eigen::Index n = path.rows();
  if (n < 2) {
    return 0.0;
  }
  std::vector<double> best(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index u = 1; u < n; ++u) {
    double b = 0.0;
    for (Eigen::Index v = 0; v < u; ++v) {
      b = std::max(b, best[static_cast<std::size_t>(v)] + std::pow((path.row(u) - path.row(v)).squaredNorm(), 0.5 * p));
    }
    best[static_cast<std::size_t>(u)] = b;
  }
  return std::pow(best.back(), 1.0 / p);
}

Control control_from_rough_path(const Level2RoughPath& x, double p, PVarMode mode) {
  require_rough_exponent(p);
  auto shared = std::make_shared<const SharedPath>(x, p, mode);
  std::vector<double> grid(x.grid().begin(), x.grid().end());
  return Control(std::move(grid), std::make_shared<RoughPathSource>(std::move(shared)));
}

}  // namespace roughnum
