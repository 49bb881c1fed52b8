#include "roughnum/rough_path.hpp"

#include <algorithm>
#include <random>

#include "roughnum/errors.hpp"

namespace roughnum {

Level2RoughPath Level2RoughPath::from_steps(std::vector<double> grid, std::span<const GroupElement> steps,
                                            const Eigen::VectorXd& origin) {
  require_strictly_increasing(grid, "Level2RoughPath");
  if (steps.size() + 1 != grid.size()) {
    throw ValidationError("Level2RoughPath: need exactly one step per grid interval");
  }
  const auto d = static_cast<std::size_t>(origin.size());
  Level2RoughPath x;
  x.grid_ = std::move(grid);
  x.d_ = d;
  x.origin_ = origin;
  const std::size_t n = x.grid_.size();
  x.level1_.assign(n * d, 0.0);
  x.level2_.assign(n * d * d, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const GroupElement& g = steps[i];
    if (g.dimension() != d || static_cast<std::size_t>(g.level2.rows()) != d ||
        static_cast<std::size_t>(g.level2.cols()) != d) {
      throw ValidationError("Level2RoughPath: step dimension mismatch");
    }
    const double* r1 = &x.level1_[i * d];
    double* r1n = &x.level1_[(i + 1) * d];
    const double* r2 = &x.level2_[i * d * d];
    double* r2n = &x.level2_[(i + 1) * d * d];
    for (std::size_t a = 0; a < d; ++a) {
      r1n[a] = r1[a] + g.level1[static_cast<Eigen::Index>(a)];
      for (std::size_t b = 0; b < d; ++b) {
        r2n[a * d + b] = r2[a * d + b] + g.level2(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +
                         r1[a] * g.level1[static_cast<Eigen::Index>(b)];
      }
    }
  }
  return x;
}

Eigen::VectorXd Level2RoughPath::position(std::size_t i) const {
  Eigen::VectorXd v = origin_;
  for (std::size_t a = 0; a < d_; ++a) {
    v[static_cast<Eigen::Index>(a)] += level1_[i * d_ + a];
  }
  return v;
}

GroupElement Level2RoughPath::increment(std::size_t i, std::size_t j) const {
  auto g = GroupElement::identity(d_);
  for (std::size_t a = 0; a < d_; ++a) {
    g.level1[static_cast<Eigen::Index>(a)] = running1(j, a) - running1(i, a);
  }
  for (std::size_t a = 0; a < d_; ++a) {
    for (std::size_t b = 0; b < d_; ++b) {
      g.level2(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          running2(j, a, b) - running2(i, a, b) - running1(i, a) * g.level1[static_cast<Eigen::Index>(b)];
    }
  }
  return g;
}

Level2RoughPath Level2RoughPath::dilated(double lambda) const {
  Level2RoughPath x = *this;
  for (double& v : x.level1_) v *= lambda;
  for (double& v : x.level2_) v *= lambda * lambda;
  return x;
}

Level2RoughPath Level2RoughPath::restricted(Window window) const {
  if (window.first >= window.last || window.last >= points()) {
    throw ValidationError("Level2RoughPath::restricted: invalid window");
  }
  std::vector<GroupElement> steps;
  steps.reserve(window.last - window.first);
  for (std::size_t i = window.first; i < window.last; ++i) {
    steps.push_back(step(i));
  }
  std::vector<double> grid(grid_.begin() + static_cast<std::ptrdiff_t>(window.first),
                           grid_.begin() + static_cast<std::ptrdiff_t>(window.last) + 1);
  return from_steps(std::move(grid), steps, position(window.first));
}

Level2RoughPath lift_piecewise_linear(std::vector<double> grid, const Eigen::MatrixXd& samples) {
  if (samples.rows() < 2) {
    throw ValidationError("lift_piecewise_linear: need at least two samples");
  }
  if (static_cast<std::size_t>(samples.rows()) != grid.size()) {
    throw ValidationError("lift_piecewise_linear: one sample row per grid point required");
  }
  std::vector<GroupElement> steps;
  steps.reserve(grid.size() - 1);
  for (Eigen::Index i = 0; i + 1 < samples.rows(); ++i) {
    const Eigen::VectorXd delta = (samples.row(i + 1) - samples.row(i)).transpose();
    steps.push_back(GroupElement::from_increment(delta));
  }
  return Level2RoughPath::from_steps(std::move(grid), steps, samples.row(0).transpose());
}

AlgebraResiduals algebra_residuals(const Level2RoughPath& x) {
  AlgebraResiduals r;
  const std::size_t n = x.points();
  auto chen_at = [&](std::size_t i, std::size_t j, std::size_t k) {
    const auto ij = x.increment(i, j);
    const auto jk = x.increment(j, k);
    const auto ik = x.increment(i, k);
    const double res = (ik.level2 - ij.level2 - jk.level2 - ij.level1 * jk.level1.transpose()).cwiseAbs().maxCoeff();
    r.chen = std::max(r.chen, res);
  };
  if (n <= 48) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        r.geometric = std::max(r.geometric, geometric_defect(x.increment(i, j)));
        for (std::size_t k = j + 1; k < n; ++k) {
          chen_at(i, j, k);
        }
      }
    }
    return r;
  }
  std::mt19937_64 gen(0xc4e11ULL);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      r.geometric = std::max(r.geometric, geometric_defect(x.increment(i, k)));
      if (k >= i + 2) {
        std::uniform_int_distribution<std::size_t> mid(i + 1, k - 1);
        chen_at(i, mid(gen), k);
      }
    }
  }
  return r;
}

}  // namespace roughnum
