#include "roughnum/group.hpp"

#include <algorithm>
#include <cmath>

#include "roughnum/errors.hpp"

namespace roughnum {

GroupElement GroupElement::identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return {Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
}

GroupElement GroupElement::from_increment(const Eigen::VectorXd& v) { return {v, 0.5 * v * v.transpose()}; }

GroupElement chen_combine(const GroupElement& a, const GroupElement& b) {
  if (a.level1.size() != b.level1.size() || a.level2.rows() != b.level2.rows()) {
    throw ValidationError("chen_combine: dimension mismatch");
  }
  return {a.level1 + b.level1, a.level2 + b.level2 + a.level1 * b.level1.transpose()};
}

GroupElement dilate(const GroupElement& g, double lambda) { return {lambda * g.level1, lambda * lambda * g.level2}; }

GroupElement inverse(const GroupElement& g) {
  return {-g.level1, -g.level2 + g.level1 * g.level1.transpose()};
}

Eigen::MatrixXd antisymmetric_part(const Eigen::MatrixXd& m) { return 0.5 * (m - m.transpose()); }

LevelNorms level_norms(const GroupElement& g) { return {g.level1.norm(), std::sqrt(g.level2.norm())}; }

double homogeneous_norm(const GroupElement& g, HomNormKind kind) {
  switch (kind) {
    case HomNormKind::LevelSplit: {
      const auto n = level_norms(g);
      return n.first + n.second;
    }
    case HomNormKind::HomogeneousMax:
      return std::max(g.level1.norm(), std::sqrt(2.0 * antisymmetric_part(g.level2).norm()));
  }
  return 0.0;
}

double geometric_defect(const GroupElement& g) {
  const Eigen::MatrixXd sym = 0.5 * (g.level2 + g.level2.transpose());
  return (sym - 0.5 * g.level1 * g.level1.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace roughnum
