#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace roughnum {

/// Element of the step-2 nilpotent group over R^d: a first level
/// increment and a d x d second level (iterated integrals).
struct GroupElement {
  Eigen::VectorXd level1;
  Eigen::MatrixXd level2;

  [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(level1.size()); }

  [[nodiscard]] static GroupElement identity(std::size_t d);
  /// exp of a first-level vector: (v, v ⊗ v / 2).
  [[nodiscard]] static GroupElement from_increment(const Eigen::VectorXd& v);
};

/// Group product (a¹ + b¹, a² + b² + a¹ ⊗ b¹).
[[nodiscard]] GroupElement chen_combine(const GroupElement& a, const GroupElement& b);

/// δ_λ: (λ g¹, λ² g²).
[[nodiscard]] GroupElement dilate(const GroupElement& g, double lambda);

[[nodiscard]] GroupElement inverse(const GroupElement& g);

enum class HomNormKind {
  /// |g¹| and |g²|^{1/2} kept apart; as a scalar their sum is returned.
  LevelSplit,
  /// max(|g¹|, (2 |Anti g²|)^{1/2}).
  HomogeneousMax,
};

struct LevelNorms {
  double first = 0.0;   // |g¹| (Euclidean)
  double second = 0.0;  // |g²|^{1/2} (Frobenius)
};

[[nodiscard]] LevelNorms level_norms(const GroupElement& g);
[[nodiscard]] double homogeneous_norm(const GroupElement& g, HomNormKind kind);

/// Antisymmetric part (g² - g²ᵀ) / 2.
[[nodiscard]] Eigen::MatrixXd antisymmetric_part(const Eigen::MatrixXd& m);

/// max |Sym(g²) - g¹ ⊗ g¹ / 2|, zero for geometric elements.
[[nodiscard]] double geometric_defect(const GroupElement& g);

}  // namespace roughnum
