#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "roughnum/rough_path.hpp"

namespace roughnum {

/// φ: R^in -> L(R^in, R^out) with its derivative.
///
/// value(x) is out x in; derivative(x)[j] is ∂_j value(x) (out x in). When
/// `derivative` is empty, central differences with step 1e-6 are used.
struct OneForm {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> value;
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> derivative;
  double lip_bound = 0.0;

  [[nodiscard]] std::vector<Eigen::MatrixXd> derivative_at(const Eigen::VectorXd& x) const;
};

/// Vector fields V_1..V_d on R^e packed as V(y) ∈ L(R^d, R^e) (e x d).
///
/// derivative(y)[m] = ∂_{y_m} V(y); second_derivative(y)[c][m] = ∂_{y_c} ∂_{y_m} V(y).
/// Missing derivatives fall back to central differences (step 1e-6).
struct VectorFieldFamily {
  std::size_t state_dim = 0;
  std::size_t driver_dim = 0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> value;
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> derivative;
  std::function<std::vector<std::vector<Eigen::MatrixXd>>(const Eigen::VectorXd&)> second_derivative;
  double lip_bound = 0.0;

  [[nodiscard]] std::vector<Eigen::MatrixXd> derivative_at(const Eigen::VectorXd& y) const;
  [[nodiscard]] std::vector<std::vector<Eigen::MatrixXd>> second_derivative_at(const Eigen::VectorXd& y) const;
};

/// V_i(z) = A_i z + b_i.
struct LinearField {
  std::vector<Eigen::MatrixXd> a;
  std::vector<Eigen::VectorXd> b;

  [[nodiscard]] std::size_t state_dim() const noexcept { return a.empty() ? 0 : static_cast<std::size_t>(a[0].rows()); }
  [[nodiscard]] std::size_t driver_dim() const noexcept { return a.size(); }
  /// max_i (|A_i|_F + |b_i|).
  [[nodiscard]] double nu() const;
  void validate() const;
  [[nodiscard]] VectorFieldFamily as_vector_fields() const;
};

struct RdeSolution {
  std::vector<double> grid;
  Eigen::MatrixXd path;  // rows = grid points
  std::optional<Level2RoughPath> lift;
};

struct SolveOptions {
  bool lift_output = true;
  double divergence_bound = 1e12;
};

/// Central-difference Jacobian of a matrix-valued map: entry m is ∂_m f(at).
[[nodiscard]] std::vector<Eigen::MatrixXd> finite_difference_derivative(
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& at, double step = 1e-6);

/// Largest relative error between the supplied derivative and central
/// differences over the probe points.
[[nodiscard]] double derivative_consistency(const OneForm& phi, std::span<const Eigen::VectorXd> probes,
                                            double step = 1e-6);
[[nodiscard]] double derivative_consistency(const VectorFieldFamily& v, std::span<const Eigen::VectorXd> probes,
                                            double step = 1e-6);

/// ∫ φ(x) dx over the window with compensated steps
///   z¹ = φ(x_i) g¹ + Dφ(x_i) g²;
/// the output's second level is Anti(φ g² φᵀ) + z¹ ⊗ z¹ / 2 per step,
/// Chen-combined. The first level starts at 0.
[[nodiscard]] RdeSolution rough_integral(const OneForm& phi, const Level2RoughPath& x, Window window,
                                         bool lift_output = true);
[[nodiscard]] RdeSolution rough_integral(const OneForm& phi, const Level2RoughPath& x, bool lift_output = true);

/// Second-order Euler scheme y_{i+1} = y_i + V(y_i) g¹ + Σ_{i,j} (DV_j V_i)(y_i) g²_{ij}.
/// Throws NumericFailure once |y| exceeds options.divergence_bound.
[[nodiscard]] RdeSolution solve_rde(const VectorFieldFamily& v, const Level2RoughPath& x, const Eigen::VectorXd& y0,
                                    const SolveOptions& options = {});

[[nodiscard]] RdeSolution solve_linear_rde(const LinearField& field, const Level2RoughPath& x,
                                           const Eigen::VectorXd& y0, const SolveOptions& options = {});

/// Derivative of the flow y0 -> y_t. Computed as
///   z = (x, y) solving dz = (Id, V)(z) dx, lifted;
///   M = ∫ φ(z) dz with φ(x, y)(x', y') = DV(y)(x');
///   dJ = dM J, J_0 = Id.
/// The path holds J row-major flattened (row a*e + b is J(a, b)).
[[nodiscard]] RdeSolution jacobian_flow(const VectorFieldFamily& v, const Level2RoughPath& x,
                                        const Eigen::VectorXd& y0);

/// J(t_i) from a jacobian_flow solution.
[[nodiscard]] Eigen::MatrixXd jacobian_at(const RdeSolution& flow, std::size_t i);

}  // namespace roughnum
