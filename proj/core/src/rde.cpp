#include "roughnum/rde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "roughnum/errors.hpp"

namespace roughnum {

namespace {

constexpr double kFdStep = 1e-6;

void guard(const Eigen::VectorXd& y, double bound, std::size_t step) {
  const double size = y.norm();
  if (!std::isfinite(size) || size > bound) {
    std::ostringstream os;
    os << "solver diverged at step " << step << " (|y| = " << size << ")";
    throw NumericFailure(os.str());
  }
}

// Step-local output element: first level `dy`, second level dy⊗dy/2 plus
// the antisymmetric part of F g² Fᵀ.
GroupElement output_step(const Eigen::VectorXd& dy, const Eigen::MatrixXd& f, const Eigen::MatrixXd& g2) {
  GroupElement g = GroupElement::from_increment(dy);
  g.level2 += antisymmetric_part(f * g2 * f.transpose());
  return g;
}

std::vector<double> window_grid(const Level2RoughPath& x, Window window) {
  return {x.grid().begin() + static_cast<std::ptrdiff_t>(window.first),
          x.grid().begin() + static_cast<std::ptrdiff_t>(window.last) + 1};
}

RdeSolution finish(std::vector<double> grid, Eigen::MatrixXd path, std::vector<GroupElement>&& steps, bool lift) {
  RdeSolution sol;
  if (lift) {
    sol.lift = Level2RoughPath::from_steps(grid, steps, path.row(0).transpose());
  }
  sol.grid = std::move(grid);
  sol.path = std::move(path);
  return sol;
}

}  // namespace

std::vector<Eigen::MatrixXd> finite_difference_derivative(
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& at, double step) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(at.size()));
  Eigen::VectorXd probe = at;
  for (Eigen::Index m = 0; m < at.size(); ++m) {
    probe[m] = at[m] + step;
    const Eigen::MatrixXd plus = f(probe);
    probe[m] = at[m] - step;
    const Eigen::MatrixXd minus = f(probe);
    probe[m] = at[m];
    out.push_back((plus - minus) / (2.0 * step));
  }
  return out;
}

std::vector<Eigen::MatrixXd> OneForm::derivative_at(const Eigen::VectorXd& x) const {
  return derivative ? derivative(x) : finite_difference_derivative(value, x, kFdStep);
}

std::vector<Eigen::MatrixXd> VectorFieldFamily::derivative_at(const Eigen::VectorXd& y) const {
  return derivative ? derivative(y) : finite_difference_derivative(value, y, kFdStep);
}

std::vector<std::vector<Eigen::MatrixXd>> VectorFieldFamily::second_derivative_at(const Eigen::VectorXd& y) const {
  if (second_derivative) {
    return second_derivative(y);
  }
  const auto e = static_cast<std::size_t>(y.size());
  std::vector<std::vector<Eigen::MatrixXd>> out(e);
  Eigen::VectorXd probe = y;
  for (std::size_t c = 0; c < e; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    probe[ci] = y[ci] + kFdStep;
    const auto plus = derivative_at(probe);
    probe[ci] = y[ci] - kFdStep;
    const auto minus = derivative_at(probe);
    probe[ci] = y[ci];
    for (std::size_t m = 0; m < e; ++m) {
      out[c].push_back((plus[m] - minus[m]) / (2.0 * kFdStep));
    }
  }
  return out;
}

namespace {

double relative_gap(const std::vector<Eigen::MatrixXd>& supplied, const std::vector<Eigen::MatrixXd>& numeric) {
  double worst = 0.0;
  for (std::size_t m = 0; m < supplied.size(); ++m) {
    const double scale = std::max(1.0, numeric[m].cwiseAbs().maxCoeff());
    worst = std::max(worst, (supplied[m] - numeric[m]).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace

double derivative_consistency(const OneForm& phi, std::span<const Eigen::VectorXd> probes, double step) {
  double worst = 0.0;
  for (const auto& x : probes) {
    worst = std::max(worst, relative_gap(phi.derivative_at(x), finite_difference_derivative(phi.value, x, step)));
  }
  return worst;
}

double derivative_consistency(const VectorFieldFamily& v, std::span<const Eigen::VectorXd> probes, double step) {
  double worst = 0.0;
  for (const auto& y : probes) {
    worst = std::max(worst, relative_gap(v.derivative_at(y), finite_difference_derivative(v.value, y, step)));
  }
  return worst;
}

double LinearField::nu() const {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    best = std::max(best, a[i].norm() + b[i].norm());
  }
  return best;
}

void LinearField::validate() const {
  if (a.empty() || a.size() != b.size()) {
    throw ValidationError("LinearField: need one offset per matrix and at least one field");
  }
  const Eigen::Index e = a[0].rows();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != e || a[i].cols() != e || b[i].size() != e) {
      throw ValidationError("LinearField: matrices must be e x e and offsets length e");
    }
  }
}

VectorFieldFamily LinearField::as_vector_fields() const {
  validate();
  VectorFieldFamily v;
  v.state_dim = state_dim();
  v.driver_dim = driver_dim();
  v.lip_bound = nu();
  const LinearField copy = *this;
  v.value = [copy](const Eigen::VectorXd& y) {
    Eigen::MatrixXd out(y.size(), static_cast<Eigen::Index>(copy.a.size()));
    for (std::size_t i = 0; i < copy.a.size(); ++i) {
      out.col(static_cast<Eigen::Index>(i)) = copy.a[i] * y + copy.b[i];
    }
    return out;
  };
  v.derivative = [copy](const Eigen::VectorXd& y) {
    std::vector<Eigen::MatrixXd> out;
    for (Eigen::Index m = 0; m < y.size(); ++m) {
      Eigen::MatrixXd dm(y.size(), static_cast<Eigen::Index>(copy.a.size()));
      for (std::size_t i = 0; i < copy.a.size(); ++i) {
        dm.col(static_cast<Eigen::Index>(i)) = copy.a[i].col(m);
      }
      out.push_back(dm);
    }
    return out;
  };
  v.second_derivative = [copy](const Eigen::VectorXd& y) {
    const Eigen::Index e = y.size();
    const auto d = static_cast<Eigen::Index>(copy.a.size());
    return std::vector<std::vector<Eigen::MatrixXd>>(static_cast<std::size_t>(e),
                                                     std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(e),
                                                                                  Eigen::MatrixXd::Zero(e, d)));
  };
  return v;
}

RdeSolution rough_integral(const OneForm& phi, const Level2RoughPath& x, Window window, bool lift_output) {
  if (phi.input_dim != x.dimension()) {
    throw ValidationError("rough_integral: one-form input dimension does not match the path");
  }
  if (window.first >= window.last || window.last >= x.points()) {
    throw ValidationError("rough_integral: invalid window");
  }
  const auto e = static_cast<Eigen::Index>(phi.output_dim);
  const std::size_t m = window.last - window.first + 1;
  Eigen::MatrixXd path = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), e);
  std::vector<GroupElement> steps;
  if (lift_output) steps.reserve(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const std::size_t i = window.first + k;
    const GroupElement g = x.step(i);
    const Eigen::VectorXd xi = x.position(i);
    const Eigen::MatrixXd f = phi.value(xi);
    const auto dphi = phi.derivative_at(xi);
    Eigen::VectorXd dz = f * g.level1;
    for (std::size_t j = 0; j < dphi.size(); ++j) {
      dz += dphi[j] * g.level2.row(static_cast<Eigen::Index>(j)).transpose();
    }
    path.row(static_cast<Eigen::Index>(k + 1)) = path.row(static_cast<Eigen::Index>(k)) + dz.transpose();
    if (lift_output) steps.push_back(output_step(dz, f, g.level2));
  }
  return finish(window_grid(x, window), std::move(path), std::move(steps), lift_output);
}

RdeSolution rough_integral(const OneForm& phi, const Level2RoughPath& x, bool lift_output) {
  return rough_integral(phi, x, x.full_window(), lift_output);
}

RdeSolution solve_rde(const VectorFieldFamily& v, const Level2RoughPath& x, const Eigen::VectorXd& y0,
                      const SolveOptions& options) {
  if (v.driver_dim != x.dimension() || v.state_dim != static_cast<std::size_t>(y0.size())) {
    throw ValidationError("solve_rde: dimension mismatch between fields, driver and initial condition");
  }
  const std::size_t n = x.points();
  Eigen::MatrixXd path(static_cast<Eigen::Index>(n), y0.size());
  path.row(0) = y0.transpose();
  std::vector<GroupElement> steps;
  if (options.lift_output) steps.reserve(n - 1);
  Eigen::VectorXd y = y0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const GroupElement g = x.step(i);
    const Eigen::MatrixXd f = v.value(y);
    const auto dv = v.derivative_at(y);
    Eigen::VectorXd dy = f * g.level1;
    // Σ_{i,j} g²_{ij} (DV_j · V_i) = Σ_m DV[m] (F_m· g²)ᵀ
    for (std::size_t m = 0; m < dv.size(); ++m) {
      dy += dv[m] * (f.row(static_cast<Eigen::Index>(m)) * g.level2).transpose();
    }
    y += dy;
    guard(y, options.divergence_bound, i + 1);
    path.row(static_cast<Eigen::Index>(i + 1)) = y.transpose();
    if (options.lift_output) steps.push_back(output_step(dy, f, g.level2));
  }
  return finish({x.grid().begin(), x.grid().end()}, std::move(path), std::move(steps), options.lift_output);
}

RdeSolution solve_linear_rde(const LinearField& field, const Level2RoughPath& x, const Eigen::VectorXd& y0,
                             const SolveOptions& options) {
  field.validate();
  if (field.driver_dim() != x.dimension() || field.state_dim() != static_cast<std::size_t>(y0.size())) {
    throw ValidationError("solve_linear_rde: dimension mismatch between field, driver and initial condition");
  }
  const std::size_t n = x.points();
  const std::size_t d = field.driver_dim();
  const Eigen::Index e = y0.size();
  Eigen::MatrixXd path(static_cast<Eigen::Index>(n), e);
  path.row(0) = y0.transpose();
  std::vector<GroupElement> steps;
  if (options.lift_output) steps.reserve(n - 1);
  Eigen::VectorXd y = y0;
  Eigen::MatrixXd f(e, static_cast<Eigen::Index>(d));
  for (std::size_t s = 0; s + 1 < n; ++s) {
    const GroupElement g = x.step(s);
    for (std::size_t i = 0; i < d; ++i) {
      f.col(static_cast<Eigen::Index>(i)) = field.a[i] * y + field.b[i];
    }
    Eigen::VectorXd dy = f * g.level1;
    for (std::size_t j = 0; j < d; ++j) {
      // Σ_i A_j (A_i y + b_i) g²_{ij}
      dy += field.a[j] * (f * g.level2.col(static_cast<Eigen::Index>(j)));
    }
    y += dy;
    guard(y, options.divergence_bound, s + 1);
    path.row(static_cast<Eigen::Index>(s + 1)) = y.transpose();
    if (options.lift_output) steps.push_back(output_step(dy, f, g.level2));
  }
  return finish({x.grid().begin(), x.grid().end()}, std::move(path), std::move(steps), options.lift_output);
}

RdeSolution jacobian_flow(const VectorFieldFamily& v, const Level2RoughPath& x, const Eigen::VectorXd& y0) {
  const auto d = static_cast<Eigen::Index>(v.driver_dim);
  const auto e = static_cast<Eigen::Index>(v.state_dim);
  if (static_cast<std::size_t>(d) != x.dimension() || y0.size() != e) {
    throw ValidationError("jacobian_flow: dimension mismatch");
  }

  // (1) joint lift z = (x, y).
  VectorFieldFamily joint;
  joint.state_dim = static_cast<std::size_t>(d + e);
  joint.driver_dim = static_cast<std::size_t>(d);
  joint.lip_bound = std::max(1.0, v.lip_bound);
  joint.value = [&v, d, e](const Eigen::VectorXd& z) {
    Eigen::MatrixXd out(d + e, d);
    out.topRows(d).setIdentity();
    out.bottomRows(e) = v.value(z.tail(e));
    return out;
  };
  joint.derivative = [&v, d, e](const Eigen::VectorXd& z) {
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(d + e), Eigen::MatrixXd::Zero(d + e, d));
    const auto dv = v.derivative_at(z.tail(e));
    for (Eigen::Index m = 0; m < e; ++m) {
      out[static_cast<std::size_t>(d + m)].bottomRows(e) = dv[static_cast<std::size_t>(m)];
    }
    return out;
  };
  Eigen::VectorXd z0(d + e);
  z0.head(d) = x.origin();
  z0.tail(e) = y0;
  const RdeSolution z = solve_rde(joint, x, z0);

  // (2) M = ∫ φ(z) dz, valued in End(R^e) flattened row-major.
  OneForm phi;
  phi.input_dim = static_cast<std::size_t>(d + e);
  phi.output_dim = static_cast<std::size_t>(e * e);
  phi.lip_bound = v.lip_bound;
  phi.value = [&v, d, e](const Eigen::VectorXd& zz) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(e * e, d + e);
    const auto dv = v.derivative_at(zz.tail(e));
    for (Eigen::Index k = 0; k < d; ++k) {
      for (Eigen::Index a = 0; a < e; ++a) {
        for (Eigen::Index b = 0; b < e; ++b) {
          out(a * e + b, k) = dv[static_cast<std::size_t>(b)](a, k);
        }
      }
    }
    return out;
  };
  phi.derivative = [&v, d, e](const Eigen::VectorXd& zz) {
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(d + e), Eigen::MatrixXd::Zero(e * e, d + e));
    const auto d2v = v.second_derivative_at(zz.tail(e));
    for (Eigen::Index c = 0; c < e; ++c) {
      Eigen::MatrixXd& slot = out[static_cast<std::size_t>(d + c)];
      for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index a = 0; a < e; ++a) {
          for (Eigen::Index b = 0; b < e; ++b) {
            slot(a * e + b, k) = d2v[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)](a, k);
          }
        }
      }
    }
    return out;
  };
  const RdeSolution m = rough_integral(phi, *z.lift);

  // (3) dJ = dM J: one linear field per entry (a, b) of M, acting as E_ab J.
  LinearField flow;
  const Eigen::Index ee = e * e;
  for (Eigen::Index a = 0; a < e; ++a) {
    for (Eigen::Index b = 0; b < e; ++b) {
      Eigen::MatrixXd op = Eigen::MatrixXd::Zero(ee, ee);
      for (Eigen::Index k = 0; k < e; ++k) {
        op(a * e + k, b * e + k) = 1.0;
      }
      flow.a.push_back(op);
      flow.b.push_back(Eigen::VectorXd::Zero(ee));
    }
  }
  Eigen::VectorXd j0 = Eigen::VectorXd::Zero(ee);
  for (Eigen::Index a = 0; a < e; ++a) {
    j0[a * e + a] = 1.0;
  }
  SolveOptions options;
  options.lift_output = false;
  return solve_linear_rde(flow, *m.lift, j0, options);
}

Eigen::MatrixXd jacobian_at(const RdeSolution& flow, std::size_t i) {
  const auto ee = flow.path.cols();
  const auto e = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(ee))));
  Eigen::MatrixXd j(e, e);
  for (Eigen::Index a = 0; a < e; ++a) {
    for (Eigen::Index b = 0; b < e; ++b) {
      j(a, b) = flow.path(static_cast<Eigen::Index>(i), a * e + b);
    }
  }
  return j;
}

}  // namespace roughnum
