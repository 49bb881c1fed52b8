#pragma once

// Reference implementations used only by tests. They re-derive results from
// definitions (literal scans, exhaustive enumeration, quadrature, RK4) and do
// not call the library code paths they are compared against.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Row-major n x n table with ω(i, j) for i <= j.
struct Table {
  std::size_t n = 0;
  std::vector<double> w;
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return w[i * n + j]; }
  [[nodiscard]] std::vector<double> grid() const {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = 0.1 * static_cast<double>(i);
    return g;
  }
};

/// ω = (F_j - F_i)^a + c (G_j - G_i)^b with a, b >= 1 and nonnegative
/// increments; sums of powers (>= 1) of additive functions are superadditive.
inline Table random_superadditive(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> f(n, 0.0), g(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    f[i] = f[i - 1] + (u(rng) < 0.2 ? 0.0 : u(rng));
    g[i] = g[i - 1] + u(rng) * u(rng);
  }
  const double a = 1.0 + 2.0 * u(rng);
  const double b = 1.0 + 2.0 * u(rng);
  const double c = 2.0 * u(rng);
  Table t{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) t.w[i * n + j] = std::pow(f[j] - f[i], a) + c * std::pow(g[j] - g[i], b);
  }
  return t;
}

/// ω(i, j) = scale * (F_j - F_i)^power with F integer valued (steps 0 or 1).
/// For α = scale * k^power every greedy block hits the threshold exactly.
struct LatticeControl {
  Table table;
  std::vector<int> level;
  double scale = 1.0;
  double power = 1.0;
  [[nodiscard]] double at(int k) const { return scale * std::pow(static_cast<double>(k), power); }
};

inline LatticeControl lattice_control(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LatticeControl c;
  c.scale = 0.25 + 2.0 * u(rng);
  c.power = 1.0 + 2.0 * u(rng);
  c.level.assign(n, 0);
  for (std::size_t i = 1; i < n; ++i) c.level[i] = c.level[i - 1] + (u(rng) < 0.7 ? 1 : 0);
  c.table = Table{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) c.table.w[i * n + j] = c.at(c.level[j] - c.level[i]);
  }
  return c;
}

/// τ_0 = s; τ_{k+1} = min{u in (τ_k, t] : ω(τ_k, u) >= α}, or t if none.
/// Returns the sequence up to the first τ equal to t.
inline std::vector<std::size_t> literal_greedy(const std::function<double(std::size_t, std::size_t)>& w, double alpha,
                                               std::size_t s, std::size_t t) {
  std::vector<std::size_t> taus{s};
  while (taus.back() < t) {
    std::size_t next = t;
    for (std::size_t u = taus.back() + 1; u <= t; ++u) {
      if (w(taus.back(), u) >= alpha) {
        next = u;
        break;
      }
    }
    taus.push_back(next);
  }
  return taus;
}

/// sup{ n : τ_n < t }.
inline std::size_t literal_count(const std::vector<std::size_t>& taus, std::size_t t) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (taus[k] < t) n = k;
  }
  return n;
}

/// Calls visit(cuts) for each dissection s = c_0 < ... < c_r = t.
inline void for_each_dissection(std::size_t s, std::size_t t,
                                const std::function<void(const std::vector<std::size_t>&)>& visit) {
  const std::size_t inner = t - s - 1;
  for (std::uint64_t mask = 0; mask < (1ULL << inner); ++mask) {
    std::vector<std::size_t> cuts{s};
    for (std::size_t k = 0; k < inner; ++k) {
      if ((mask >> k) & 1ULL) cuts.push_back(s + 1 + k);
    }
    cuts.push_back(t);
    visit(cuts);
  }
}

/// Largest Σ ω over dissections whose blocks are all <= α; -1 if none.
inline double brute_alpha_variation(const std::function<double(std::size_t, std::size_t)>& w, double alpha,
                                    std::size_t s, std::size_t t) {
  double best = -1.0;
  for_each_dissection(s, t, [&](const std::vector<std::size_t>& cuts) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double v = w(cuts[k], cuts[k + 1]);
      if (v > alpha) return;
      sum += v;
    }
    best = std::max(best, sum);
  });
  return best;
}

/// Step-2 signature of a polyline from first principles: for each segment
/// Δ the segment signature is (Δ, ΔΔᵀ/2); combine by the tensor product rule.
struct Signature {
  Eigen::VectorXd s1;
  Eigen::MatrixXd s2;
};

inline Signature polyline_signature(const Eigen::MatrixXd& pts, std::size_t i, std::size_t j) {
  const Eigen::Index d = pts.cols();
  Signature sig{Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d)};
  for (std::size_t k = i; k < j; ++k) {
    const Eigen::VectorXd delta =
        (pts.row(static_cast<Eigen::Index>(k + 1)) - pts.row(static_cast<Eigen::Index>(k))).transpose();
    // ∫∫_{u<v} dx_u dx_v over [t_i, t_{k+1}] = old + old¹ ⊗ Δ + Δ⊗Δ/2
    sig.s2 += sig.s1 * delta.transpose() + 0.5 * delta * delta.transpose();
    sig.s1 += delta;
  }
  return sig;
}

/// Per-block quantities for polyline lifts, written out explicitly.
inline double level1_power(const Signature& g, double p) { return std::pow(g.s1.norm(), p); }
inline double level2_power(const Signature& g, double p) { return std::pow(g.s2.norm(), p / 2.0); }
inline double homogeneous_max_power(const Signature& g, double p) {
  const Eigen::MatrixXd anti = 0.5 * (g.s2 - g.s2.transpose());
  return std::pow(std::max(g.s1.norm(), std::sqrt(2.0 * anti.norm())), p);
}

/// sup over all dissections of Σ block(i, j).
inline double brute_dissection_sup(std::size_t s, std::size_t t,
                                   const std::function<double(std::size_t, std::size_t)>& block) {
  double best = 0.0;
  for_each_dissection(s, t, [&](const std::vector<std::size_t>& cuts) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) sum += block(cuts[k], cuts[k + 1]);
    best = std::max(best, sum);
  });
  return best;
}

/// Adaptive Simpson quadrature on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int depth) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (depth > 40 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, depth + 1) + rec(mid, hi, fmid, frm, fhi, right, depth + 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 0);
}

/// Classical RK4 for y' = g(t, y) with `steps` uniform steps.
inline Eigen::VectorXd rk4(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& g,
                           Eigen::VectorXd y, double t0, double t1, std::size_t steps) {
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + h * static_cast<double>(k);
    const Eigen::VectorXd k1 = g(t, y);
    const Eigen::VectorXd k2 = g(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = g(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = g(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

/// Matrix exponential by scaling and squaring of a long Taylor series.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Exhaustive 2D ρ-variation over product dissections of the index set.
inline double brute_rho_variation(const Eigen::MatrixXd& r, double rho) {
  const std::size_t n = static_cast<std::size_t>(r.rows());
  double best = 0.0;
  for_each_dissection(0, n - 1, [&](const std::vector<std::size_t>& a) {
    for_each_dissection(0, n - 1, [&](const std::vector<std::size_t>& b) {
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
          const auto s0 = static_cast<Eigen::Index>(a[i]), s1 = static_cast<Eigen::Index>(a[i + 1]);
          const auto t0 = static_cast<Eigen::Index>(b[j]), t1 = static_cast<Eigen::Index>(b[j + 1]);
          sum += std::pow(std::abs(r(s1, t1) - r(s0, t1) - r(s1, t0) + r(s0, t0)), rho);
        }
      }
      best = std::max(best, sum);
    });
  });
  return std::pow(best, 1.0 / rho);
}

}  // namespace oracle
