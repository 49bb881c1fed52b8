#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace roughnum {

/// Closed grid window [first, last] given by grid indices.
struct Window {
  std::size_t first = 0;
  std::size_t last = 0;
};

/// Forward scan over ω(start, start + 1), ω(start, start + 2), ...
/// Each call to advance() moves the right endpoint one grid index.
class ControlScan {
 public:
  virtual ~ControlScan() = default;
  virtual double advance() = 0;
};

/// Backing store of a control. Implementations must be pure functions of
/// (i, j) so that a Control can be queried concurrently.
class ControlSource {
 public:
  virtual ~ControlSource() = default;
  [[nodiscard]] virtual double value(std::size_t i, std::size_t j) const = 0;
  /// Default scan re-queries value(start, u) for each u.
  [[nodiscard]] virtual std::unique_ptr<ControlScan> scan_from(std::size_t start) const;
};

/// A superadditive interval functional on a strictly increasing time grid.
///
/// Values are only defined for i <= j; ω(i, i) = 0. Controls are immutable
/// and cheap to copy (the source is shared).
class Control {
 public:
  Control(std::vector<double> grid, std::shared_ptr<const ControlSource> source);

  [[nodiscard]] std::span<const double> grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t points() const noexcept { return grid_.size(); }
  [[nodiscard]] Window full_window() const noexcept { return {0, grid_.size() - 1}; }

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const;
  [[nodiscard]] std::unique_ptr<ControlScan> scan_from(std::size_t start) const;

  /// λω, again a control for λ > 0.
  [[nodiscard]] Control scaled(double lambda) const;

  /// Dense upper-triangular copy (row-major, points() x points()).
  [[nodiscard]] std::vector<double> materialize() const;

 private:
  std::vector<double> grid_;
  std::shared_ptr<const ControlSource> source_;
};

/// Builds a table-backed control. `table` is row-major points x points;
/// only the upper triangle (including the diagonal) is read.
///
/// Validation: strictly increasing grid, zero diagonal, nonnegative entries,
/// superadditivity (exhaustive for up to 64 points, 10 n^2 sampled triples
/// above). Violations throw ValidationError naming the witnessing indices.
[[nodiscard]] Control build_table_control(std::vector<double> grid, std::vector<double> table);

/// Control backed by an arbitrary source; the grid is checked, values are not.
[[nodiscard]] Control make_control(std::vector<double> grid, std::shared_ptr<const ControlSource> source);

/// Result of a superadditivity scan: `ok` or the first witnessing triple.
struct SuperadditivityReport {
  bool ok = true;
  std::size_t i = 0, j = 0, k = 0;
  double excess = 0.0;  // ω(i,j) + ω(j,k) - ω(i,k) at the witness
  std::size_t triples_checked = 0;
};

/// Exhaustive below 65 points, otherwise 10 n^2 triples drawn from a fixed
/// seed. `tolerance` absorbs floating-point noise.
[[nodiscard]] SuperadditivityReport check_superadditivity(const Control& omega, double tolerance = 1e-9);

void require_strictly_increasing(std::span<const double> grid, const char* what);

}  // namespace roughnum
