#include "roughnum/control.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "roughnum/errors.hpp"

namespace roughnum {

namespace {

class DefaultScan final : public ControlScan {
 public:
  DefaultScan(const ControlSource& source, std::size_t start) : source_(source), start_(start), end_(start) {}
  double advance() override { return source_.value(start_, ++end_); }

 private:
  const ControlSource& source_;
  std::size_t start_;
  std::size_t end_;
};

class TableSource final : public ControlSource {
 public:
  TableSource(std::size_t n, std::vector<double> table) : n_(n), table_(std::move(table)) {}
  double value(std::size_t i, std::size_t j) const override { return table_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> table_;
};

class ScaledSource final : public ControlSource {
 public:
  ScaledSource(std::shared_ptr<const ControlSource> inner, double lambda)
      : inner_(std::move(inner)), lambda_(lambda) {}
  double value(std::size_t i, std::size_t j) const override { return lambda_ * inner_->value(i, j); }

  std::unique_ptr<ControlScan> scan_from(std::size_t start) const override {
    struct Scan final : ControlScan {
      std::unique_ptr<ControlScan> inner;
      double lambda;
      double advance() override { return lambda * inner->advance(); }
    };
    auto scan = std::make_unique<Scan>();
    scan->inner = inner_->scan_from(start);
    scan->lambda = lambda_;
    return scan;
  }

 private:
  std::shared_ptr<const ControlSource> inner_;
  double lambda_;
};

}  // namespace

std::unique_ptr<ControlScan> ControlSource::scan_from(std::size_t start) const {
  return std::make_unique<DefaultScan>(*this, start);
}

void require_strictly_increasing(std::span<const double> grid, const char* what) {
  if (grid.size() < 2) {
    throw ValidationError(std::string(what) + ": grid needs at least two points");
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < grid[i + 1]) || !std::isfinite(grid[i + 1])) {
      std::ostringstream os;
      os << what << ": grid not strictly increasing at index " << i + 1 << " (" << grid[i] << " -> "
         << grid[i + 1] << ")";
      throw ValidationError(os.str());
    }
  }
}

Control::Control(std::vector<double> grid, std::shared_ptr<const ControlSource> source)
    : grid_(std::move(grid)), source_(std::move(source)) {}

double Control::operator()(std::size_t i, std::size_t j) const {
  if (i == j) {
    return 0.0;
  }
  return source_->value(i, j);
}

std::unique_ptr<ControlScan> Control::scan_from(std::size_t start) const { return source_->scan_from(start); }

Control Control::scaled(double lambda) const {
  if (!(lambda > 0.0)) {
    throw ValidationError("Control::scaled: lambda must be positive");
  }
  return Control(grid_, std::make_shared<ScaledSource>(source_, lambda));
}

std::vector<double> Control::materialize() const {
  const std::size_t n = points();
  std::vector<double> table(n * n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto scan = scan_from(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      table[i * n + j] = scan->advance();
    }
  }
  return table;
}

Control make_control(std::vector<double> grid, std::shared_ptr<const ControlSource> source) {
  require_strictly_increasing(grid, "make_control");
  return Control(std::move(grid), std::move(source));
}

SuperadditivityReport check_superadditivity(const Control& omega, double tolerance) {
  const std::size_t n = omega.points();
  SuperadditivityReport report;
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    ++report.triples_checked;
    const double excess = omega(i, j) + omega(j, k) - omega(i, k);
    if (excess > tolerance && report.ok) {
      report = {false, i, j, k, excess, report.triples_checked};
    }
  };
  if (n <= 64) {
    for (std::size_t i = 0; i < n && report.ok; ++i) {
      for (std::size_t j = i; j < n && report.ok; ++j) {
        for (std::size_t k = j; k < n && report.ok; ++k) {
          check(i, j, k);
        }
      }
    }
    return report;
  }
  std::mt19937_64 gen(0x5eed5eedULL);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const std::size_t samples = 10 * n * n;
  for (std::size_t s = 0; s < samples && report.ok; ++s) {
    std::size_t a = pick(gen), b = pick(gen), c = pick(gen);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    check(a, b, c);
  }
  return report;
}

Control build_table_control(std::vector<double> grid, std::vector<double> table) {
  require_strictly_increasing(grid, "build_table_control");
  const std::size_t n = grid.size();
  if (table.size() != n * n) {
    throw ValidationError("build_table_control: table must hold points x points entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i * n + i] != 0.0) {
      std::ostringstream os;
      os << "build_table_control: nonzero diagonal at (" << i << ", " << i << ")";
      throw ValidationError(os.str());
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = table[i * n + j];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "build_table_control: negative value " << v << " at (" << i << ", " << j << ")";
        throw ValidationError(os.str());
      }
    }
  }
  Control omega(std::move(grid), std::make_shared<TableSource>(n, std::move(table)));
  const auto report = check_superadditivity(omega);
  if (!report.ok) {
    std::ostringstream os;
    os << "build_table_control: superadditivity violated at (" << report.i << ", " << report.j << ", "
       << report.k << "), excess " << report.excess;
    throw ValidationError(os.str());
  }
  return omega;
}

}  // namespace roughnum
