#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qam {

inline constexpr std::size_t kDefaultGridPoints = 1025;

/// Compact interval [lo, hi] together with the resolution of its uniform grid.
///
/// Nodes are laid out symmetrically: the lower half is stepped from `lo`, the
/// upper half from `hi`, and an odd grid has its centre at (lo + hi) / 2. The
/// nodes of `reflected()` are therefore exactly the negated nodes of this
/// interval in reverse order, which keeps reflected computations bitwise
/// consistent with the originals.
class WorkingInterval {
 public:
  WorkingInterval(double lo, double hi, std::size_t grid_points = kDefaultGridPoints);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  std::size_t grid_points() const noexcept { return grid_points_; }
  double step() const noexcept { return step_; }

  double node(std::size_t k) const;
  std::vector<double> nodes() const;
  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

  /// [-hi, -lo] with the same resolution.
  WorkingInterval reflected() const { return {-hi_, -lo_, grid_points_}; }
  WorkingInterval with_grid(std::size_t grid_points) const { return {lo_, hi_, grid_points}; }

  bool operator==(const WorkingInterval&) const = default;

 private:
  double lo_;
  double hi_;
  std::size_t grid_points_;
  double step_;
};

/// A real function sampled on the nodes of a WorkingInterval, read back by
/// piecewise-linear interpolation.
class ScalarGrid {
 public:
  ScalarGrid(WorkingInterval interval, std::vector<double> values);

  static ScalarGrid sample(const WorkingInterval& interval,
                           const std::function<double(double)>& fn);

  const WorkingInterval& interval() const noexcept { return interval_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double x(std::size_t k) const { return interval_.node(k); }

  /// Piecewise-linear interpolation; x must lie in the interval.
  double at(double x) const;

  /// Value-wise reflection onto the reflected interval: out[k] = sign * in[n-1-k].
  ScalarGrid reflected(double sign) const;

 private:
  WorkingInterval interval_;
  std::vector<double> values_;
};

/// Index k of the cell [x_k, x_{k+1}] containing x (clamped to the grid).
std::size_t locate_cell(const WorkingInterval& interval, double x);

/// Running integral of `values` from lo by the composite trapezoid rule.
std::vector<double> cumulative_trapezoid(const WorkingInterval& interval,
                                         std::span<const double> values);

/// Second-order finite-difference derivative: central in the interior,
/// three-point one-sided at the ends.
std::vector<double> differentiate(const WorkingInterval& interval, std::span<const double> values);

/// Second-order finite-difference second derivative (four-point one-sided at the ends).
std::vector<double> second_difference(const WorkingInterval& interval,
                                      std::span<const double> values);

}  // namespace qam
