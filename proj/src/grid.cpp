#include "qamean/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qamean/errors.hpp"

namespace qam {

WorkingInterval::WorkingInterval(double lo, double hi, std::size_t grid_points)
    : lo_(lo), hi_(hi), grid_points_(grid_points), step_(0.0) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    std::ostringstream os;
    os << "working interval requires finite lo < hi, got [" << lo << ", " << hi << "]";
    throw UsageError(os.str());
  }
  if (grid_points < 3) {
    throw UsageError("working interval requires at least 3 grid points");
  }
  step_ = (hi - lo) / static_cast<double>(grid_points - 1);
}

double WorkingInterval::node(std::size_t k) const {
  const std::size_t last = grid_points_ - 1;
  if (2 * k < last) return lo_ + static_cast<double>(k) * step_;
  if (2 * k > last) return hi_ - static_cast<double>(last - k) * step_;
  return 0.5 * (lo_ + hi_);
}

std::vector<double> WorkingInterval::nodes() const {
  std::vector<double> out(grid_points_);
  for (std::size_t k = 0; k < grid_points_; ++k) out[k] = node(k);
  return out;
}

std::size_t locate_cell(const WorkingInterval& interval, double x) {
  const std::size_t last_cell = interval.grid_points() - 2;
  const double pos = std::floor((x - interval.lo()) / interval.step());
  std::size_t k = pos <= 0.0 ? 0 : std::min(static_cast<std::size_t>(pos), last_cell);
  // the symmetric node layout can disagree with the floor by one cell
  if (k > 0 && x < interval.node(k)) --k;
  if (k < last_cell && x > interval.node(k + 1)) ++k;
  return k;
}

ScalarGrid::ScalarGrid(WorkingInterval interval, std::vector<double> values)
    : interval_(interval), values_(std::move(values)) {
  if (values_.size() != interval_.grid_points()) {
    throw UsageError("grid length does not match the interval resolution");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("grid values must be finite");
  }
}

ScalarGrid ScalarGrid::sample(const WorkingInterval& interval,
                              const std::function<double(double)>& fn) {
  std::vector<double> values(interval.grid_points());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = fn(interval.node(k));
  return {interval, std::move(values)};
}

double ScalarGrid::at(double x) const {
  if (!interval_.contains(x)) {
    std::ostringstream os;
    os << "x = " << x << " outside [" << interval_.lo() << ", " << interval_.hi() << "]";
    throw DomainError(os.str());
  }
  const std::size_t k = locate_cell(interval_, x);
  const double x0 = interval_.node(k);
  const double x1 = interval_.node(k + 1);
  if (x == x0) return values_[k];
  if (x == x1) return values_[k + 1];
  const double t = (x - x0) / (x1 - x0);
  return values_[k] + t * (values_[k + 1] - values_[k]);
}

ScalarGrid ScalarGrid::reflected(double sign) const {
  std::vector<double> out(values_.rbegin(), values_.rend());
  for (double& v : out) v *= sign;
  return {interval_.reflected(), std::move(out)};
}

std::vector<double> cumulative_trapezoid(const WorkingInterval& interval,
                                         std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double h = interval.node(k) - interval.node(k - 1);
    out[k] = out[k - 1] + 0.5 * h * (values[k - 1] + values[k]);
  }
  return out;
}

std::vector<double> differentiate(const WorkingInterval& interval, std::span<const double> values) {
  const std::size_t n = values.size();
  const double h = interval.step();
  std::vector<double> out(n);
  for (std::size_t k = 1; k + 1 < n; ++k) out[k] = (values[k + 1] - values[k - 1]) / (2.0 * h);
  out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
  out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
  return out;
}

std::vector<double> second_difference(const WorkingInterval& interval,
                                      std::span<const double> values) {
  const std::size_t n = values.size();
  const double h2 = interval.step() * interval.step();
  std::vector<double> out(n);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    out[k] = ((values[k + 1] + values[k - 1]) - 2.0 * values[k]) / h2;
  }
  if (n < 4) {
    out[0] = out[1];
    out[n - 1] = out[n - 2];
  } else {
    out[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2;
    out[n - 1] =
        (2.0 * values[n - 1] - 5.0 * values[n - 2] + 4.0 * values[n - 3] - values[n - 4]) / h2;
  }
  return out;
}

}  // namespace qam
