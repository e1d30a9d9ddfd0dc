#pragma once

#include <span>
#include <vector>

#include "qamean/grid.hpp"

namespace qam {

enum class HullOrientation { Upper, Lower };

struct HullVertex {
  double x;
  double value;
  bool operator==(const HullVertex&) const = default;
};

/// Concave (Upper) or convex (Lower) piecewise-linear function given by its
/// vertices, strictly increasing in x.
class PiecewiseLinearHull {
 public:
  PiecewiseLinearHull(std::vector<HullVertex> vertices, HullOrientation orientation);

  const std::vector<HullVertex>& vertices() const noexcept { return vertices_; }
  HullOrientation orientation() const noexcept { return orientation_; }
  double lo() const noexcept { return vertices_.front().x; }
  double hi() const noexcept { return vertices_.back().x; }

  /// Linear interpolation between the bracketing vertices; exact at vertices.
  double operator()(double x) const;
  ScalarGrid sample(const WorkingInterval& interval) const;

  /// x -> -h(-x); swaps the orientation.
  PiecewiseLinearHull reflected() const;

 private:
  std::vector<HullVertex> vertices_;
  HullOrientation orientation_;
};

/// Least concave majorant of points sorted by strictly increasing x
/// (monotone-chain upper hull). Collinear interior points are dropped.
PiecewiseLinearHull upper_hull(std::span<const HullVertex> points);
/// Greatest convex minorant (lower hull).
PiecewiseLinearHull lower_hull(std::span<const HullVertex> points);

PiecewiseLinearHull concave_envelope_1d(const ScalarGrid& samples);
PiecewiseLinearHull convex_envelope_1d(const ScalarGrid& samples);

}  // namespace qam
