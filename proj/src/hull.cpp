#include "qamean/hull.hpp"

#include <algorithm>
#include <cmath>

#include "qamean/errors.hpp"

namespace qam {

namespace {

// > 0 for a counter-clockwise turn o -> a -> b
double cross(const HullVertex& o, const HullVertex& a, const HullVertex& b) {
  return (a.x - o.x) * (b.value - o.value) - (a.value - o.value) * (b.x - o.x);
}

std::vector<HullVertex> half_hull(std::span<const HullVertex> points, HullOrientation side) {
  if (points.size() < 2) throw UsageError("a hull needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].value)) {
      throw DomainError("hull points must be finite");
    }
    if (i > 0 && !(points[i].x > points[i - 1].x)) {
      throw UsageError("hull points must have strictly increasing x");
    }
  }
  std::vector<HullVertex> h;
  h.reserve(points.size());
  for (const HullVertex& p : points) {
    // the upper chain keeps only clockwise turns, the lower only counter-clockwise
    while (h.size() >= 2) {
      const double c = cross(h[h.size() - 2], h.back(), p);
      if (side == HullOrientation::Upper ? c < 0.0 : c > 0.0) break;
      h.pop_back();
    }
    h.push_back(p);
  }
  return h;
}

}  // namespace

PiecewiseLinearHull::PiecewiseLinearHull(std::vector<HullVertex> vertices,
                                         HullOrientation orientation)
    : vertices_(std::move(vertices)), orientation_(orientation) {
  if (vertices_.size() < 2) throw UsageError("a hull needs at least two vertices");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (!(vertices_[i].x > vertices_[i - 1].x)) {
      throw UsageError("hull vertices must have strictly increasing x");
    }
  }
}

double PiecewiseLinearHull::operator()(double x) const {
  if (!(x >= lo() && x <= hi())) throw DomainError("hull evaluated outside its vertex range");
  auto it = std::upper_bound(vertices_.begin(), vertices_.end(), x,
                             [](double v, const HullVertex& p) { return v < p.x; });
  std::size_t j = static_cast<std::size_t>(it - vertices_.begin());
  j = std::clamp<std::size_t>(j, 1, vertices_.size() - 1);
  const HullVertex& a = vertices_[j - 1];
  const HullVertex& b = vertices_[j];
  if (x == a.x) return a.value;
  if (x == b.x) return b.value;
  return a.value + (b.value - a.value) * ((x - a.x) / (b.x - a.x));
}

ScalarGrid PiecewiseLinearHull::sample(const WorkingInterval& interval) const {
  return ScalarGrid::sample(interval, [this](double x) { return (*this)(x); });
}

PiecewiseLinearHull PiecewiseLinearHull::reflected() const {
  std::vector<HullVertex> out;
  out.reserve(vertices_.size());
  for (auto it = vertices_.rbegin(); it != vertices_.rend(); ++it) {
    out.push_back({-it->x, -it->value});
  }
  return {std::move(out), orientation_ == HullOrientation::Upper ? HullOrientation::Lower
                                                                  : HullOrientation::Upper};
}

PiecewiseLinearHull upper_hull(std::span<const HullVertex> points) {
  return {half_hull(points, HullOrientation::Upper), HullOrientation::Upper};
}

PiecewiseLinearHull lower_hull(std::span<const HullVertex> points) {
  return {half_hull(points, HullOrientation::Lower), HullOrientation::Lower};
}

namespace {

std::vector<HullVertex> grid_points(const ScalarGrid& samples) {
  std::vector<HullVertex> pts(samples.size());
  for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = {samples.x(k), samples[k]};
  return pts;
}

}  // namespace

PiecewiseLinearHull concave_envelope_1d(const ScalarGrid& samples) {
  return upper_hull(grid_points(samples));
}

PiecewiseLinearHull convex_envelope_1d(const ScalarGrid& samples) {
  return lower_hull(grid_points(samples));
}

}  // namespace qam
