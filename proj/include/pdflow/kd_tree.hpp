#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pdflow/geometry.hpp"

namespace pdflow {

/// Balanced 2-d tree over a fixed planar point set answering exact Euclidean
/// nearest-neighbour queries. Immutable after construction; queries may run
/// concurrently.
class PlanarIndex {
 public:
  struct Hit {
    std::size_t index = npos;  // position in the indexed point list
    double distance = std::numeric_limits<double>::infinity();
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  PlanarIndex() = default;

  explicit PlanarIndex(std::span<const Point2> points) : points_(points.begin(), points.end()) {
    order_.resize(points_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<std::uint32_t>(i);
    axis_.assign(points_.size(), 0);
    build(0, order_.size());
  }

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  /// Nearest indexed point to q. Returns {npos, +inf} on an empty index.
  Hit nearest(const Point2& q) const {
    Hit best;
    double best_sq = std::numeric_limits<double>::infinity();
    search(0, order_.size(), q, best, best_sq);
    if (best.index != npos) best.distance = distance(q, points_[best.index]);
    return best;
  }

 private:
  static double coord(const Point2& p, int axis) noexcept { return axis == 0 ? p.x : p.y; }

  void build(std::size_t lo, std::size_t hi) {
    if (hi - lo <= 1) return;
    Box box;
    for (std::size_t i = lo; i < hi; ++i) box.expand(points_[order_[i]]);
    const int axis = box.width() >= box.height() ? 0 : 1;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](std::uint32_t a, std::uint32_t b) {
                       return coord(points_[a], axis) < coord(points_[b], axis);
                     });
    axis_[mid] = static_cast<std::uint8_t>(axis);
    build(lo, mid);
    build(mid + 1, hi);
  }

  void search(std::size_t lo, std::size_t hi, const Point2& q, Hit& best, double& best_sq) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const Point2& p = points_[order_[mid]];
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_sq) {
      best_sq = d2;
      best.index = order_[mid];
    }
    if (hi - lo == 1) return;
    const int axis = axis_[mid];
    const double diff = coord(q, axis) - coord(p, axis);
    // Left range holds coordinates <= split, right range >= split.
    if (diff < 0) {
      search(lo, mid, q, best, best_sq);
      if (diff * diff < best_sq) search(mid + 1, hi, q, best, best_sq);
    } else {
      search(mid + 1, hi, q, best, best_sq);
      if (diff * diff < best_sq) search(lo, mid, q, best, best_sq);
    }
  }

  std::vector<Point2> points_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint8_t> axis_;
};

}  // namespace pdflow
