#pragma once

#include <cmath>
#include <compare>
#include <numbers>

namespace pdflow {

/// A point in the plane. Persistence points use x = birth, y = death.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point2&, const Point2&) = default;
  friend constexpr auto operator<=>(const Point2&, const Point2&) = default;
};

inline double distance(const Point2& p, const Point2& q) noexcept {
  return std::hypot(p.x - q.x, p.y - q.y);
}

/// l2 distance from a planar point to the line y = x. Points that end up on the
/// wrong side of the diagonal (possible after snapping) are measured by |y - x|.
inline double diagonal_distance(const Point2& p) noexcept {
  return std::abs(p.y - p.x) / std::numbers::sqrt2;
}

inline Point2 diagonal_projection(const Point2& p) noexcept {
  const double m = 0.5 * (p.x + p.y);
  return {m, m};
}

/// Lexicographic "leftmost" order: smaller x first, ties broken by smaller y.
inline bool leftmost_less(const Point2& a, const Point2& b) noexcept {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

/// Axis-aligned rectangle. An empty box has lo > hi.
struct Box {
  Point2 lo{INFINITY, INFINITY};
  Point2 hi{-INFINITY, -INFINITY};

  static Box of(const Point2& p) noexcept { return {p, p}; }

  void expand(const Point2& p) noexcept {
    lo.x = std::fmin(lo.x, p.x);
    lo.y = std::fmin(lo.y, p.y);
    hi.x = std::fmax(hi.x, p.x);
    hi.y = std::fmax(hi.y, p.y);
  }

  bool empty() const noexcept { return lo.x > hi.x; }
  double width() const noexcept { return hi.x - lo.x; }
  double height() const noexcept { return hi.y - lo.y; }
  double diagonal() const noexcept { return std::hypot(width(), height()); }
  Point2 center() const noexcept { return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)}; }

  bool contains(const Point2& p) const noexcept {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }

  friend constexpr bool operator==(const Box&, const Box&) = default;
};

}  // namespace pdflow
