#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pdflow/diagram.hpp"
#include "pdflow/kd_tree.hpp"
#include "pdflow/parallel.hpp"

namespace pdflow {

namespace detail {

// Sum over nodes of one side of multiplicity * min(distance to nearest node of
// the other side, distance to the diagonal). The terms are written by index
// and summed sequentially so the result does not depend on the worker count.
inline double relaxed_side_cost(const SuppliedNodes& nodes, bool from_a, unsigned workers) {
  std::vector<Point2> targets;
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (from_a ? nodes.in_b(i) : nodes.in_a(i)) targets.push_back(nodes.points[i]);
    if (from_a ? nodes.in_a(i) : nodes.in_b(i)) sources.push_back(i);
  }
  const PlanarIndex index(targets);

  std::vector<double> terms(sources.size(), 0.0);
  parallel_for(sources.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t i = sources[k];
      const double to_diagonal = diagonal_distance(nodes.points[i]);
      const double to_other = index.nearest(nodes.points[i]).distance;  // +inf when empty
      const auto mass = static_cast<double>(from_a ? nodes.a_count[i] : nodes.b_count[i]);
      terms[k] = mass * std::min(to_other, to_diagonal);
    }
  });
  double total = 0.0;
  for (const double t : terms) total += t;
  return total;
}

}  // namespace detail

/// Relaxed Word Mover's Distance: the larger of the two one-sided relaxations
/// of the transport problem. Each unit of A mass pays for its cheapest exit
/// (nearest B node or the diagonal) and symmetrically for B. A lower bound on
/// W1 for 0-condensed input; also accepted on condensed nodes.
inline double rwmd(const SuppliedNodes& nodes, unsigned workers = 1) {
  const double la = detail::relaxed_side_cost(nodes, true, workers);
  const double lb = detail::relaxed_side_cost(nodes, false, workers);
  return std::max(la, lb);
}

inline double rwmd(const PersistenceDiagram& a, const PersistenceDiagram& b, unsigned workers = 1) {
  return rwmd(zero_condense(a, b), workers);
}

/// Word Centroid Distance lower bound. Both diagrams are augmented with the
/// diagonal projections of the other one so they have equal size N; then
/// N * |centroid(X) - centroid(Y)| bounds the classical transport cost from
/// below, which is itself at most 2 * W1.
inline double wcd(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  const std::size_t n = a.size() + b.size();
  if (n == 0) return 0.0;
  // Per-diagram sums kept apart so identical diagrams give bitwise equal
  // centroids.
  struct Sums {
    Point2 points;
    Point2 projections;
  };
  const auto sums = [](const PersistenceDiagram& d) {
    Sums s;
    for (const PDPoint& p : d.points) {
      s.points.x += p.birth;
      s.points.y += p.death;
      const Point2 proj = diagonal_projection(p);
      s.projections.x += proj.x;
      s.projections.y += proj.y;
    }
    return s;
  };
  const Sums sa = sums(a);
  const Sums sb = sums(b);
  const double inv = 1.0 / static_cast<double>(n);
  const Point2 cx{(sa.points.x + sb.projections.x) * inv, (sa.points.y + sb.projections.y) * inv};
  const Point2 cy{(sb.points.x + sa.projections.x) * inv, (sb.points.y + sa.projections.y) * inv};
  return static_cast<double>(n) * distance(cx, cy) / 2.0;
}

}  // namespace pdflow
