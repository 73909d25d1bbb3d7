#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdflow/diagram.hpp"
#include "pdflow/errors.hpp"
#include "pdflow/geometry.hpp"
#include "pdflow/parallel.hpp"

namespace pdflow {

/// Binary space decomposition obtained by halving the longest side of the
/// tight bounding box until a single point remains.
///
/// Every node covers the points order[begin, end) and stores its bounding box
/// and its leftmost point (ties: smaller y) as representative.
struct SplitTree {
  static constexpr std::int32_t none = -1;

  struct Node {
    Box box;
    std::uint32_t rep = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = none;
    std::int32_t right = none;

    bool leaf() const noexcept { return left == none; }
    std::uint32_t count() const noexcept { return end - begin; }
    double diameter() const noexcept { return box.diagonal(); }
  };

  std::vector<Point2> points;
  std::vector<Node> nodes;               // nodes[0] is the root when non-empty
  std::vector<std::uint32_t> order;      // point indices in leaf order
  std::vector<std::uint32_t> internal;   // ids of internal nodes, creation order

  bool empty() const noexcept { return nodes.empty(); }
  std::size_t leaf_count() const noexcept { return points.size(); }

  std::span<const std::uint32_t> covered(std::uint32_t node) const noexcept {
    return {order.data() + nodes[node].begin, nodes[node].count()};
  }
};

/// Builds the split tree of a set of distinct points. Duplicate coordinates are
/// rejected since they can never be separated.
inline SplitTree build_split_tree(std::span<const Point2> points) {
  SplitTree tree;
  tree.points.assign(points.begin(), points.end());
  const auto n = static_cast<std::uint32_t>(points.size());
  if (n == 0) return tree;
  tree.order.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) tree.order[i] = i;
  tree.nodes.reserve(2 * static_cast<std::size_t>(n) - 1);
  tree.internal.reserve(n - 1);

  tree.nodes.push_back({});
  tree.nodes[0].begin = 0;
  tree.nodes[0].end = n;
  std::vector<std::uint32_t> work{0};
  while (!work.empty()) {
    const std::uint32_t id = work.back();
    work.pop_back();
    const std::uint32_t begin = tree.nodes[id].begin;
    const std::uint32_t end = tree.nodes[id].end;

    Box box;
    std::uint32_t rep = tree.order[begin];
    for (std::uint32_t i = begin; i < end; ++i) {
      const std::uint32_t p = tree.order[i];
      box.expand(tree.points[p]);
      if (leftmost_less(tree.points[p], tree.points[rep])) rep = p;
    }
    tree.nodes[id].box = box;
    tree.nodes[id].rep = rep;
    if (end - begin == 1) continue;
    if (box.width() == 0.0 && box.height() == 0.0)
      throw InputError("split tree input contains duplicate points");

    const bool along_x = box.width() >= box.height();
    const auto coord = [&](std::uint32_t p) { return along_x ? tree.points[p].x : tree.points[p].y; };
    const double lo = along_x ? box.lo.x : box.lo.y;
    const double hi = along_x ? box.hi.x : box.hi.y;
    const double mid = 0.5 * (lo + hi);
    auto first = tree.order.begin() + begin;
    auto last = tree.order.begin() + end;
    auto cut = std::partition(first, last, [&](std::uint32_t p) { return coord(p) < mid; });
    if (cut == first || cut == last)  // midpoint rounded onto an extreme coordinate
      cut = std::partition(first, last, [&](std::uint32_t p) { return coord(p) < hi; });
    const auto split = static_cast<std::uint32_t>(cut - tree.order.begin());

    const auto left = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes.back().begin = begin;
    tree.nodes.back().end = split;
    const auto right = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes.back().begin = split;
    tree.nodes.back().end = end;
    tree.nodes[id].left = left;
    tree.nodes[id].right = right;
    tree.internal.push_back(id);
    work.push_back(static_cast<std::uint32_t>(right));
    work.push_back(static_cast<std::uint32_t>(left));
  }
  return tree;
}

/// s-well-separation of two point sets given by their bounding boxes. Each box
/// is enclosed in a ball of radius r = max(half diagonals) around its centre;
/// the sets are separated iff the gap between the balls is at least s * r.
inline bool well_separated(const Box& u, const Box& v, double s) noexcept {
  const double r = 0.5 * std::max(u.diagonal(), v.diagonal());
  return distance(u.center(), v.center()) - 2.0 * r >= s * r;
}

/// One well-separated pair: split tree nodes and their representatives.
struct WSPair {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::uint32_t rep_u = 0;
  std::uint32_t rep_v = 0;

  friend constexpr bool operator==(const WSPair&, const WSPair&) = default;
  friend constexpr auto operator<=>(const WSPair&, const WSPair&) = default;
};

using WSPairList = std::vector<WSPair>;

namespace detail {

// Pairs found below internal node w, starting from (w.left, w.right). When a
// pair is not separated the node with the larger diameter is split.
template <typename Visit>
void search_pairs(const SplitTree& tree, std::uint32_t w, double s, std::vector<std::pair<std::uint32_t, std::uint32_t>>& stack,
                  Visit&& visit) {
  const auto& root = tree.nodes[w];
  stack.clear();
  stack.emplace_back(static_cast<std::uint32_t>(root.left), static_cast<std::uint32_t>(root.right));
  while (!stack.empty()) {
    const auto [u, v] = stack.back();
    stack.pop_back();
    const auto& nu = tree.nodes[u];
    const auto& nv = tree.nodes[v];
    if (well_separated(nu.box, nv.box, s)) {
      visit(u, v);
      continue;
    }
    // Push right before left so pairs come out in a left-first order.
    if (nu.diameter() > nv.diameter()) {
      stack.emplace_back(static_cast<std::uint32_t>(nu.right), v);
      stack.emplace_back(static_cast<std::uint32_t>(nu.left), v);
    } else {
      stack.emplace_back(u, static_cast<std::uint32_t>(nv.right));
      stack.emplace_back(u, static_cast<std::uint32_t>(nv.left));
    }
  }
}

}  // namespace detail

/// First pass of the two-pass WSPD: counts[i] is the number of pairs found
/// under internal node tree.internal[i].
inline std::vector<std::uint64_t> count_pairs(const SplitTree& tree, double s, unsigned workers = 1) {
  std::vector<std::uint64_t> counts(tree.internal.size(), 0);
  parallel_for(tree.internal.size(), workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
    for (std::size_t i = begin; i < end; ++i) {
      std::uint64_t c = 0;
      detail::search_pairs(tree, tree.internal[i], s, stack, [&](std::uint32_t, std::uint32_t) { ++c; });
      counts[i] = c;
    }
  });
  return counts;
}

/// Second pass: every internal node rewrites its pairs into the disjoint range
/// [offsets[i], offsets[i] + counts[i]) of a preallocated array, where offsets
/// is the exclusive prefix sum of count_pairs and `total` its sum.
inline WSPairList write_pairs(const SplitTree& tree, double s, std::span<const std::uint64_t> offsets,
                              std::uint64_t total, unsigned workers = 1) {
  if (offsets.size() != tree.internal.size()) throw std::logic_error("write_pairs: offsets size mismatch");
  WSPairList pairs(total);
  parallel_for(tree.internal.size(), workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t limit = i + 1 < offsets.size() ? offsets[i + 1] : total;
      std::uint64_t slot = offsets[i];
      detail::search_pairs(tree, tree.internal[i], s, stack, [&](std::uint32_t u, std::uint32_t v) {
        if (slot >= limit) throw std::logic_error("write_pairs: offsets inconsistent with recount");
        pairs[slot++] = {u, v, tree.nodes[u].rep, tree.nodes[v].rep};
      });
      if (slot != limit) throw std::logic_error("write_pairs: offsets inconsistent with recount");
    }
  });
  return pairs;
}

/// s-WSPD of the tree's points: count, prefix-sum, write.
inline WSPairList build_wspd(const SplitTree& tree, double s, unsigned workers = 1) {
  if (!(s > 0.0)) throw InputError("WSPD separation s must be positive");
  std::vector<std::uint64_t> offsets = count_pairs(tree, s, workers);
  const std::uint64_t total = exclusive_scan_inplace(offsets);
  return write_pairs(tree, s, offsets, total, workers);
}

/// Directed arc of a transshipment network.
struct Arc {
  std::uint32_t tail = 0;
  std::uint32_t head = 0;
  double cost = 0.0;

  friend constexpr bool operator==(const Arc&, const Arc&) = default;
};

using ArcList = std::vector<Arc>;

/// Network node ids of the two diagonal nodes: they follow the planar nodes.
inline std::uint32_t abar_index(const SuppliedNodes& nodes) noexcept { return static_cast<std::uint32_t>(nodes.size()); }
inline std::uint32_t bbar_index(const SuppliedNodes& nodes) noexcept { return static_cast<std::uint32_t>(nodes.size() + 1); }

/// Diagonal arcs: (p, abar) for every node holding A mass, (bbar, p) for every
/// node holding B mass, each at the node's distance to the diagonal, plus the
/// free arc (bbar, abar).
inline void append_diagonal_arcs(const SuppliedNodes& nodes, ArcList& arcs) {
  const std::uint32_t abar = abar_index(nodes);
  const std::uint32_t bbar = bbar_index(nodes);
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    const double c = diagonal_distance(nodes.points[i]);
    if (nodes.in_a(i)) arcs.push_back({i, abar, c});
    if (nodes.in_b(i)) arcs.push_back({bbar, i, c});
  }
  arcs.push_back({bbar, abar, 0.0});
}

/// Spanner biarcs for every pair (both directions, Euclidean cost) followed by
/// the diagonal arcs.
inline ArcList emit_arcs(const WSPairList& pairs, const SuppliedNodes& nodes) {
  ArcList arcs;
  std::size_t diagonal = 1;
  for (std::size_t i = 0; i < nodes.size(); ++i) diagonal += (nodes.in_a(i) ? 1 : 0) + (nodes.in_b(i) ? 1 : 0);
  arcs.reserve(2 * pairs.size() + diagonal);
  for (const WSPair& p : pairs) {
    if (p.rep_u >= nodes.size() || p.rep_v >= nodes.size())
      throw std::logic_error("emit_arcs: pair references a point outside the node set");
    const double c = distance(nodes.points[p.rep_u], nodes.points[p.rep_v]);
    arcs.push_back({p.rep_u, p.rep_v, c});
    arcs.push_back({p.rep_v, p.rep_u, c});
  }
  append_diagonal_arcs(nodes, arcs);
  return arcs;
}

/// Stretch factor of the WSPD spanner with leftmost representatives.
inline double spanner_stretch(double s) noexcept { return 1.0 + 4.0 / s + 4.0 / (s - 2.0); }

}  // namespace pdflow
