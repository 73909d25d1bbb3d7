#pragma once

// Test-side helpers: a successive shortest paths min-cost flow reference that
// shares no code with the simplex, and small random diagram generators.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "pdflow/diagram.hpp"
#include "pdflow/spanner.hpp"

namespace pdflow::test_support {

// Uncapacitated min-cost flow by successive shortest paths (Bellman-Ford on
// the residual graph). Meant for tiny networks only.
inline double ssp_min_cost(const std::vector<std::int64_t>& supplies, const ArcList& arcs) {
  const int n = static_cast<int>(supplies.size());
  const int src = n, snk = n + 1, total = n + 2;
  struct Edge {
    int to;
    std::int64_t cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Edge>> g(total);
  const std::int64_t inf_cap = std::numeric_limits<std::int64_t>::max() / 4;
  const auto add = [&](int u, int v, std::int64_t cap, double cost) {
    g[u].push_back({v, cap, cost, static_cast<int>(g[v].size())});
    g[v].push_back({u, 0, -cost, static_cast<int>(g[u].size()) - 1});
  };
  std::int64_t need = 0;
  for (int u = 0; u < n; ++u) {
    if (supplies[u] > 0) {
      add(src, u, supplies[u], 0.0);
      need += supplies[u];
    } else if (supplies[u] < 0) {
      add(u, snk, -supplies[u], 0.0);
    }
  }
  for (const Arc& a : arcs) add(static_cast<int>(a.tail), static_cast<int>(a.head), inf_cap, a.cost);

  double cost = 0.0;
  while (need > 0) {
    std::vector<double> dist(total, std::numeric_limits<double>::infinity());
    std::vector<int> prev_node(total, -1), prev_edge(total, -1);
    dist[src] = 0.0;
    for (int round = 0; round < total; ++round) {
      bool changed = false;
      for (int u = 0; u < total; ++u) {
        if (dist[u] == std::numeric_limits<double>::infinity()) continue;
        for (int i = 0; i < static_cast<int>(g[u].size()); ++i) {
          const Edge& e = g[u][i];
          if (e.cap > 0 && dist[u] + e.cost < dist[e.to] - 1e-12) {
            dist[e.to] = dist[u] + e.cost;
            prev_node[e.to] = u;
            prev_edge[e.to] = i;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (prev_node[snk] < 0) throw std::runtime_error("ssp: infeasible");
    std::int64_t push = need;
    for (int v = snk; v != src; v = prev_node[v]) push = std::min(push, g[prev_node[v]][prev_edge[v]].cap);
    for (int v = snk; v != src; v = prev_node[v]) {
      Edge& e = g[prev_node[v]][prev_edge[v]];
      e.cap -= push;
      g[v][e.rev].cap += push;
    }
    cost += static_cast<double>(push) * dist[snk];
    need -= push;
  }
  return cost;
}

// Up to max_points points per diagram. With grid > 0, coordinates are
// integers in [0, grid] so coincident points inside and across diagrams are
// common; otherwise coordinates are continuous in [0, 10).
inline PersistenceDiagram random_small_diagram(std::mt19937_64& rng, std::size_t max_points, int grid = 0,
                                               std::size_t min_points = 0) {
  std::uniform_int_distribution<std::size_t> count(min_points, max_points);
  const std::size_t n = count(rng);
  PersistenceDiagram d;
  std::uniform_int_distribution<int> gi(0, std::max(grid, 1));
  std::uniform_real_distribution<double> gr(0.0, 10.0);
  while (d.points.size() < n) {
    double x = grid > 0 ? gi(rng) : gr(rng);
    double y = grid > 0 ? gi(rng) : gr(rng);
    if (x == y) continue;
    if (x > y) std::swap(x, y);
    d.points.push_back({x, y});
  }
  return d;
}

inline std::vector<Point2> random_planar_points(std::mt19937_64& rng, std::size_t n, double extent = 100.0) {
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<Point2> pts;
  while (pts.size() < n) {
    const Point2 p{u(rng), u(rng)};
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  return pts;
}

}  // namespace pdflow::test_support
