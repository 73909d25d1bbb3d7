#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pdflow/diagram.hpp"
#include "pdflow/errors.hpp"
#include "pdflow/network.hpp"
#include "pdflow/simplex.hpp"
#include "pdflow/spanner.hpp"

namespace pdflow {

inline constexpr std::size_t bruteforce_point_limit = 12;
inline constexpr std::size_t dense_arc_limit = 10'000'000;

/// Exact W1 by enumerating every partial matching of A into B. Unmatched points
/// on either side pay their diagonal distance.
inline double exact_w1_bruteforce(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.size() + b.size() > bruteforce_point_limit)
    throw SizeGuardError("brute-force oracle limited to " + std::to_string(bruteforce_point_limit) + " points, got " +
                         std::to_string(a.size() + b.size()));
  std::vector<double> diag_b(b.size());
  double all_b = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) all_b += diag_b[j] = diagonal_distance(b.points[j]);

  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  // cost so far covers A[0..i) plus every matched B point's match cost;
  // unmatched_b is the diagonal cost of B points still free.
  const auto rec = [&](auto&& self, std::size_t i, double cost, double unmatched_b) -> void {
    if (i == a.size()) {
      best = std::min(best, cost + unmatched_b);
      return;
    }
    const PDPoint& p = a.points[i];
    self(self, i + 1, cost + diagonal_distance(p), unmatched_b);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      self(self, i + 1, cost + distance(p.as_point(), b.points[j].as_point()), unmatched_b - diag_b[j]);
      used[j] = false;
    }
  };
  rec(rec, 0, 0.0, all_b);
  return best;
}

/// Complete transshipment network of a node set: every A-holding node to every
/// other B-holding node, plus the diagonal arcs.
inline TransshipmentNetwork dense_network(const SuppliedNodes& nodes) {
  std::size_t na = 0, nb = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    na += nodes.in_a(i);
    nb += nodes.in_b(i);
  }
  if (na * nb + na + nb + 1 > dense_arc_limit)
    throw SizeGuardError("dense oracle would need more than " + std::to_string(dense_arc_limit) + " arcs");
  ArcList arcs;
  arcs.reserve(na * nb + na + nb + 1);
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (!nodes.in_a(i)) continue;
    for (std::uint32_t j = 0; j < nodes.size(); ++j)
      if (j != i && nodes.in_b(j)) arcs.push_back({i, j, distance(nodes.points[i], nodes.points[j])});
  }
  append_diagonal_arcs(nodes, arcs);
  return assemble(nodes, std::move(arcs));
}

/// Solver settings for exact runs: no stalling budget.
inline SolverOptions exact_solver_options() {
  SolverOptions opt;
  opt.stop_c = 1.0e12;
  opt.stop_b = 1.0e15;
  return opt;
}

/// Exact min-cost flow value of the dense network over (possibly condensed)
/// nodes.
inline double exact_w1_nodes(const SuppliedNodes& nodes, const FlowInspector& inspect = {}) {
  if (nodes.empty()) return 0.0;
  const TransshipmentNetwork net = dense_network(nodes);
  const FlowResult r = solve(net, exact_solver_options());
  if (r.status != SolveStatus::Optimal) throw SolverError("exact solve did not reach optimality");
  if (inspect) inspect(net, r);
  return r.objective;
}

/// Exact W1 via the 0-condensed complete transshipment network.
inline double exact_w1_dense(const PersistenceDiagram& a, const PersistenceDiagram& b,
                             const FlowInspector& inspect = {}) {
  return exact_w1_nodes(zero_condense(a, b), inspect);
}

}  // namespace pdflow
