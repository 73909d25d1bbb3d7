#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdflow/errors.hpp"
#include "pdflow/network.hpp"

namespace pdflow {

enum class SolveStatus { Optimal, AbortedStalling };

inline const char* to_string(SolveStatus s) noexcept {
  return s == SolveStatus::Optimal ? "optimal" : "aborted_stalling";
}

struct SolverOptions {
  std::size_t block_size = 0;  // 0: ceil(sqrt(m))
  double stop_c = 4.0;
  double stop_b = 1.0e5;
  double tolerance = 1.0e-9;  // reduced costs above -tolerance count as nonnegative
};

struct FlowResult {
  double objective = 0.0;
  std::vector<std::int64_t> flows;  // one per network arc
  SolveStatus status = SolveStatus::Optimal;
  std::uint64_t pivots = 0;
  std::uint64_t degenerate_pivots = 0;
  std::uint64_t blocks_searched = 0;
  std::vector<double> potentials;  // one per network node
};

/// Optional callback receiving every solved network, used by tests to audit
/// flows produced deep inside the pipeline.
using FlowInspector = std::function<void(const TransshipmentNetwork&, const FlowResult&)>;

inline double reduced_cost(double cost, double pi_tail, double pi_head) noexcept { return cost - pi_tail + pi_head; }

/// Budget of searched blocks before the solver gives up: ceil(C sqrt(mn)) + b.
inline std::uint64_t block_budget(std::size_t m, std::size_t n, double stop_c, double stop_b) {
  const double v = std::ceil(stop_c * std::sqrt(static_cast<double>(m) * static_cast<double>(n))) + std::ceil(stop_b);
  if (!(v < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::max(v, 1.0));
}

inline std::size_t default_block_size(std::size_t m) noexcept {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m)))));
}

/// Block search pricing over arcs [0, arc count). Starting at `cursor`, arcs
/// are scanned cyclically in blocks of `block_size`; the most negative reduced
/// cost in the first block holding one below -tolerance is returned. Basic
/// arcs (in_tree[e] != 0) are skipped. `cursor` moves past the chosen block and
/// `blocks` counts every block looked at, including a final partial one.
inline std::optional<std::uint32_t> find_entering_arc(const TransshipmentNetwork& net, std::span<const double> potentials,
                                                      std::span<const std::uint8_t> in_tree, std::size_t block_size,
                                                      std::size_t& cursor, std::uint64_t& blocks, double tolerance = 1.0e-9) {
  const std::size_t m = net.arc_count();
  if (m == 0) return std::nullopt;
  if (block_size == 0) block_size = default_block_size(m);
  if (cursor >= m) cursor = 0;
  double best = -tolerance;
  std::optional<std::uint32_t> found;
  std::size_t in_block = 0;
  std::size_t e = cursor;
  for (std::size_t scanned = 0; scanned < m; ++scanned) {
    if (!in_tree[e]) {
      const double rc = reduced_cost(net.costs[e], potentials[net.tails[e]], potentials[net.heads[e]]);
      if (rc < best) {
        best = rc;
        found = static_cast<std::uint32_t>(e);
      }
    }
    e = e + 1 == m ? 0 : e + 1;
    if (++in_block == block_size) {
      ++blocks;
      in_block = 0;
      if (found) {
        cursor = e;
        return found;
      }
    }
  }
  if (in_block > 0) ++blocks;
  if (found) cursor = e;
  return found;
}

namespace detail {

// Spanning tree basis over the network nodes plus an artificial root. Node
// `root` == n; the artificial arc of node u has id m + u.
class SimplexSolver {
 public:
  SimplexSolver(const TransshipmentNetwork& net, const SolverOptions& opt)
      : net_(net), opt_(opt), n_(net.node_count()), m_(net.arc_count()), root_(static_cast<std::uint32_t>(n_)) {
    const std::size_t total = m_ + n_;
    tail_.resize(total);
    head_.resize(total);
    cost_.resize(total);
    flow_.assign(total, 0);
    in_tree_.assign(total, 0);
    double max_cost = 0.0;
    for (std::size_t e = 0; e < m_; ++e) {
      tail_[e] = net.tails[e];
      head_[e] = net.heads[e];
      cost_[e] = net.costs[e];
      max_cost = std::max(max_cost, cost_[e]);
    }
    const double big = 1.0 + static_cast<double>(n_) * max_cost;

    parent_.assign(n_ + 1, none);
    pred_.assign(n_ + 1, none);
    depth_.assign(n_ + 1, 0);
    pi_.assign(n_ + 1, 0.0);
    first_child_.assign(n_ + 1, none);
    next_sib_.assign(n_ + 1, none);
    prev_sib_.assign(n_ + 1, none);
    for (std::uint32_t u = 0; u < n_; ++u) {
      const std::size_t e = m_ + u;
      const std::int64_t s = net.supplies[u];
      if (s >= 0) {
        tail_[e] = u;
        head_[e] = root_;
        flow_[e] = s;
        pi_[u] = big;
      } else {
        tail_[e] = root_;
        head_[e] = u;
        flow_[e] = -s;
        pi_[u] = -big;
      }
      cost_[e] = big;
      in_tree_[e] = 1;
      parent_[u] = root_;
      pred_[u] = static_cast<std::uint32_t>(e);
      depth_[u] = 1;
      link_child(root_, u);
    }
  }

  FlowResult run() {
    FlowResult r;
    const std::size_t block = opt_.block_size ? opt_.block_size : default_block_size(m_);
    const std::uint64_t budget = block_budget(m_, n_, opt_.stop_c, opt_.stop_b);
    std::size_t cursor = 0;
    r.status = SolveStatus::Optimal;
    for (;;) {
      // Past the budget, keep pivoting only while artificial arcs still carry
      // flow, so an aborted run still returns a feasible flow.
      if (r.blocks_searched >= budget && !artificial_flow()) {
        r.status = SolveStatus::AbortedStalling;
        break;
      }
      const auto in = find_entering_arc(net_, std::span<const double>(pi_.data(), n_),
                                        std::span<const std::uint8_t>(in_tree_.data(), m_), block, cursor,
                                        r.blocks_searched, opt_.tolerance);
      if (!in) break;
      if (pivot(*in)) ++r.degenerate_pivots;
      ++r.pivots;
    }

    for (std::uint32_t u = 0; u < n_; ++u)
      if (flow_[m_ + u] != 0)
        throw SolverError(std::string("artificial arc keeps flow at ") + to_string(r.status) + " termination");

    r.flows.assign(flow_.begin(), flow_.begin() + static_cast<std::ptrdiff_t>(m_));
    r.potentials.assign(pi_.begin(), pi_.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t e = 0; e < m_; ++e)
      if (flow_[e] != 0) r.objective += cost_[e] * static_cast<double>(flow_[e]);
    return r;
  }

 private:
  static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
  static constexpr std::int64_t unbounded = std::numeric_limits<std::int64_t>::max();

  bool artificial_flow() const noexcept {
    for (std::size_t u = 0; u < n_; ++u)
      if (flow_[m_ + u] != 0) return true;
    return false;
  }

  // True when the tree arc pred_[u] points from u to its parent.
  bool points_up(std::uint32_t u) const noexcept { return tail_[pred_[u]] == u; }

  void link_child(std::uint32_t p, std::uint32_t c) {
    prev_sib_[c] = none;
    next_sib_[c] = first_child_[p];
    if (first_child_[p] != none) prev_sib_[first_child_[p]] = c;
    first_child_[p] = c;
  }

  void unlink_child(std::uint32_t c) {
    const std::uint32_t p = parent_[c];
    if (prev_sib_[c] != none)
      next_sib_[prev_sib_[c]] = next_sib_[c];
    else
      first_child_[p] = next_sib_[c];
    if (next_sib_[c] != none) prev_sib_[next_sib_[c]] = prev_sib_[c];
    prev_sib_[c] = next_sib_[c] = none;
  }

  // Returns true for a degenerate pivot.
  bool pivot(std::uint32_t in_arc) {
    const std::uint32_t first = tail_[in_arc];
    const std::uint32_t second = head_[in_arc];

    std::uint32_t a = first, b = second;
    while (a != b) {
      if (depth_[a] >= depth_[b])
        a = parent_[a];
      else
        b = parent_[b];
    }
    const std::uint32_t join = a;

    // Flow moves along in_arc, up from `second` to the join, then down to
    // `first`. Strongly feasible leaving rule: strict on the first side,
    // non-strict on the second, so ties go to the arc nearest the join on the
    // second side.
    std::int64_t delta = unbounded;
    std::uint32_t u_out = none;
    int side = 0;
    for (std::uint32_t u = first; u != join; u = parent_[u]) {
      if (!points_up(u)) continue;  // flow increases
      if (flow_[pred_[u]] < delta) {
        delta = flow_[pred_[u]];
        u_out = u;
        side = 1;
      }
    }
    for (std::uint32_t u = second; u != join; u = parent_[u]) {
      if (points_up(u)) continue;
      if (flow_[pred_[u]] <= delta) {
        delta = flow_[pred_[u]];
        u_out = u;
        side = 2;
      }
    }
    if (u_out == none) throw SolverError("unbounded cycle: negative-cost cycle in network");

    if (delta > 0) {
      flow_[in_arc] += delta;
      for (std::uint32_t u = first; u != join; u = parent_[u]) flow_[pred_[u]] += points_up(u) ? -delta : delta;
      for (std::uint32_t u = second; u != join; u = parent_[u]) flow_[pred_[u]] += points_up(u) ? delta : -delta;
    }

    const std::uint32_t out_arc = pred_[u_out];
    in_tree_[out_arc] = 0;
    in_tree_[in_arc] = 1;

    // Hang the subtree cut off at u_out from the entering arc: u_in gets v_in
    // as parent and the stem u_in .. u_out is reversed.
    const std::uint32_t u_in = side == 1 ? first : second;
    const std::uint32_t v_in = side == 1 ? second : first;
    std::uint32_t u = u_in;
    std::uint32_t new_parent = v_in;
    std::uint32_t new_pred = in_arc;
    for (;;) {
      const std::uint32_t old_parent = parent_[u];
      const std::uint32_t old_pred = pred_[u];
      unlink_child(u);
      parent_[u] = new_parent;
      pred_[u] = new_pred;
      link_child(new_parent, u);
      if (u == u_out) break;
      new_parent = u;
      new_pred = old_pred;
      u = old_parent;
    }

    // Depth and potentials of the moved subtree follow from the new parents.
    stack_.clear();
    stack_.push_back(u_in);
    while (!stack_.empty()) {
      const std::uint32_t v = stack_.back();
      stack_.pop_back();
      const std::uint32_t p = parent_[v];
      const std::uint32_t e = pred_[v];
      depth_[v] = depth_[p] + 1;
      pi_[v] = tail_[e] == v ? pi_[p] + cost_[e] : pi_[p] - cost_[e];
      for (std::uint32_t c = first_child_[v]; c != none; c = next_sib_[c]) stack_.push_back(c);
    }
    return delta == 0;
  }

  const TransshipmentNetwork& net_;
  SolverOptions opt_;
  std::size_t n_, m_;
  std::uint32_t root_;
  std::vector<std::uint32_t> tail_, head_;
  std::vector<double> cost_;
  std::vector<std::int64_t> flow_;
  std::vector<std::uint8_t> in_tree_;
  std::vector<std::uint32_t> parent_, pred_, depth_;
  std::vector<double> pi_;
  std::vector<std::uint32_t> first_child_, next_sib_, prev_sib_;
  std::vector<std::uint32_t> stack_;
};

}  // namespace detail

/// Uncapacitated min-cost flow by primal network simplex with block search
/// pricing. Stops with AbortedStalling once the block budget
/// ceil(stop_c * sqrt(m n)) + stop_b is used up and no artificial arc carries
/// flow; the returned flow is feasible either way.
inline FlowResult solve(const TransshipmentNetwork& net, const SolverOptions& opt = {}) {
  std::int64_t balance = 0;
  for (const std::int64_t s : net.supplies) balance += s;
  if (balance != 0) throw InputError("unbalanced supplies");
  if (net.node_count() >= std::numeric_limits<std::uint32_t>::max() - 1) throw InputError("too many nodes");
  detail::SimplexSolver solver(net, opt);
  return solver.run();
}

/// Checks a FlowResult against its network: nonnegative flows, conservation at
/// every node, objective consistent with the flows and, for Optimal results,
/// reduced costs >= -tolerance under the returned potentials. Returns an empty
/// string when everything holds, else a description of the first violation.
inline std::string check_flow(const TransshipmentNetwork& net, const FlowResult& r, double tolerance = 1.0e-9) {
  const std::size_t m = net.arc_count();
  if (r.flows.size() != m) return "flow vector size " + std::to_string(r.flows.size()) + " != " + std::to_string(m);
  std::vector<std::int64_t> excess(net.supplies);
  double objective = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    if (r.flows[e] < 0) return "negative flow on arc " + std::to_string(e);
    excess[net.tails[e]] -= r.flows[e];
    excess[net.heads[e]] += r.flows[e];
    objective += net.costs[e] * static_cast<double>(r.flows[e]);
  }
  for (std::size_t u = 0; u < excess.size(); ++u)
    if (excess[u] != 0) return "conservation violated at node " + std::to_string(u);
  if (std::abs(objective - r.objective) > 1e-9 * std::max(1.0, std::abs(objective))) return "objective mismatch";
  if (r.status == SolveStatus::Optimal) {
    if (r.potentials.size() != net.node_count()) return "missing potentials";
    for (std::size_t e = 0; e < m; ++e) {
      const double rc = reduced_cost(net.costs[e], r.potentials[net.tails[e]], r.potentials[net.heads[e]]);
      if (rc < -tolerance) return "negative reduced cost " + std::to_string(rc) + " on arc " + std::to_string(e);
    }
  }
  return {};
}

}  // namespace pdflow
