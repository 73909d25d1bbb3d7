#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pdflow/diagram.hpp"
#include "pdflow/errors.hpp"
#include "pdflow/parallel.hpp"
#include "pdflow/spanner.hpp"

namespace pdflow {

/// Static transshipment network: arcs sorted by (tail, head) with per-node row
/// offsets. Positive supply is a source, negative a demand.
struct TransshipmentNetwork {
  std::vector<std::int64_t> supplies;
  std::vector<std::uint32_t> tails;
  std::vector<std::uint32_t> heads;
  std::vector<double> costs;
  std::vector<std::size_t> row_offsets;  // node_count() + 1 entries

  std::size_t node_count() const noexcept { return supplies.size(); }
  std::size_t arc_count() const noexcept { return tails.size(); }

  /// Arc ids leaving node u are [row_offsets[u], row_offsets[u + 1]).
  std::size_t out_begin(std::uint32_t u) const noexcept { return row_offsets[u]; }
  std::size_t out_end(std::uint32_t u) const noexcept { return row_offsets[u + 1]; }
};

/// Sorts and deduplicates the arcs and lays them out in CSR order. Parallel
/// duplicates keep the cheaper cost, self-loops are dropped.
inline TransshipmentNetwork assemble(std::vector<std::int64_t> supplies, ArcList arcs, unsigned workers = 1) {
  const std::size_t n = supplies.size();
  std::int64_t balance = 0;
  for (const std::int64_t s : supplies) balance += s;
  if (balance != 0) throw InputError("unbalanced supplies: total " + std::to_string(balance));
  for (const Arc& a : arcs) {
    if (a.tail >= n || a.head >= n)
      throw InputError("arc (" + std::to_string(a.tail) + ", " + std::to_string(a.head) + ") references a missing node");
    if (!std::isfinite(a.cost) || a.cost < 0.0) throw InputError("arc cost must be finite and >= 0");
  }

  // (tail, head, cost) is a total order, so equal keys keep the cheapest arc
  // first and the sort result is unique.
  parallel_sort(arcs, workers, [](const Arc& l, const Arc& r) {
    if (l.tail != r.tail) return l.tail < r.tail;
    if (l.head != r.head) return l.head < r.head;
    return l.cost < r.cost;
  });

  TransshipmentNetwork net;
  net.supplies = std::move(supplies);
  net.tails.reserve(arcs.size());
  net.heads.reserve(arcs.size());
  net.costs.reserve(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = arcs[i];
    if (a.tail == a.head) continue;
    if (!net.tails.empty() && net.tails.back() == a.tail && net.heads.back() == a.head) continue;
    net.tails.push_back(a.tail);
    net.heads.push_back(a.head);
    net.costs.push_back(a.cost);
  }
  net.row_offsets.assign(n + 1, 0);
  for (const std::uint32_t t : net.tails) ++net.row_offsets[t + 1];
  for (std::size_t u = 0; u < n; ++u) net.row_offsets[u + 1] += net.row_offsets[u];
  return net;
}

/// Node supplies of a condensed node set followed by abar and bbar.
inline std::vector<std::int64_t> network_supplies(const SuppliedNodes& nodes) {
  std::vector<std::int64_t> s;
  s.reserve(nodes.size() + 2);
  for (std::size_t i = 0; i < nodes.size(); ++i) s.push_back(nodes.supply(i));
  s.push_back(nodes.abar_supply);
  s.push_back(nodes.bbar_supply);
  return s;
}

inline TransshipmentNetwork assemble(const SuppliedNodes& nodes, ArcList arcs, unsigned workers = 1) {
  return assemble(network_supplies(nodes), std::move(arcs), workers);
}

/// Debug dump:
///   network <n> <m>
///   supplies s_0 ... s_{n-1}
///   tail head cost        (m lines)
inline void write_network(std::ostream& out, const TransshipmentNetwork& net) {
  out << "network " << net.node_count() << ' ' << net.arc_count() << '\n' << "supplies";
  for (const std::int64_t s : net.supplies) out << ' ' << s;
  out << '\n';
  char buf[96];
  for (std::size_t e = 0; e < net.arc_count(); ++e) {
    const int len = std::snprintf(buf, sizeof buf, "%u %u %.17g\n", net.tails[e], net.heads[e], net.costs[e]);
    out.write(buf, len);
  }
}

inline std::string dump_network(const TransshipmentNetwork& net) {
  std::ostringstream out;
  write_network(out, net);
  return out.str();
}

/// Reads a dump back and re-assembles it (so it is validated again).
inline TransshipmentNetwork read_network(std::istream& in) {
  std::string word;
  std::size_t n = 0, m = 0;
  if (!(in >> word >> n >> m) || word != "network") throw InputError("bad network header");
  if (!(in >> word) || word != "supplies") throw InputError("missing supplies line");
  std::vector<std::int64_t> supplies(n);
  for (auto& s : supplies)
    if (!(in >> s)) throw InputError("truncated supplies line");
  ArcList arcs(m);
  for (std::size_t e = 0; e < m; ++e)
    if (!(in >> arcs[e].tail >> arcs[e].head >> arcs[e].cost)) throw InputError("truncated arc list", e + 3);
  return assemble(std::move(supplies), std::move(arcs));
}

}  // namespace pdflow
