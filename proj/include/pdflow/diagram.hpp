#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pdflow/errors.hpp"
#include "pdflow/geometry.hpp"

namespace pdflow {

/// One off-diagonal point of a persistence diagram.
struct PDPoint {
  double birth = 0.0;
  double death = 0.0;

  Point2 as_point() const noexcept { return {birth, death}; }

  friend constexpr bool operator==(const PDPoint&, const PDPoint&) = default;
  friend constexpr auto operator<=>(const PDPoint&, const PDPoint&) = default;
};

/// Multiset of off-diagonal points. The diagonal itself is implicit.
struct PersistenceDiagram {
  std::vector<PDPoint> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

inline Point2 diagonal_projection(const PDPoint& p) noexcept {
  return diagonal_projection(p.as_point());
}

inline double diagonal_distance(const PDPoint& p) noexcept {
  return (p.death - p.birth) / std::numbers::sqrt2;
}

struct ParsedDiagram {
  PersistenceDiagram diagram;
  std::size_t dropped_zero_persistence = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view token, std::size_t line) {
  // from_chars does not accept a leading '+'.
  std::string_view digits = token;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec == std::errc::result_out_of_range) throw InputError("non-finite coordinate '" + std::string(token) + "'", line);
  if (ec != std::errc{} || end != digits.data() + digits.size())
    throw InputError("non-numeric token '" + std::string(token) + "'", line);
  if (!std::isfinite(value)) throw InputError("non-finite coordinate '" + std::string(token) + "'", line);
  return value;
}

}  // namespace detail

/// Reads the text diagram format: one "birth death" pair per line, '#'
/// comments and blank lines ignored, repeated lines encode multiplicity.
/// Zero-persistence points are dropped and counted; anything else that is
/// not a finite point strictly above the diagonal rejects the whole input.
inline ParsedDiagram parse_diagram(std::istream& in) {
  ParsedDiagram out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
      if (end > pos) tokens.push_back(line.substr(pos, end - pos));
      pos = end;
    }
    if (tokens.size() != 2)
      throw InputError("expected 2 numbers per line, found " + std::to_string(tokens.size()), line_no);

    const double birth = detail::parse_real(tokens[0], line_no);
    const double death = detail::parse_real(tokens[1], line_no);
    if (death < birth) throw InputError("death < birth", line_no);
    if (death == birth) {
      ++out.dropped_zero_persistence;
      continue;
    }
    out.diagram.points.push_back({birth, death});
  }
  return out;
}

inline ParsedDiagram parse_diagram(std::string_view text) {
  std::string copy(text);
  std::istringstream in(copy);
  return parse_diagram(in);
}

inline ParsedDiagram read_diagram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open diagram file '" + path + "'");
  return parse_diagram(in);
}

/// Writes the diagram in the text format with round-trip precision.
inline void write_diagram(std::ostream& out, const PersistenceDiagram& d) {
  char buf[64];
  for (const PDPoint& p : d.points) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.birth, p.death);
    out.write(buf, n);
  }
}

inline std::string serialize_diagram(const PersistenceDiagram& d) {
  std::ostringstream out;
  write_diagram(out, d);
  return out.str();
}

/// Deduplicated planar nodes with the multiplicities of each diagram at every
/// coordinate. A coordinate occupied by points of both diagrams is a single
/// node carrying both counts; its net supply is a_count - b_count.
///
/// The two diagonal nodes are implicit: abar absorbs the A mass that is sent to
/// the diagonal (supply -|A|), bbar emits the B mass that comes from it
/// (supply +|B|).
struct SuppliedNodes {
  std::vector<Point2> points;
  std::vector<std::int64_t> a_count;
  std::vector<std::int64_t> b_count;
  std::int64_t abar_supply = 0;
  std::int64_t bbar_supply = 0;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  std::int64_t supply(std::size_t i) const noexcept { return a_count[i] - b_count[i]; }
  bool in_a(std::size_t i) const noexcept { return a_count[i] > 0; }
  bool in_b(std::size_t i) const noexcept { return b_count[i] > 0; }
  bool dual_membership(std::size_t i) const noexcept { return in_a(i) && in_b(i); }

  std::int64_t total_supply() const noexcept {
    std::int64_t total = abar_supply + bbar_supply;
    for (std::size_t i = 0; i < size(); ++i) total += supply(i);
    return total;
  }

  /// |A| + |B|: number of off-diagonal points the nodes stand for.
  std::int64_t point_count() const noexcept {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < size(); ++i) total += a_count[i] + b_count[i];
    return total;
  }

  /// True when every node is balanced on its own, i.e. the two diagrams hold
  /// exactly the same multiset of points and W1 is zero.
  bool all_cancelled() const noexcept {
    for (std::size_t i = 0; i < size(); ++i)
      if (supply(i) != 0) return false;
    return true;
  }
};

/// Merges coincident points of A and B into nodes (0-condensation). Nodes come
/// out sorted by coordinate.
inline SuppliedNodes zero_condense(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  struct Tagged {
    Point2 p;
    bool from_a;
  };
  std::vector<Tagged> all;
  all.reserve(a.size() + b.size());
  for (const PDPoint& p : a.points) all.push_back({p.as_point(), true});
  for (const PDPoint& p : b.points) all.push_back({p.as_point(), false});
  std::sort(all.begin(), all.end(), [](const Tagged& l, const Tagged& r) { return l.p < r.p; });

  SuppliedNodes nodes;
  for (const Tagged& t : all) {
    if (nodes.points.empty() || !(nodes.points.back() == t.p)) {
      nodes.points.push_back(t.p);
      nodes.a_count.push_back(0);
      nodes.b_count.push_back(0);
    }
    (t.from_a ? nodes.a_count : nodes.b_count).back() += 1;
  }
  nodes.abar_supply = -static_cast<std::int64_t>(a.size());
  nodes.bbar_supply = static_cast<std::int64_t>(b.size());
  return nodes;
}

}  // namespace pdflow
