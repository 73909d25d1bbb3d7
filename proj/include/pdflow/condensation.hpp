#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "pdflow/diagram.hpp"
#include "pdflow/errors.hpp"

namespace pdflow {

/// Parameters of the lattice snapping. `delta` is the lattice pitch base; the
/// lattice spacing is k * delta and every condensed point is then shifted by at
/// most (1 - k) * delta / 2 along each axis.
struct CondensationParams {
  double epsilon = 1.0;
  double delta = 0.0;
  double k = 0.99;
  std::uint64_t seed = 0;
};

/// Lattice pitch giving a (1 +- epsilon) relative error for a lower bound L on
/// W1 between diagrams with n_points off-diagonal points in total.
inline double compute_delta(double epsilon, double lower_bound, std::int64_t n_points) {
  if (!(epsilon > 0.0)) throw InputError("condensation epsilon must be positive");
  if (lower_bound == 0.0) return 0.0;
  if (n_points < 1) throw InputError("condensation needs at least one point");
  return 2.0 * epsilon * lower_bound / (std::numbers::sqrt2 * static_cast<double>(n_points));
}

/// Relative error used for condensation at sparsity s: 8 / (s - 4) once the
/// spanner bound is meaningful (s >= 12), else 1.
inline double condensation_epsilon(double s) noexcept { return s >= 12.0 ? 8.0 / (s - 4.0) : 1.0; }

/// Rounds both coordinates to the nearest multiple of k * delta (halves away
/// from zero).
inline Point2 snap_point(const Point2& p, double delta, double k = 0.99) {
  const double pitch = k * delta;
  return {pitch * std::round(p.x / pitch), pitch * std::round(p.y / pitch)};
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Random shift for the lattice cell (ix, iy). Derived from the seed and the
// cell alone, so it does not depend on processing order.
inline Point2 lattice_shift(std::uint64_t seed, std::int64_t ix, std::int64_t iy, double half_width) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(ix));
  h = splitmix64(h ^ static_cast<std::uint64_t>(iy) * 0xD6E8FEB86659FD93ull);
  std::mt19937_64 gen(h);
  std::uniform_real_distribution<double> u(-half_width, half_width);
  const double dx = u(gen);
  const double dy = u(gen);
  return {dx, dy};
}

}  // namespace detail

/// Snaps every node to the k*delta lattice, merges nodes sharing a lattice
/// point (A and B multiplicities are summed separately, so net supplies add
/// up), then shifts each merged node by an independent uniform offset in
/// [-(1-k)delta/2, (1-k)delta/2]^2. Diagonal supplies are unchanged.
///
/// Every original point stays within sqrt(2)*delta/2 of its representative.
/// With delta == 0, or a lattice finer than the coordinates' resolution, the
/// input is returned unchanged.
inline SuppliedNodes delta_condense(const SuppliedNodes& nodes, const CondensationParams& params) {
  if (!(params.k >= 0.5 && params.k < 1.0)) throw InputError("lattice fraction k must lie in [0.5, 1)");
  if (params.delta < 0.0 || !std::isfinite(params.delta)) throw InputError("delta must be finite and >= 0");
  if (params.delta == 0.0 || nodes.empty()) return nodes;

  const double pitch = params.k * params.delta;
  constexpr double max_cell = 9.0e15;  // cell indices stay exact in a double

  struct Cell {
    std::int64_t ix, iy;
    std::size_t node;
  };
  std::vector<Cell> cells;
  cells.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double fx = std::round(nodes.points[i].x / pitch);
    const double fy = std::round(nodes.points[i].y / pitch);
    if (!(std::abs(fx) < max_cell && std::abs(fy) < max_cell)) return nodes;
    cells.push_back({static_cast<std::int64_t>(fx), static_cast<std::int64_t>(fy), i});
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.ix, a.iy, a.node) < std::tie(b.ix, b.iy, b.node);
  });

  const double half_width = (1.0 - params.k) * params.delta / 2.0;
  SuppliedNodes out;
  out.abar_supply = nodes.abar_supply;
  out.bbar_supply = nodes.bbar_supply;
  for (std::size_t c = 0; c < cells.size();) {
    std::size_t e = c;
    std::int64_t a = 0, b = 0;
    while (e < cells.size() && cells[e].ix == cells[c].ix && cells[e].iy == cells[c].iy) {
      a += nodes.a_count[cells[e].node];
      b += nodes.b_count[cells[e].node];
      ++e;
    }
    const Point2 shift = detail::lattice_shift(params.seed, cells[c].ix, cells[c].iy, half_width);
    out.points.push_back({pitch * static_cast<double>(cells[c].ix) + shift.x,
                          pitch * static_cast<double>(cells[c].iy) + shift.y});
    out.a_count.push_back(a);
    out.b_count.push_back(b);
    c = e;
  }
  return out;
}

/// Fraction of the |A| + |B| input points that no longer have a node of their
/// own after condensation.
inline double node_drop_fraction(std::int64_t point_count, std::size_t node_count) noexcept {
  if (point_count <= 0) return 0.0;
  return 1.0 - static_cast<double>(node_count) / static_cast<double>(point_count);
}

}  // namespace pdflow
