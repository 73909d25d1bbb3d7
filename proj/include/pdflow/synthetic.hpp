#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "pdflow/diagram.hpp"

namespace pdflow {

/// Random diagram made of Gaussian clusters above the diagonal. Cluster
/// centres have birth in [0, extent) and persistence in [0.1, 0.6) * extent;
/// samples that land on or below the diagonal are drawn again.
struct ClusterModel {
  std::size_t clusters = 8;
  double extent = 100.0;
  double sigma = 2.0;  // per-axis standard deviation inside a cluster
};

inline PersistenceDiagram gaussian_cluster_diagram(std::size_t points, std::uint64_t seed, const ClusterModel& model = {}) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> birth(0.0, model.extent);
  std::uniform_real_distribution<double> persistence(0.1 * model.extent, 0.6 * model.extent);
  std::vector<PDPoint> centres(std::max<std::size_t>(model.clusters, 1));
  for (PDPoint& c : centres) {
    c.birth = birth(gen);
    c.death = c.birth + persistence(gen);
  }
  std::uniform_int_distribution<std::size_t> pick(0, centres.size() - 1);
  std::normal_distribution<double> noise(0.0, model.sigma);

  PersistenceDiagram d;
  d.points.reserve(points);
  while (d.points.size() < points) {
    const PDPoint& c = centres[pick(gen)];
    const PDPoint p{c.birth + noise(gen), c.death + noise(gen)};
    if (p.death > p.birth) d.points.push_back(p);
  }
  return d;
}

/// Uniform points in the triangle 0 <= birth < death <= extent.
inline PersistenceDiagram uniform_diagram(std::size_t points, std::uint64_t seed, double extent = 100.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, extent);
  PersistenceDiagram d;
  d.points.reserve(points);
  while (d.points.size() < points) {
    double x = u(gen), y = u(gen);
    if (x == y) continue;
    if (x > y) std::swap(x, y);
    d.points.push_back({x, y});
  }
  return d;
}

}  // namespace pdflow
