#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pdflow/condensation.hpp"
#include "pdflow/lower_bound.hpp"
#include "pdflow/oracle.hpp"
#include "pdflow/synthetic.hpp"
#include "support/support.hpp"

using namespace pdflow;

TEST(ComputeDelta, Formula) {
  // epsilon = 8 / (40 - 4)
  EXPECT_NEAR(compute_delta(8.0 / 36, 2, 3), 0.209513, 1e-6);
  EXPECT_NEAR(compute_delta(1, 2, 3), 0.942809, 1e-6);
  EXPECT_EQ(compute_delta(0.5, 0, 3), 0.0);
  EXPECT_THROW(compute_delta(0, 1, 3), InputError);
  EXPECT_THROW(compute_delta(-1, 1, 3), InputError);
}

TEST(ComputeDelta, EpsilonFromS) {
  EXPECT_NEAR(condensation_epsilon(40), 8.0 / 36, 1e-15);
  EXPECT_EQ(condensation_epsilon(12), 1.0);
  EXPECT_EQ(condensation_epsilon(11.9), 1.0);
  EXPECT_EQ(condensation_epsilon(3), 1.0);
}

TEST(SnapPoint, Examples) {
  const Point2 a = snap_point({0, 2.01}, 0.1);
  const Point2 b = snap_point({0, 1.99}, 0.1);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a.y, 1.98, 1e-12);
  EXPECT_EQ(a.x, 0.0);
  const Point2 lattice{0.099 * 3, 0.099 * 7};
  EXPECT_EQ(snap_point(lattice, 0.1), lattice);
}

namespace {

SuppliedNodes make_nodes(std::vector<Point2> pts, std::vector<std::int64_t> a, std::vector<std::int64_t> b) {
  SuppliedNodes n;
  n.points = std::move(pts);
  n.a_count = std::move(a);
  n.b_count = std::move(b);
  for (auto c : n.a_count) n.abar_supply -= c;
  for (auto c : n.b_count) n.bbar_supply += c;
  return n;
}

}  // namespace

TEST(DeltaCondense, MergesSnappedNodes) {
  const auto in = make_nodes({{0, 2.01}, {0, 1.99}}, {1, 1}, {0, 0});
  const auto out = delta_condense(in, {1.0, 0.1, 0.99, 42});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.supply(0), 2);
  EXPECT_NEAR(out.points[0].x, 0.0, 0.0005 + 1e-15);
  EXPECT_NEAR(out.points[0].y, 1.98, 0.0005 + 1e-15);
  EXPECT_EQ(out.abar_supply, -2);
}

TEST(DeltaCondense, ZeroDeltaIsIdentity) {
  const auto in = make_nodes({{0, 2}, {1, 3}}, {1, 0}, {0, 1});
  const auto out = delta_condense(in, {1.0, 0.0, 0.99, 1});
  EXPECT_EQ(out.points, in.points);
  EXPECT_EQ(out.a_count, in.a_count);
  EXPECT_EQ(out.b_count, in.b_count);
}

TEST(DeltaCondense, CrossDiagramMergeKeepsBothMemberships) {
  const auto in = make_nodes({{0, 2.01}, {0, 1.99}}, {1, 0}, {0, 1});
  const auto out = delta_condense(in, {1.0, 0.1, 0.99, 0});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.supply(0), 0);
  EXPECT_TRUE(out.dual_membership(0));
}

TEST(DeltaCondense, RejectsBadParams) {
  const auto in = make_nodes({{0, 2}}, {1}, {0});
  EXPECT_THROW(delta_condense(in, {1.0, 0.1, 1.0, 0}), InputError);
  EXPECT_THROW(delta_condense(in, {1.0, 0.1, 0.4, 0}), InputError);
  EXPECT_THROW(delta_condense(in, {1.0, -0.1, 0.99, 0}), InputError);
}

TEST(DeltaCondense, ConservationDisplacementDeterminism) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const auto a = test_support::random_small_diagram(rng, 20, t % 2 ? 8 : 0);
    const auto b = test_support::random_small_diagram(rng, 20, t % 2 ? 8 : 0);
    const auto zero = zero_condense(a, b);
    std::uniform_real_distribution<double> dd(0.01, 3.0);
    const CondensationParams params{1.0, dd(rng), 0.99, rng()};
    const auto out = delta_condense(zero, params);

    EXPECT_EQ(out.total_supply(), 0);
    EXPECT_EQ(out.abar_supply, zero.abar_supply);
    EXPECT_EQ(out.bbar_supply, zero.bbar_supply);
    std::int64_t ain = 0, bin = 0, aout = 0, bout = 0;
    for (std::size_t i = 0; i < zero.size(); ++i) ain += zero.a_count[i], bin += zero.b_count[i];
    for (std::size_t i = 0; i < out.size(); ++i) aout += out.a_count[i], bout += out.b_count[i];
    EXPECT_EQ(ain, aout);
    EXPECT_EQ(bin, bout);
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
      for (std::size_t j = i + 1; j < out.size(); ++j) EXPECT_NE(out.points[i], out.points[j]);

    // Each original point is within sqrt(2) delta / 2 of some output node
    // holding mass of its diagram.
    for (std::size_t i = 0; i < zero.size(); ++i) {
      double best = INFINITY;
      for (std::size_t j = 0; j < out.size(); ++j)
        if ((zero.in_a(i) && out.in_a(j)) || (zero.in_b(i) && out.in_b(j)))
          best = std::min(best, distance(zero.points[i], out.points[j]));
      EXPECT_LE(best, std::sqrt(2.0) * params.delta / 2 + 1e-12);
    }

    const auto again = delta_condense(zero, params);
    EXPECT_EQ(again.points, out.points);
    EXPECT_EQ(again.a_count, out.a_count);
  }
}

TEST(DeltaCondense, ErrorBoundAgainstOracle) {
  std::mt19937_64 rng(23);
  for (const double eps : {0.2, 0.5, 1.0}) {
    for (int t = 0; t < 40; ++t) {
      const auto a = test_support::random_small_diagram(rng, 12, 0, 1);
      const auto b = test_support::random_small_diagram(rng, 12, 0, 1);
      const auto zero = zero_condense(a, b);
      const double w = exact_w1_nodes(zero);
      const double l = rwmd(zero);
      const double delta = compute_delta(eps, l, static_cast<std::int64_t>(a.size() + b.size()));
      const double wd = exact_w1_nodes(delta_condense(zero, {eps, delta, 0.99, static_cast<std::uint64_t>(t)}));
      EXPECT_LE(std::abs(wd - w), eps * w + 1e-9);
    }
  }
}

TEST(DeltaCondense, DenserClustersDropMoreNodes) {
  // Same delta, same number of clusters, shrinking spread.
  const double delta = 0.5;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    double previous = -1.0;
    for (const double sigma : {8.0, 4.0, 2.0, 1.0, 0.5}) {
      ClusterModel m;
      m.sigma = sigma;
      m.clusters = 4;
      const auto a = gaussian_cluster_diagram(400, seed, m);
      const auto zero = zero_condense(a, {});
      const auto out = delta_condense(zero, {1.0, delta, 0.99, seed});
      const double drop = node_drop_fraction(zero.point_count(), out.size());
      EXPECT_GE(drop, previous);
      previous = drop;
    }
  }
}
