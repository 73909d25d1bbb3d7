#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pdflow/pipeline.hpp"
#include "pdflow/synthetic.hpp"
#include "support/support.hpp"

using namespace pdflow;

TEST(ErrorFactor, Values) {
  EXPECT_NEAR(total_error_factor(40), 0.47310, 5e-6);
  EXPECT_NEAR(total_error_factor(93), 0.18467, 5e-6);
  EXPECT_NEAR(total_error_factor(39), 0.4874, 5e-5);
  EXPECT_NEAR(total_error_factor(87), 0.19839, 5e-6);
  EXPECT_NEAR(total_error_factor(12), 2.46667, 5e-6);
  EXPECT_THROW(total_error_factor(4), InputError);
  double prev = total_error_factor(4.01);
  for (double s = 4.1; s < 2000; s *= 1.05) {
    const double f = total_error_factor(s);
    EXPECT_LT(f, prev);
    prev = f;
  }
  EXPECT_LT(total_error_factor(1e9), 1e-7);
}

TEST(ErrorFactor, SFromError) {
  EXPECT_EQ(s_from_error(0.5), 39);
  EXPECT_EQ(s_from_error(0.2), 87);
  EXPECT_EQ(s_from_error(3.4667), 12);
  EXPECT_EQ(s_from_error(100), 12);
  for (const double e : {0.01, 0.05, 0.3, 1.0, 2.0}) {
    const int s = s_from_error(e);
    EXPECT_LE(total_error_factor(s), e);
    if (s > 12) {
      EXPECT_GT(total_error_factor(s - 1), e);
    }
  }
  EXPECT_THROW(s_from_error(0), InputError);
}

TEST(ErrorFactor, Guarantee) {
  EXPECT_EQ(*guaranteed_error(40), total_error_factor(40));
  EXPECT_NEAR(*guaranteed_error(6), 1 + 8.0 / 6 + 2, 1e-12);
  EXPECT_FALSE(guaranteed_error(2).has_value());
}

TEST(ApproxW1, Shortcuts) {
  const PersistenceDiagram a{{{0, 2}, {1, 3}}};
  ApproxParams p;
  p.s = 20;
  EXPECT_EQ(approx_w1(a, a, p).distance, 0.0);
  EXPECT_EQ(approx_w1({}, {}, p).distance, 0.0);
  p.s = 1;
  EXPECT_THROW(approx_w1(a, a, p), InputError);
  p.best_effort = true;
  EXPECT_EQ(approx_w1(a, a, p).distance, 0.0);
}

TEST(ApproxW1, SmallExactCase) {
  ApproxParams p;
  p.s = 20;
  p.use_condensation = false;
  const auto r = approx_w1({{{0, 2}}}, {{{0, 3}}}, p);
  EXPECT_EQ(r.distance, 1.0);
  EXPECT_EQ(r.diagnostics.status, SolveStatus::Optimal);
  EXPECT_EQ(r.diagnostics.nodes, 4u);
  EXPECT_EQ(r.diagnostics.arcs, 5u);
}

TEST(ApproxW1, ZeroLowerBoundWithDifferentMultiplicities) {
  // Same support, different multiplicities: not identical, W1 > 0.
  const PersistenceDiagram a{{{0, 2}, {0, 2}}}, b{{{0, 2}}};
  ApproxParams p;
  p.s = 20;
  EXPECT_NEAR(approx_w1(a, b, p).distance, std::sqrt(2.0), 1e-12);
}

TEST(ApproxW1, SpannerOnlySandwich) {
  std::mt19937_64 rng(43);
  for (const double s : {3.0, 6.0, 12.0}) {
    for (int t = 0; t < 40; ++t) {
      const auto a = test_support::random_small_diagram(rng, 20, 0);
      const auto b = test_support::random_small_diagram(rng, 20, 0);
      const double w = exact_w1_dense(a, b);
      ApproxParams p;
      p.s = s;
      p.use_condensation = false;
      const double v = approx_w1(a, b, p).distance;
      EXPECT_GE(v, w - 1e-9);
      EXPECT_LE(v, spanner_stretch(s) * w + 1e-9);
    }
  }
}

TEST(ApproxW1, GuaranteedBoundAndFlowIntegrity) {
  std::mt19937_64 rng(47);
  for (const double s : {12.0, 39.0}) {
    for (int t = 0; t < 40; ++t) {
      const auto a = test_support::random_small_diagram(rng, 20, t % 3 == 0 ? 6 : 0);
      const auto b = test_support::random_small_diagram(rng, 20, t % 3 == 0 ? 6 : 0);
      const double w = exact_w1_dense(a, b);
      ApproxParams p;
      p.s = s;
      p.seed = t;
      std::string problem;
      const auto r = approx_w1(a, b, p, [&](const TransshipmentNetwork& net, const FlowResult& f) {
        problem = check_flow(net, f);
      });
      EXPECT_EQ(problem, "");
      if (w == 0) {
        EXPECT_EQ(r.distance, 0.0);
        continue;
      }
      EXPECT_LE(std::abs(r.distance - w) / w, total_error_factor(s));
    }
  }
}

TEST(ApproxW1, Deterministic) {
  const auto a = gaussian_cluster_diagram(300, 1);
  const auto b = gaussian_cluster_diagram(300, 2);
  ApproxParams p;
  p.s = 12;
  p.seed = 5;
  const double x = approx_w1(a, b, p).distance;
  p.workers = 3;
  EXPECT_EQ(approx_w1(a, b, p).distance, x);
}

TEST(Pipeline, Parse) {
  const auto spec = parse_pipeline("rwmd:15,pdflow:3@1,pdflow:1@18");
  ASSERT_EQ(spec.stages.size(), 3u);
  EXPECT_EQ(spec.stages[0], (PipelineStage{StageAlgorithm::Rwmd, 15, 0}));
  EXPECT_EQ(spec.stages[1], (PipelineStage{StageAlgorithm::PDoptFlow, 3, 1}));
  EXPECT_EQ(spec.stages[2], (PipelineStage{StageAlgorithm::PDoptFlow, 1, 18}));
  EXPECT_EQ(parse_pipeline("exact:1").stages[0].algorithm, StageAlgorithm::Exact);
  EXPECT_THROW(parse_pipeline(""), InputError);
  EXPECT_THROW(parse_pipeline("rwmd:3,wcd:3,exact:1"), InputError);
  EXPECT_THROW(parse_pipeline("rwmd:3"), InputError);
  EXPECT_THROW(parse_pipeline("pdflow:1"), InputError);
  EXPECT_THROW(parse_pipeline("rwmd:2@3,exact:1"), InputError);
  EXPECT_THROW(parse_pipeline("foo:1"), InputError);
  EXPECT_THROW(parse_pipeline("wcd:x,exact:1"), InputError);
  EXPECT_THROW(parse_pipeline("exact:1,"), InputError);
}

TEST(Pipeline, FindsItself) {
  std::vector<PersistenceDiagram> corpus;
  for (int i = 0; i < 8; ++i) corpus.push_back(gaussian_cluster_diagram(30, 100 + i));
  const auto spec = parse_pipeline("wcd:6,rwmd:3,pdflow:1@18");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto r = nn_search(corpus[i], corpus, spec);
    EXPECT_EQ(r.index, i);
    EXPECT_EQ(r.score, 0.0);
  }
  EXPECT_EQ(nn_search(corpus[0], {corpus[3]}, parse_pipeline("rwmd:5,exact:1")).index, 0u);
  EXPECT_THROW(nn_search(corpus[0], {}, spec), InputError);
}

TEST(Pipeline, RecallHelper) {
  EXPECT_DOUBLE_EQ(recall_at_1({1, 2, 3, 4}, {1, 2, 0, 4}), 0.75);
}
