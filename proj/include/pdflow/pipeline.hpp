#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdflow/condensation.hpp"
#include "pdflow/diagram.hpp"
#include "pdflow/errors.hpp"
#include "pdflow/lower_bound.hpp"
#include "pdflow/network.hpp"
#include "pdflow/oracle.hpp"
#include "pdflow/parallel.hpp"
#include "pdflow/simplex.hpp"
#include "pdflow/spanner.hpp"

namespace pdflow {

/// Relative error guaranteed at s: spanner stretch times condensation error,
/// (1 + 4/s + 4/(s-2)) (1 + 8/(s-4)) - 1.
inline double total_error_factor(double s) {
  if (!(s > 4.0)) throw InputError("total_error_factor needs s > 4");
  return spanner_stretch(s) * (1.0 + 8.0 / (s - 4.0)) - 1.0;
}

/// Smallest integer s >= 12 with total_error_factor(s) <= target.
inline int s_from_error(double target) {
  if (!(target > 0.0) || !std::isfinite(target)) throw InputError("target error must be positive and finite");
  if (total_error_factor(12.0) <= target) return 12;
  std::int64_t lo = 12, hi = 24;  // factor(lo) > target
  while (total_error_factor(static_cast<double>(hi)) > target) {
    lo = hi;
    hi *= 2;
    if (hi > (std::int64_t{1} << 40)) throw InputError("target error too small");
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (total_error_factor(static_cast<double>(mid)) <= target)
      hi = mid;
    else
      lo = mid;
  }
  if (hi > 2147483647) throw InputError("target error too small");
  return static_cast<int>(hi);
}

/// Guaranteed relative error at s, if any: the total factor for s >= 12, the
/// coarser 1 + 8/s + 8/(s-2) for 2 < s < 12 and nothing below.
inline std::optional<double> guaranteed_error(double s) {
  if (s >= 12.0) return total_error_factor(s);
  if (s > 2.0) return 1.0 + 8.0 / s + 8.0 / (s - 2.0);
  return std::nullopt;
}

struct ApproxParams {
  double s = 40.0;
  bool use_condensation = true;
  bool best_effort = false;  // required for s <= 2
  std::uint64_t seed = 0;
  double k = 0.99;
  unsigned workers = 1;
  SolverOptions solver{};
};

struct ApproxDiagnostics {
  std::size_t points = 0;         // |A| + |B|
  std::size_t nodes = 0;          // network nodes including abar, bbar
  std::size_t arcs = 0;           // network arcs
  std::size_t pairs = 0;          // WSPD pairs
  double node_drop = 0.0;         // fraction of points without a node of their own
  double lower_bound = 0.0;       // L
  double epsilon = 0.0;           // condensation epsilon
  double delta = 0.0;
  std::uint64_t pivots = 0;
  std::uint64_t blocks_searched = 0;
  SolveStatus status = SolveStatus::Optimal;
  std::optional<double> guaranteed_error;
  bool solved = false;  // false when a shortcut answered without a network
};

struct ApproxResult {
  double distance = 0.0;
  ApproxDiagnostics diagnostics;
};

inline void validate(const ApproxParams& p) {
  if (!(p.s > 0.0) || !std::isfinite(p.s)) throw InputError("s must be positive and finite");
  if (p.s <= 2.0 && !p.best_effort) throw InputError("s <= 2 has no error guarantee; best-effort mode required");
  if (p.workers == 0) throw InputError("worker count must be positive");
}

/// Approximate W1: 0-condensation, RWMD lower bound, delta-condensation, s-WSPD
/// spanner with diagonal arcs, network simplex.
inline ApproxResult approx_w1(const PersistenceDiagram& a, const PersistenceDiagram& b, const ApproxParams& params,
                              const FlowInspector& inspect = {}) {
  validate(params);
  ApproxResult out;
  ApproxDiagnostics& diag = out.diagnostics;
  diag.points = a.size() + b.size();
  diag.guaranteed_error = guaranteed_error(params.s);
  if (diag.points == 0) return out;

  const SuppliedNodes zero = zero_condense(a, b);
  // Identical multisets; a zero lower bound alone does not imply W1 == 0.
  if (zero.all_cancelled()) {
    diag.nodes = zero.size() + 2;
    diag.node_drop = node_drop_fraction(static_cast<std::int64_t>(diag.points), zero.size());
    return out;
  }

  diag.lower_bound = rwmd(zero, params.workers);
  diag.epsilon = condensation_epsilon(params.s);
  if (params.use_condensation)
    diag.delta = compute_delta(diag.epsilon, diag.lower_bound, static_cast<std::int64_t>(diag.points));
  const SuppliedNodes nodes =
      delta_condense(zero, CondensationParams{diag.epsilon, diag.delta, params.k, params.seed});
  diag.node_drop = node_drop_fraction(static_cast<std::int64_t>(diag.points), nodes.size());

  const SplitTree tree = build_split_tree(nodes.points);
  const WSPairList pairs = build_wspd(tree, params.s, params.workers);
  diag.pairs = pairs.size();
  const TransshipmentNetwork net = assemble(nodes, emit_arcs(pairs, nodes), params.workers);
  diag.nodes = net.node_count();
  diag.arcs = net.arc_count();

  const FlowResult r = solve(net, params.solver);
  if (inspect) inspect(net, r);
  diag.pivots = r.pivots;
  diag.blocks_searched = r.blocks_searched;
  diag.status = r.status;
  diag.solved = true;
  out.distance = r.objective;
  return out;
}

enum class StageAlgorithm { Wcd, Rwmd, PDoptFlow, Exact };

struct PipelineStage {
  StageAlgorithm algorithm = StageAlgorithm::Rwmd;
  std::size_t keep = 1;
  double s = 0.0;  // PDoptFlow only

  friend bool operator==(const PipelineStage&, const PipelineStage&) = default;
};

struct PipelineSpec {
  std::vector<PipelineStage> stages;
};

inline void validate(const PipelineSpec& spec) {
  if (spec.stages.empty()) throw InputError("pipeline has no stages");
  for (std::size_t i = 0; i < spec.stages.size(); ++i) {
    const PipelineStage& st = spec.stages[i];
    if (st.keep == 0) throw InputError("pipeline stage keeps no candidates");
    if (i > 0 && !(st.keep < spec.stages[i - 1].keep)) throw InputError("pipeline counts must strictly decrease");
    if (st.algorithm == StageAlgorithm::PDoptFlow && (!(st.s > 0.0) || !std::isfinite(st.s)))
      throw InputError("pdflow stage needs s > 0");
  }
  if (spec.stages.back().keep != 1) throw InputError("last pipeline stage must keep exactly 1 candidate");
}

/// Parses "rwmd:15,pdflow:3@1,pdflow:1@18". Algorithms: wcd, rwmd, exact,
/// pdflow (which needs @s).
inline PipelineSpec parse_pipeline(std::string_view text) {
  PipelineSpec spec;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (comma != std::string_view::npos && text.empty()) throw InputError("trailing ',' in pipeline");

    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw InputError("pipeline stage '" + std::string(item) + "' lacks ':count'");
    const std::string_view name = item.substr(0, colon);
    std::string_view rest = item.substr(colon + 1);
    std::string_view s_text;
    if (const std::size_t at = rest.find('@'); at != std::string_view::npos) {
      s_text = rest.substr(at + 1);
      rest = rest.substr(0, at);
    }
    PipelineStage st;
    if (name == "wcd")
      st.algorithm = StageAlgorithm::Wcd;
    else if (name == "rwmd")
      st.algorithm = StageAlgorithm::Rwmd;
    else if (name == "pdflow")
      st.algorithm = StageAlgorithm::PDoptFlow;
    else if (name == "exact")
      st.algorithm = StageAlgorithm::Exact;
    else
      throw InputError("unknown pipeline algorithm '" + std::string(name) + "'");

    const auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), st.keep);
    if (ec != std::errc{} || p != rest.data() + rest.size()) throw InputError("bad candidate count in '" + std::string(item) + "'");
    if (st.algorithm == StageAlgorithm::PDoptFlow) {
      if (s_text.empty()) throw InputError("pdflow stage needs '@s'");
      const auto [q, ec2] = std::from_chars(s_text.data(), s_text.data() + s_text.size(), st.s);
      if (ec2 != std::errc{} || q != s_text.data() + s_text.size()) throw InputError("bad s in '" + std::string(item) + "'");
    } else if (!s_text.empty()) {
      throw InputError("'@s' only applies to pdflow stages");
    }
    spec.stages.push_back(st);
  }
  validate(spec);
  return spec;
}

struct StageReport {
  PipelineStage stage;
  std::vector<std::size_t> survivors;  // corpus indices, best first
  std::vector<double> scores;          // matching survivors
  std::size_t aborted = 0;             // PDoptFlow runs that hit the stalling budget
};

struct NNResult {
  std::size_t index = 0;
  double score = 0.0;  // final stage value for the winner
  std::vector<StageReport> stages;
};

/// Distance used by one pipeline stage. PDoptFlow stages take the seed,
/// condensation and solver settings from `base` and always run best-effort.
inline double stage_distance(const PipelineStage& st, const PersistenceDiagram& q, const PersistenceDiagram& c,
                             const ApproxParams& base, bool* aborted = nullptr) {
  switch (st.algorithm) {
    case StageAlgorithm::Wcd:
      return wcd(q, c);
    case StageAlgorithm::Rwmd:
      return rwmd(q, c);
    case StageAlgorithm::Exact:
      return exact_w1_dense(q, c);
    case StageAlgorithm::PDoptFlow: {
      ApproxParams p = base;
      p.s = st.s;
      p.best_effort = true;
      p.workers = 1;
      const ApproxResult r = approx_w1(q, c, p);
      if (aborted) *aborted = r.diagnostics.status == SolveStatus::AbortedStalling;
      return r.distance;
    }
  }
  return 0.0;
}

/// Staged nearest-neighbour search: every stage scores the current candidates
/// and keeps its count of best ones, ordered by (score, index).
inline NNResult nn_search(const PersistenceDiagram& query, const std::vector<PersistenceDiagram>& corpus,
                          const PipelineSpec& spec, const ApproxParams& base = {}) {
  if (corpus.empty()) throw InputError("nearest-neighbour corpus is empty");
  validate(spec);
  std::vector<std::size_t> candidates(corpus.size());
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});

  NNResult out;
  for (const PipelineStage& st : spec.stages) {
    std::vector<double> scores(candidates.size());
    std::vector<std::uint8_t> aborted(candidates.size(), 0);
    parallel_for(candidates.size(), base.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        bool ab = false;
        scores[i] = stage_distance(st, query, corpus[candidates[i]], base, &ab);
        aborted[i] = ab;
      }
    });
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
      if (scores[l] != scores[r]) return scores[l] < scores[r];
      return candidates[l] < candidates[r];
    });
    order.resize(std::min(order.size(), st.keep));

    StageReport rep;
    rep.stage = st;
    for (const std::size_t i : order) {
      rep.survivors.push_back(candidates[i]);
      rep.scores.push_back(scores[i]);
    }
    for (const std::uint8_t ab : aborted) rep.aborted += ab;
    candidates = rep.survivors;
    out.stages.push_back(std::move(rep));
  }
  out.index = candidates.front();
  out.score = out.stages.back().scores.front();
  return out;
}

/// Fraction of queries whose returned index equals the reference one.
inline double recall_at_1(const std::vector<std::size_t>& returned, const std::vector<std::size_t>& reference) {
  if (returned.size() != reference.size()) throw InputError("recall_at_1: size mismatch");
  if (returned.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < returned.size(); ++i) hits += returned[i] == reference[i];
  return static_cast<double>(hits) / static_cast<double>(returned.size());
}

}  // namespace pdflow
