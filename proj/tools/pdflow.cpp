// pdflow command line front end.
//
// Exit codes: 0 success, 1 internal failure, 2 usage, 3 bad input or size
// guard, 4 solver stopped by the stalling budget (value still printed).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdflow/pdflow.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int exit_internal = 1;
constexpr int exit_usage = 2;
constexpr int exit_input = 3;
constexpr int exit_stalled = 4;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

pdflow::PersistenceDiagram load(const std::string& path) {
  try {
    auto parsed = pdflow::read_diagram_file(path);
    if (parsed.dropped_zero_persistence)
      std::cerr << "warning: " << path << ": dropped " << parsed.dropped_zero_persistence
                << " zero-persistence point(s)\n";
    return std::move(parsed.diagram);
  } catch (const pdflow::InputError& e) {
    throw pdflow::InputError(path + ": " + e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json diagnostics_json(const pdflow::ApproxDiagnostics& d, double s) {
  json j;
  j["s"] = s;
  j["points"] = d.points;
  j["n"] = d.nodes;
  j["m"] = d.arcs;
  j["wspd_pairs"] = d.pairs;
  j["node_drop_percent"] = 100.0 * d.node_drop;
  j["lower_bound"] = d.lower_bound;
  j["epsilon"] = d.epsilon;
  j["delta"] = d.delta;
  j["pivots"] = d.pivots;
  j["blocks_searched"] = d.blocks_searched;
  j["status"] = pdflow::to_string(d.status);
  j["guaranteed_error"] = d.guaranteed_error ? json(*d.guaranteed_error) : json(nullptr);
  return j;
}

struct SolverFlags {
  std::optional<double> s;
  std::optional<double> error;
  bool no_condensation = false;
  bool best_effort = false;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t block_size = 0;
  double stop_c = 4.0;
  double stop_b = 1.0e5;

  void add_to(CLI::App* app) {
    auto* s_opt = app->add_option("--s", s, "WSPD separation / sparsity parameter (> 0)");
    auto* e_opt = app->add_option("--error", error, "target relative error; picks the smallest s >= 12 meeting it");
    s_opt->excludes(e_opt);
    e_opt->excludes(s_opt);
    app->add_flag("--no-condensation", no_condensation, "skip delta-condensation");
    app->add_flag("--best-effort", best_effort, "allow s <= 2 (no error guarantee)");
    app->add_option("--seed", seed, "seed of the condensation perturbation");
    app->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--block-size", block_size, "simplex pricing block size (0: ceil(sqrt(m)))");
    app->add_option("--stop-c", stop_c, "stalling budget factor C in C*sqrt(mn)+b");
    app->add_option("--stop-b", stop_b, "stalling budget offset b");
  }

  pdflow::ApproxParams params(double fallback_s) const {
    pdflow::ApproxParams p;
    p.s = s ? *s : error ? pdflow::s_from_error(*error) : fallback_s;
    p.use_condensation = !no_condensation;
    p.best_effort = best_effort;
    p.seed = seed;
    p.workers = threads;
    p.solver.block_size = block_size;
    p.solver.stop_c = stop_c;
    p.solver.stop_b = stop_b;
    return p;
  }
};

std::vector<fs::path> corpus_files(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw pdflow::InputError("'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  if (files.empty()) throw pdflow::InputError("corpus directory '" + dir + "' has no files");
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate 1-Wasserstein distance between persistence diagrams"};
  app.require_subcommand(1);

  std::string file_a, file_b;
  bool json_out = false;

  auto* dist = app.add_subcommand("dist", "approximate W1 between two diagrams");
  dist->add_option("A", file_a, "first diagram")->required();
  dist->add_option("B", file_b, "second diagram")->required();
  SolverFlags dist_flags;
  dist_flags.add_to(dist);
  dist->add_flag("--json", json_out, "print JSON with diagnostics");

  bool brute_force = false;
  auto* exact = app.add_subcommand("exact", "exact W1 (size-guarded)");
  exact->add_option("A", file_a)->required();
  exact->add_option("B", file_b)->required();
  exact->add_flag("--brute-force", brute_force, "enumerate matchings instead of solving the dense network");

  unsigned lb_threads = 1;
  auto* rwmd_cmd = app.add_subcommand("rwmd", "RWMD lower bound");
  rwmd_cmd->add_option("A", file_a)->required();
  rwmd_cmd->add_option("B", file_b)->required();
  rwmd_cmd->add_option("--threads", lb_threads)->check(CLI::PositiveNumber);

  auto* wcd_cmd = app.add_subcommand("wcd", "WCD lower bound");
  wcd_cmd->add_option("A", file_a)->required();
  wcd_cmd->add_option("B", file_b)->required();

  std::string query_file, corpus_dir, pipeline_text;
  auto* nn = app.add_subcommand("nn", "nearest neighbour of a query among a corpus directory");
  nn->add_option("query", query_file)->required();
  nn->add_option("corpus", corpus_dir, "directory of diagram files")->required();
  nn->add_option("--pipeline", pipeline_text, "stages, e.g. rwmd:15,pdflow:3@1,pdflow:1@18")->required();
  SolverFlags nn_flags;
  nn_flags.add_to(nn);
  nn->add_flag("--json", json_out, "print JSON with per-stage survivors");

  std::size_t bench_points = 1000;
  std::uint64_t bench_seed = 0;
  std::size_t bench_pairs = 3;
  std::string out_dir;
  auto* bench = app.add_subcommand("bench", "synthetic Gaussian-cluster pairs and timing rows (CSV)");
  bench->add_option("--points", bench_points, "points per diagram")->required();
  bench->add_option("--seed", bench_seed, "generator seed")->required();
  bench->add_option("--pairs", bench_pairs, "number of diagram pairs");
  bench->add_option("--out-dir", out_dir, "also write the generated diagrams here");
  double bench_s = 40.0;
  bench->add_option("--s", bench_s, "sparsity parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }
  if (*dist && !dist_flags.s && !dist_flags.error) {
    std::cerr << "dist: one of --s or --error is required\n";
    return exit_usage;
  }

  try {
    if (*dist) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto a = load(file_a);
      const auto b = load(file_b);
      const auto params = dist_flags.params(0.0);
      const auto r = pdflow::approx_w1(a, b, params);
      if (json_out) {
        json j;
        j["schema"] = "pdflow.dist/1";
        j["distance"] = r.distance;
        j["diagnostics"] = diagnostics_json(r.diagnostics, params.s);
        j["wall_time_s"] = seconds_since(t0);
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << fmt(r.distance) << '\n';
      }
      return r.diagnostics.status == pdflow::SolveStatus::Optimal ? 0 : exit_stalled;
    }
    if (*exact) {
      const auto a = load(file_a);
      const auto b = load(file_b);
      std::cout << fmt(brute_force ? pdflow::exact_w1_bruteforce(a, b) : pdflow::exact_w1_dense(a, b)) << '\n';
      return 0;
    }
    if (*rwmd_cmd) {
      std::cout << fmt(pdflow::rwmd(load(file_a), load(file_b), lb_threads)) << '\n';
      return 0;
    }
    if (*wcd_cmd) {
      std::cout << fmt(pdflow::wcd(load(file_a), load(file_b))) << '\n';
      return 0;
    }
    if (*nn) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto spec = pdflow::parse_pipeline(pipeline_text);
      const auto query = load(query_file);
      const auto files = corpus_files(corpus_dir);
      std::vector<pdflow::PersistenceDiagram> corpus;
      for (const auto& f : files) corpus.push_back(load(f.string()));
      const auto r = pdflow::nn_search(query, corpus, spec, nn_flags.params(40.0));
      std::size_t aborted = 0;
      for (const auto& st : r.stages) aborted += st.aborted;
      if (json_out) {
        json j;
        j["schema"] = "pdflow.nn/1";
        j["neighbor"] = files[r.index].filename().string();
        j["score"] = r.score;
        json stages = json::array();
        for (const auto& st : r.stages) {
          json sj;
          sj["keep"] = st.stage.keep;
          json names = json::array();
          for (const auto i : st.survivors) names.push_back(files[i].filename().string());
          sj["survivors"] = names;
          sj["scores"] = st.scores;
          sj["aborted"] = st.aborted;
          stages.push_back(sj);
        }
        j["stages"] = stages;
        j["wall_time_s"] = seconds_since(t0);
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << files[r.index].filename().string() << '\n';
      }
      return aborted ? exit_stalled : 0;
    }
    if (*bench) {
      if (!out_dir.empty()) fs::create_directories(out_dir);
      std::cout << "points,seed,pair,nodes,arcs,wspd_pairs,node_drop_percent,lower_bound,delta,pivots,status,distance,"
                   "time_ms\n";
      bool stalled = false;
      for (std::size_t k = 0; k < bench_pairs; ++k) {
        const std::uint64_t sa = bench_seed * 1000003 + 2 * k, sb = sa + 1;
        const auto a = pdflow::gaussian_cluster_diagram(bench_points, sa);
        const auto b = pdflow::gaussian_cluster_diagram(bench_points, sb);
        if (!out_dir.empty()) {
          std::ofstream(fs::path(out_dir) / ("pair" + std::to_string(k) + "_a.txt")) << pdflow::serialize_diagram(a);
          std::ofstream(fs::path(out_dir) / ("pair" + std::to_string(k) + "_b.txt")) << pdflow::serialize_diagram(b);
        }
        pdflow::ApproxParams p;
        p.s = bench_s;
        p.best_effort = true;
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = pdflow::approx_w1(a, b, p);
        const double ms = 1000.0 * seconds_since(t0);
        const auto& d = r.diagnostics;
        stalled |= d.status != pdflow::SolveStatus::Optimal;
        std::cout << bench_points << ',' << bench_seed << ',' << k << ',' << d.nodes << ',' << d.arcs << ','
                  << d.pairs << ',' << fmt(100.0 * d.node_drop) << ',' << fmt(d.lower_bound) << ',' << fmt(d.delta)
                  << ',' << d.pivots << ',' << pdflow::to_string(d.status) << ',' << fmt(r.distance) << ','
                  << fmt(ms) << '\n';
      }
      return stalled ? exit_stalled : 0;
    }
  } catch (const pdflow::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
  return exit_usage;
}
