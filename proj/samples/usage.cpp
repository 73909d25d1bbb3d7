// Approximate and exact W1 between two small clustered diagrams.

#include <cstdio>

#include "pdflow/pdflow.hpp"

int main() {
  const auto a = pdflow::gaussian_cluster_diagram(400, 1);
  const auto b = pdflow::gaussian_cluster_diagram(400, 2);

  pdflow::ApproxParams params;
  params.s = pdflow::s_from_error(0.5);
  const auto approx = pdflow::approx_w1(a, b, params);
  const double exact = pdflow::exact_w1_dense(a, b);

  const auto& d = approx.diagnostics;
  std::printf("s = %g (guaranteed relative error %.4f)\n", params.s, *d.guaranteed_error);
  std::printf("network: %zu nodes, %zu arcs, %.1f%% of points condensed away\n", d.nodes, d.arcs, 100 * d.node_drop);
  std::printf("approx  %.6f (%s, %llu pivots)\n", approx.distance, pdflow::to_string(d.status),
              static_cast<unsigned long long>(d.pivots));
  std::printf("exact   %.6f\n", exact);
  std::printf("rwmd    %.6f\n", pdflow::rwmd(a, b));
  std::printf("wcd     %.6f\n", pdflow::wcd(a, b));
  std::printf("relative error %.2e\n", (approx.distance - exact) / exact);
}
