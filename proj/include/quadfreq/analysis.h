// Tour verification, sparsity metrics, an exact small-instance tour oracle,
// and Monte-Carlo checks of the quad-frequency probability model.

#ifndef QUADFREQ_ANALYSIS_H_
#define QUADFREQ_ANALYSIS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "quadfreq/graph.h"
#include "quadfreq/tsplib.h"

namespace quadfreq {

// Tour edges absent from `graph`. Throws ContractViolation on a dimension
// mismatch.
int LostOhcEdges(const Graph& graph, const Tour& tour);

struct StopContext {
  std::int64_t edges_at_stop = 0;  // |E_{k_s}|
  std::int64_t edges_below_3 = 0;  // |E_{f<3}|
};

struct Metrics {
  int n = 0;
  std::int64_t edge_count = 0;
  double c = 0.0;     // |E| / n
  int d = 0;          // nearest integer to 2|E| / n, halves up
  int d_ceil = 0;     // ceil(2|E| / n)
  std::optional<double> rho;
  std::optional<int> l_ohc;
};

Metrics ComputeMetrics(const Graph& graph,
                       const std::optional<StopContext>& stop = std::nullopt,
                       const std::optional<Tour>& tour = std::nullopt);

// Largest n accepted by BruteForceOhc.
inline constexpr int kMaxBruteForceN = 12;

// Exact optimal tour over the row-major n x n `distance` matrix by
// enumerating permutations with vertex 0 first and order[1] < order[n-1].
// Among equal lengths the lexicographically smallest order wins.
Tour BruteForceOhc(int n, const std::vector<std::int64_t>& distance);
Tour BruteForceOhc(const Instance& instance);

struct DiagnosticsConfig {
  int n = 10;
  int trials = 100;
  std::uint64_t seed = 1;
  int quads_per_edge = 200;  // sampled uniformly with replacement
  double coordinate_range = 1e6;
};

struct DiagnosticsReport {
  DiagnosticsConfig config;
  // Counts of f = 5, 3, 1 over sampled (edge, quad) incidences.
  std::array<std::int64_t, 3> all_counts{};
  std::array<std::int64_t, 3> ohc_counts{};
  std::int64_t quads_with_ties = 0;
  // Mean fbar over each instance's OHC edges.
  std::vector<double> ohc_mean_per_instance;
  double ohc_grand_mean = 0.0;
  double all_grand_mean = 0.0;
  double ohc_p_ge3 = 0.0;  // fraction of OHC incidences with f >= 3

  double expected_ohc_mean() const;     // 3 + 2/(n-2)
  double expected_ohc_p5() const;       // 1/3 + 1/(3(n-2))
  double prior_lower_bound() const;     // 7/3 + 4/(3(n-3))
};

// Seeded random EUC_2D instances, brute-force OHC, per-edge uniform quad
// sampling on the complete graph.
DiagnosticsReport FrequencyDiagnostics(const DiagnosticsConfig& config);

// Random instance used by the diagnostics for trial `trial`.
Instance DiagnosticsInstance(const DiagnosticsConfig& config, int trial);

}  // namespace quadfreq

#endif  // QUADFREQ_ANALYSIS_H_
