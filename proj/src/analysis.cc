#include "quadfreq/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "quadfreq/quad.h"
#include "quadfreq/random.h"

namespace quadfreq {

int LostOhcEdges(const Graph& graph, const Tour& tour) {
  if (tour.size() != graph.size()) {
    throw ContractViolation("tour has " + std::to_string(tour.size()) +
                            " vertices, graph has " +
                            std::to_string(graph.size()));
  }
  int lost = 0;
  for (const auto& [u, v] : tour.edges()) {
    if (!graph.HasEdge(u, v)) ++lost;
  }
  return lost;
}

Metrics ComputeMetrics(const Graph& graph, const std::optional<StopContext>& stop,
                       const std::optional<Tour>& tour) {
  if (graph.edge_count() == 0) throw ContractViolation("metrics need edges");
  Metrics m;
  m.n = graph.size();
  m.edge_count = graph.edge_count();
  m.c = static_cast<double>(m.edge_count) / m.n;
  const std::int64_t twice = 2 * m.edge_count;
  m.d = static_cast<int>((2 * twice + m.n) / (2 * m.n));
  m.d_ceil = static_cast<int>((twice + m.n - 1) / m.n);
  if (stop) {
    const double third = static_cast<double>(stop->edges_at_stop) / 3.0;
    if (third > 0) m.rho = (third - static_cast<double>(stop->edges_below_3)) / third;
  }
  if (tour) m.l_ohc = LostOhcEdges(graph, *tour);
  return m;
}

Tour BruteForceOhc(int n, const std::vector<std::int64_t>& distance) {
  if (n > kMaxBruteForceN) {
    throw ContractViolation("brute force is limited to n <= " +
                            std::to_string(kMaxBruteForceN));
  }
  if (n < 3) throw ContractViolation("brute force needs n >= 3");
  if (distance.size() != static_cast<std::size_t>(n) * n) {
    throw ContractViolation("distance matrix size does not match n");
  }
  auto d = [&](Vertex a, Vertex b) {
    return distance[static_cast<std::size_t>(a) * n + b];
  };
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Vertex> best;
  std::int64_t best_length = std::numeric_limits<std::int64_t>::max();
  // Permutations of order[1..] in lexicographic order; the first strict
  // improvement wins, which keeps the lexicographically smallest optimum.
  do {
    if (order[1] > order[n - 1]) continue;
    std::int64_t length = d(order[n - 1], order[0]);
    for (int i = 0; i + 1 < n && length < best_length; ++i) {
      length += d(order[i], order[i + 1]);
    }
    if (length < best_length) {
      best_length = length;
      best = order;
    }
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return Tour(best, n);
}

Tour BruteForceOhc(const Instance& instance) {
  return BruteForceOhc(instance.size(), instance.DistanceMatrix());
}

double DiagnosticsReport::expected_ohc_mean() const {
  return 3.0 + 2.0 / (config.n - 2);
}

double DiagnosticsReport::expected_ohc_p5() const {
  return 1.0 / 3.0 + 1.0 / (3.0 * (config.n - 2));
}

double DiagnosticsReport::prior_lower_bound() const {
  return 7.0 / 3.0 + 4.0 / (3.0 * (config.n - 3));
}

Instance DiagnosticsInstance(const DiagnosticsConfig& config, int trial) {
  Rng rng(DeriveSeed(config.seed, {static_cast<std::uint64_t>(trial)}));
  std::vector<Point> coords(config.n);
  for (Point& p : coords) {
    p.x = rng.Unit() * config.coordinate_range;
    p.y = rng.Unit() * config.coordinate_range;
  }
  return Instance::FromCoordinates("diag" + std::to_string(trial),
                                   EdgeWeightKind::kEuc2D, std::move(coords));
}

namespace {

int FrequencyIndex(int f) {
  switch (f) {
    case 5:
      return 0;
    case 3:
      return 1;
    case 1:
      return 2;
  }
  throw ContractViolation("complete quad frequency outside {1, 3, 5}");
}

}  // namespace

DiagnosticsReport FrequencyDiagnostics(const DiagnosticsConfig& config) {
  if (config.n < 5 || config.n > kMaxBruteForceN) {
    throw ContractViolation("diagnostics need 5 <= n <= " +
                            std::to_string(kMaxBruteForceN));
  }
  if (config.trials <= 0 || config.quads_per_edge <= 0) {
    throw ContractViolation("trials and quads per edge must be positive");
  }
  DiagnosticsReport report;
  report.config = config;
  const int n = config.n;
  double all_sum = 0.0;
  std::int64_t all_edges = 0;
  std::int64_t ohc_ge3 = 0;
  std::int64_t ohc_total = 0;
  for (int trial = 0; trial < config.trials; ++trial) {
    const Instance instance = DiagnosticsInstance(config, trial);
    const Tour tour = BruteForceOhc(instance);
    auto weights =
        std::make_shared<const Weights>(Weights::FromInstance(instance));
    const Graph graph = Graph::Complete(weights);
    double ohc_sum = 0.0;
    for (Vertex u = 0; u < static_cast<Vertex>(n); ++u) {
      for (Vertex v = u + 1; v < static_cast<Vertex>(n); ++v) {
        const bool on_tour = tour.Contains(u, v);
        Rng rng(DeriveSeed(config.seed, {static_cast<std::uint64_t>(trial),
                                         u, v}));
        std::vector<Vertex> others;
        for (Vertex w = 0; w < static_cast<Vertex>(n); ++w) {
          if (w != u && w != v) others.push_back(w);
        }
        std::int64_t total = 0;
        for (int s = 0; s < config.quads_per_edge; ++s) {
          const std::uint64_t i1 = rng.Below(others.size());
          std::uint64_t i2 = rng.Below(others.size() - 1);
          if (i2 >= i1) ++i2;
          const Quad quad = MakeQuad(graph, {u, v, others[i1], others[i2]});
          if (!ClassifyBySums(quad)) ++report.quads_with_ties;
          const QuadFrequencies f = ScoreQuad(quad);
          int iu = 0;
          int iv = 0;
          for (int i = 0; i < 4; ++i) {
            if (quad.vertices[i] == u) iu = i;
            if (quad.vertices[i] == v) iv = i;
          }
          const int value = f.freq[SlotOf(iu, iv)];
          total += value;
          ++report.all_counts[FrequencyIndex(value)];
          if (on_tour) {
            ++report.ohc_counts[FrequencyIndex(value)];
            ++ohc_total;
            if (value >= 3) ++ohc_ge3;
          }
        }
        const double fbar =
            static_cast<double>(total) / config.quads_per_edge;
        all_sum += fbar;
        ++all_edges;
        if (on_tour) ohc_sum += fbar;
      }
    }
    report.ohc_mean_per_instance.push_back(ohc_sum / n);
  }
  report.ohc_grand_mean =
      std::accumulate(report.ohc_mean_per_instance.begin(),
                      report.ohc_mean_per_instance.end(), 0.0) /
      config.trials;
  report.all_grand_mean = all_sum / static_cast<double>(all_edges);
  report.ohc_p_ge3 = static_cast<double>(ohc_ge3) / ohc_total;
  return report;
}

}  // namespace quadfreq
