// Iterative elimination: score every edge of G_k by its average quad
// frequency, keep the top two thirds, repair isolated vertices, repeat until
// a stop rule fires.

#ifndef QUADFREQ_SPARSIFIER_H_
#define QUADFREQ_SPARSIFIER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "quadfreq/frequency.h"
#include "quadfreq/graph.h"
#include "quadfreq/tsplib.h"

namespace quadfreq {

enum class StopRule { kNBelowRule, kEdgeTarget, kKMaxCap };

std::string_view StopRuleName(StopRule rule);
StopRule ParseStopRule(std::string_view name);

// Reasons a run halts besides the configured rules.
inline constexpr std::string_view kNoScoreableQuads =
    "no_scoreable_quadrilaterals";
inline constexpr std::string_view kNoProgress = "no_progress";

struct RetentionRatio {
  std::int64_t num = 2;
  std::int64_t den = 3;

  // ceil(num/den * edges), exact.
  std::int64_t Keep(std::int64_t edges) const {
    return (num * edges + den - 1) / den;
  }
};

struct SparsifyConfig {
  std::optional<double> c;  // default ceil(log2 n)
  RetentionRatio retention;
  SamplingMode mode;
  std::optional<bool> perturb;  // default on for EXPLICIT instances only
  std::uint64_t perturb_seed = 1;
  std::optional<int> incomplete_activation_cycle;
  std::set<StopRule> stop_rules = {StopRule::kNBelowRule,
                                   StopRule::kEdgeTarget, StopRule::kKMaxCap};
  int max_extra_cycles_after_stop = 0;
  int workers = 0;  // <= 0: DefaultWorkerCount()
};

// A config with every default resolved against an instance.
struct ResolvedConfig {
  double c = 1.0;
  RetentionRatio retention;
  SamplingMode mode;
  bool perturb = false;
  std::uint64_t perturb_seed = 1;
  int incomplete_activation_cycle = 0;
  std::set<StopRule> stop_rules;
  int max_extra_cycles_after_stop = 0;
  int k_max = 0;
  int workers = 1;
};

ResolvedConfig Resolve(const SparsifyConfig& config, const Instance& instance);

struct CycleReport {
  int k = 0;
  std::int64_t edge_count = 0;
  std::int64_t n_below_3 = 0;  // scored edges with average frequency < 3
  std::int64_t n_unscored = 0;  // edges in no scoreable quad
  std::optional<Rational> kept_cut_value;  // average of the last kept edge
  std::vector<Vertex> repaired_vertices;
  // Isolated vertices that had fewer than two edges to restore.
  std::vector<Vertex> repair_shortfall;
  std::vector<Vertex> degree_one_vertices;
  std::optional<std::string> stop_triggered;
  bool after_stop = false;  // an extra cycle run past the stop rule
  bool incomplete_scoring = false;
  std::int64_t complete_quads = 0;
  std::int64_t incomplete_quads = 0;
  std::optional<int> lost_ohc;
};

struct Cycle {
  Graph graph;
  FrequencyTable table;  // computed on `graph`
  CycleReport report;
};

struct SparsifyResult {
  ResolvedConfig config;
  std::shared_ptr<const Weights> weights;
  std::vector<Cycle> cycles;  // cycles[k] holds G_k
  std::optional<std::string> stop_reason;
  int stop_cycle = 0;  // index of the emitted graph

  const Cycle& output() const { return cycles.at(stop_cycle); }
};

// Working weights with rd in (0, 1] added to every edge, drawn in
// lexicographic edge order from one seeded stream. Originals are kept.
Weights Perturb(const Instance& instance, std::uint64_t seed);

struct PruneResult {
  Graph graph;
  Rational cut_value;
};

// Keeps the top ceil(2/3 |E|) edges by average frequency, descending, ties
// to the lexicographically smaller edge.
PruneResult PruneOnce(const Graph& graph, const FrequencyTable& table,
                      RetentionRatio retention = {});

struct RepairResult {
  Graph graph;
  std::vector<Vertex> repaired;
  std::vector<Vertex> shortfall;
};

// Each vertex isolated in `pruned` gets back its (up to) two incident edges
// from `previous` with the highest average in `previous_table`.
RepairResult RepairIsolated(const Graph& pruned, const Graph& previous,
                            const FrequencyTable& previous_table);

// First rule of `rules` that fires for `report`, in the order n_below_rule,
// edge_target, k_max_cap.
std::optional<StopRule> StopCheck(const CycleReport& report, int n, double c,
                                  int k_max, const std::set<StopRule>& rules,
                                  RetentionRatio retention = {});

// ceil(log_{2/3}(2c / (n - 1))); 0 when 2c >= n - 1.
int KMax(int n, double c);

// (1/3) * n / ((2/3)^(k-1) * e0), clamped to [0, 1].
double LossProbability(int n, int k, std::int64_t e0);

// 2 + ceil(log_{2/3}(n / (m (n - 1)))): cycles before about m tour edges
// are expected to be lost by a random third-elimination.
int SafeCycles(int n, int m);

// ceil((2/3) log_{2/3}(2 / (n - 1))).
int DefaultIncompleteActivationCycle(int n);

SparsifyResult Run(const Instance& instance, const SparsifyConfig& config,
                   const std::optional<Tour>& tour = std::nullopt);

}  // namespace quadfreq

#endif  // QUADFREQ_SPARSIFIER_H_
