#include "quadfreq/sparsifier.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "quadfreq/analysis.h"

namespace quadfreq {
namespace {

// Guards ceil() against log-ratio round-off at exact integers.
constexpr double kCeilSlack = 1e-9;

double LogTwoThirds(double x) { return std::log(x) / std::log(2.0 / 3.0); }

int CeilWithSlack(double x) {
  return static_cast<int>(std::ceil(x - kCeilSlack));
}

}  // namespace

std::string_view StopRuleName(StopRule rule) {
  switch (rule) {
    case StopRule::kNBelowRule:
      return "n_below_rule";
    case StopRule::kEdgeTarget:
      return "edge_target";
    case StopRule::kKMaxCap:
      return "k_max_cap";
  }
  return "unknown";
}

StopRule ParseStopRule(std::string_view name) {
  for (const StopRule rule :
       {StopRule::kNBelowRule, StopRule::kEdgeTarget, StopRule::kKMaxCap}) {
    if (StopRuleName(rule) == name) return rule;
  }
  throw ParseError("unknown stop rule '" + std::string(name) + "'", 0);
}

int KMax(int n, double c) {
  if (2.0 * c >= n - 1) return 0;
  return CeilWithSlack(LogTwoThirds(2.0 * c / (n - 1)));
}

double LossProbability(int n, int k, std::int64_t e0) {
  if (k < 1) throw ContractViolation("loss probability needs k >= 1");
  if (e0 <= 0) throw ContractViolation("loss probability needs e0 > 0");
  const double p = (1.0 / 3.0) * n /
                   (std::pow(2.0 / 3.0, k - 1) * static_cast<double>(e0));
  return std::clamp(p, 0.0, 1.0);
}

int SafeCycles(int n, int m) {
  if (m < 1) throw ContractViolation("safe cycles needs m >= 1");
  if (n < 2) throw ContractViolation("safe cycles needs n >= 2");
  return 2 + CeilWithSlack(LogTwoThirds(static_cast<double>(n) /
                                        (static_cast<double>(m) * (n - 1))));
}

int DefaultIncompleteActivationCycle(int n) {
  if (n < 4) throw ContractViolation("n must be >= 4");
  return CeilWithSlack((2.0 / 3.0) * LogTwoThirds(2.0 / (n - 1)));
}

ResolvedConfig Resolve(const SparsifyConfig& config, const Instance& instance) {
  const int n = instance.size();
  ResolvedConfig r;
  r.c = config.c.value_or(std::ceil(std::log2(static_cast<double>(n))));
  if (!(r.c >= 1.0)) throw ContractViolation("c must be >= 1");
  if (config.retention.num <= 0 || config.retention.den <= 0 ||
      config.retention.num >= config.retention.den) {
    throw ContractViolation("retention ratio must lie in (0, 1)");
  }
  r.retention = config.retention;
  r.mode = config.mode;
  r.perturb =
      config.perturb.value_or(instance.kind() == EdgeWeightKind::kExplicit);
  r.perturb_seed = config.perturb_seed;
  r.incomplete_activation_cycle = config.incomplete_activation_cycle.value_or(
      DefaultIncompleteActivationCycle(n));
  r.stop_rules = config.stop_rules;
  if (config.max_extra_cycles_after_stop < 0) {
    throw ContractViolation("extra cycles must be >= 0");
  }
  r.max_extra_cycles_after_stop = config.max_extra_cycles_after_stop;
  r.k_max = KMax(n, r.c);
  r.workers = config.workers > 0 ? config.workers : DefaultWorkerCount();
  return r;
}

Weights Perturb(const Instance& instance, std::uint64_t seed) {
  const Weights base = Weights::FromInstance(instance);
  const int n = instance.size();
  std::vector<std::int64_t> original(static_cast<std::size_t>(n) * n);
  std::vector<std::int64_t> working(original.size());
  std::mt19937_64 rng(seed);
  for (Vertex i = 0; i < static_cast<Vertex>(n); ++i) {
    for (Vertex j = i + 1; j < static_cast<Vertex>(n); ++j) {
      // rd = k / 2^32 with k in [1, 2^32].
      const auto k = static_cast<std::int64_t>(rng() >> 32) + 1;
      const std::int64_t w = base.Working(i, j) + k;
      original[static_cast<std::size_t>(i) * n + j] = base.Original(i, j);
      original[static_cast<std::size_t>(j) * n + i] = base.Original(i, j);
      working[static_cast<std::size_t>(i) * n + j] = w;
      working[static_cast<std::size_t>(j) * n + i] = w;
    }
  }
  return Weights(n, std::move(original), std::move(working), true);
}

PruneResult PruneOnce(const Graph& graph, const FrequencyTable& table,
                      RetentionRatio retention) {
  if (graph.edge_count() == 0) throw ContractViolation("cannot prune an empty graph");
  if (table.size() != graph.size()) {
    throw ContractViolation("frequency table does not match graph");
  }
  std::vector<Edge> edges = graph.Edges();
  std::stable_sort(edges.begin(), edges.end(),
                   [&](const Edge& a, const Edge& b) {
                     return table.Average(a.u, a.v) > table.Average(b.u, b.v);
                   });
  const auto keep = static_cast<std::size_t>(retention.Keep(graph.edge_count()));
  Graph pruned(graph.shared_weights(), graph.cycle() + 1);
  for (std::size_t i = 0; i < keep; ++i) pruned.AddEdge(edges[i].u, edges[i].v);
  const Edge& last = edges[keep - 1];
  return PruneResult{std::move(pruned), table.Average(last.u, last.v)};
}

RepairResult RepairIsolated(const Graph& pruned, const Graph& previous,
                            const FrequencyTable& previous_table) {
  RepairResult result{pruned, {}, {}};
  const int n = pruned.size();
  std::vector<Vertex> isolated;
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
    if (pruned.Degree(v) == 0) isolated.push_back(v);
  }
  for (const Vertex v : isolated) {
    std::vector<Edge> incident;
    for (const Vertex w : previous.Neighbors(v)) incident.push_back(MakeEdge(v, w));
    std::sort(incident.begin(), incident.end(),
              [&](const Edge& a, const Edge& b) {
                const auto order = previous_table.Average(a.u, a.v) <=>
                                   previous_table.Average(b.u, b.v);
                if (order != 0) return order > 0;
                return a < b;
              });
    const std::size_t take = std::min<std::size_t>(2, incident.size());
    for (std::size_t i = 0; i < take; ++i) {
      result.graph.AddEdge(incident[i].u, incident[i].v);
    }
    if (take > 0) result.repaired.push_back(v);
    if (take < 2) result.shortfall.push_back(v);
  }
  return result;
}

std::optional<StopRule> StopCheck(const CycleReport& report, int n, double c,
                                  int k_max, const std::set<StopRule>& rules,
                                  RetentionRatio retention) {
  if (rules.contains(StopRule::kNBelowRule) &&
      3 * report.n_below_3 <= report.edge_count) {
    return StopRule::kNBelowRule;
  }
  if (rules.contains(StopRule::kEdgeTarget) &&
      static_cast<double>(retention.Keep(report.edge_count)) < c * n) {
    return StopRule::kEdgeTarget;
  }
  if (rules.contains(StopRule::kKMaxCap) && report.k >= k_max) {
    return StopRule::kKMaxCap;
  }
  return std::nullopt;
}

SparsifyResult Run(const Instance& instance, const SparsifyConfig& config,
                   const std::optional<Tour>& tour) {
  const int n = instance.size();
  if (tour && tour->size() != n) {
    throw ContractViolation("tour dimension does not match instance");
  }
  SparsifyResult result;
  result.config = Resolve(config, instance);
  const ResolvedConfig& cfg = result.config;
  result.weights = std::make_shared<const Weights>(
      cfg.perturb ? Perturb(instance, cfg.perturb_seed)
                  : Weights::FromInstance(instance));

  Graph graph = Graph::Complete(result.weights);
  bool stopped = false;
  int extra_left = 0;
  for (int k = 0;; ++k) {
    graph.set_cycle(k);
    const bool incomplete = k >= cfg.incomplete_activation_cycle;
    FrequencyTable table = Accumulate(graph, cfg.mode, incomplete, cfg.workers);

    CycleReport report;
    report.k = k;
    report.edge_count = graph.edge_count();
    report.n_below_3 = table.CountBelow(graph, 3);
    report.n_unscored = table.CountUnscored(graph);
    report.incomplete_scoring = incomplete;
    report.complete_quads = table.complete_quads;
    report.incomplete_quads = table.incomplete_quads;
    report.after_stop = stopped;
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
      if (graph.Degree(v) == 1) report.degree_one_vertices.push_back(v);
    }
    if (tour) report.lost_ohc = LostOhcEdges(graph, *tour);

    auto finish = [&](std::optional<std::string> reason) {
      if (!stopped) {
        result.stop_reason = std::move(reason);
        result.stop_cycle = k;
        report.stop_triggered = result.stop_reason;
      }
      result.cycles.push_back(Cycle{graph, std::move(table), std::move(report)});
    };

    if (table.NothingScored(graph)) {
      finish(std::string(kNoScoreableQuads));
      break;
    }
    if (!stopped) {
      if (const auto rule = StopCheck(report, n, cfg.c, cfg.k_max,
                                      cfg.stop_rules, cfg.retention)) {
        stopped = true;
        result.stop_reason = std::string(StopRuleName(*rule));
        result.stop_cycle = k;
        report.stop_triggered = result.stop_reason;
        extra_left = cfg.max_extra_cycles_after_stop;
      }
    }
    if (stopped) {
      if (extra_left == 0) {
        result.cycles.push_back(
            Cycle{graph, std::move(table), std::move(report)});
        break;
      }
      --extra_left;
    }

    PruneResult pruned = PruneOnce(graph, table, cfg.retention);
    RepairResult repaired = RepairIsolated(pruned.graph, graph, table);
    report.kept_cut_value = pruned.cut_value;
    report.repaired_vertices = std::move(repaired.repaired);
    report.repair_shortfall = std::move(repaired.shortfall);
    Graph next = std::move(repaired.graph);
    if (next.edge_count() >= graph.edge_count()) {
      finish(std::string(kNoProgress));
      break;
    }
    result.cycles.push_back(Cycle{graph, std::move(table), std::move(report)});
    graph = std::move(next);
  }
  return result;
}

}  // namespace quadfreq
