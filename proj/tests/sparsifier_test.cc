#include "quadfreq/sparsifier.h"

#include <cmath>
#include <memory>
#include <string>

#include <gtest/gtest.h>

#include "quadfreq/analysis.h"

namespace quadfreq {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(QUADFREQ_DATA_DIR) + "/" + name;
}

// A=0, B=1, C=2, D=3 with distances times 10.
Instance ExampleInstance() {
  const std::int64_t ab = 60, ac = 40, ad = 20, bc = 20, bd = 45, cd = 58;
  return Instance::FromMatrix("example", 4,
                              {0, ab, ac, ad,  //
                               ab, 0, bc, bd,  //
                               ac, bc, 0, cd,  //
                               ad, bd, cd, 0});
}

std::shared_ptr<const Weights> SharedWeights(const Instance& instance) {
  return std::make_shared<const Weights>(Weights::FromInstance(instance));
}

// Table with average `num/den` on one edge.
void SetAverage(FrequencyTable& table, Vertex u, Vertex v, std::int64_t num,
                std::int64_t den) {
  table.Add(u, v, num, den);
}

TEST(FormulaTest, KMax) {
  EXPECT_EQ(KMax(100, 1), 10);
  EXPECT_EQ(KMax(17, 1), 6);
  EXPECT_EQ(KMax(100, std::log2(100.0)), 5);
  EXPECT_EQ(KMax(4, 2), 0);
}

TEST(FormulaTest, LossProbability) {
  EXPECT_NEAR(LossProbability(100, 1, 4950), 0.006734, 1e-6);
  const double ratio =
      LossProbability(100, 10, 4950) / LossProbability(100, 1, 4950);
  EXPECT_NEAR(ratio, std::pow(1.5, 9), 1e-9);
  EXPECT_DOUBLE_EQ(LossProbability(100, 40, 4950), 1.0);
  EXPECT_THROW(LossProbability(100, 0, 4950), ContractViolation);
}

TEST(FormulaTest, SafeCycles) {
  // log_{2/3}(100 / 99) is slightly negative, so its ceiling is 0.
  EXPECT_EQ(SafeCycles(100, 1), 2);
  // log_{2/3}(100 / 198) = 1.68.
  EXPECT_EQ(SafeCycles(100, 2), 4);
  EXPECT_THROW(SafeCycles(100, 0), ContractViolation);
}

TEST(FormulaTest, DefaultActivationCycle) {
  EXPECT_EQ(DefaultIncompleteActivationCycle(17), 4);
  EXPECT_EQ(DefaultIncompleteActivationCycle(52), 6);
  EXPECT_THROW(DefaultIncompleteActivationCycle(3), ContractViolation);
}

TEST(RetentionTest, KeepsCeiling) {
  const RetentionRatio r;
  EXPECT_EQ(r.Keep(9), 6);
  EXPECT_EQ(r.Keep(10), 7);
  EXPECT_EQ(r.Keep(136), 91);
  EXPECT_EQ(r.Keep(1), 1);
}

TEST(PerturbTest, DeterministicAndInRange) {
  const Instance gr17 = ReadInstanceFile(DataPath("gr17.tsp"));
  const Weights a = Perturb(gr17, 7);
  const Weights b = Perturb(gr17, 7);
  const Weights c = Perturb(gr17, 8);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
  EXPECT_TRUE(a.perturbed());
  for (Vertex u = 0; u < 17; ++u) {
    for (Vertex v = u + 1; v < 17; ++v) {
      const std::int64_t base = gr17.Distance(u, v) * kWeightScale;
      EXPECT_GT(a.Working(u, v), base);
      EXPECT_LE(a.Working(u, v), base + kWeightScale);
      EXPECT_EQ(a.Working(u, v), a.Working(v, u));
      EXPECT_EQ(a.Original(u, v), gr17.Distance(u, v));
    }
  }
}

TEST(PruneTest, KeepsTwoThirds) {
  const Instance inst = Instance::FromMatrix(
      "k5", 5, std::vector<std::int64_t>(25, 1));
  Graph g = Graph::Complete(SharedWeights(inst));
  g.RemoveEdge(3, 4);
  ASSERT_EQ(g.edge_count(), 9);
  FrequencyTable t(5);
  std::int64_t value = 1;
  for (const Edge& e : g.Edges()) SetAverage(t, e.u, e.v, value++, 1);
  const PruneResult r = PruneOnce(g, t);
  EXPECT_EQ(r.graph.edge_count(), 6);
  EXPECT_EQ(r.graph.cycle(), g.cycle() + 1);
  // The six largest averages are the last six edges in order.
  const auto edges = g.Edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    EXPECT_EQ(r.graph.HasEdge(edges[i].u, edges[i].v), i >= 3);
  }
  EXPECT_EQ(r.cut_value, (Rational{4, 1}));
}

TEST(PruneTest, ExampleKeepsOptimalTourEdges) {
  const Graph g = Graph::Complete(SharedWeights(ExampleInstance()));
  const FrequencyTable t = Accumulate(g, SamplingMode::Exhaustive(), false);
  const PruneResult r = PruneOnce(g, t);
  // OHC = A, C, B, D.
  EXPECT_EQ(r.graph.edge_count(), 4);
  EXPECT_TRUE(r.graph.HasEdge(0, 2));
  EXPECT_TRUE(r.graph.HasEdge(1, 2));
  EXPECT_TRUE(r.graph.HasEdge(1, 3));
  EXPECT_TRUE(r.graph.HasEdge(0, 3));
  EXPECT_EQ(r.cut_value, (Rational{3, 1}));
}

TEST(PruneTest, TiesGoToSmallerEdge) {
  const Instance inst = Instance::FromMatrix(
      "k4", 4, std::vector<std::int64_t>(16, 1));
  const Graph g = Graph::Complete(SharedWeights(inst));
  FrequencyTable t(4);
  for (const Edge& e : g.Edges()) SetAverage(t, e.u, e.v, 3, 1);
  const PruneResult r = PruneOnce(g, t);
  const auto edges = g.Edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    EXPECT_EQ(r.graph.HasEdge(edges[i].u, edges[i].v), i < 4);
  }
}

TEST(PruneTest, EmptyGraphRejected) {
  const Instance inst = Instance::FromMatrix(
      "k4", 4, std::vector<std::int64_t>(16, 1));
  const Graph g(SharedWeights(inst), 0);
  EXPECT_THROW(PruneOnce(g, FrequencyTable(4)), ContractViolation);
}

TEST(RepairTest, NothingIsolatedIsIdentity) {
  const Instance inst = Instance::FromMatrix(
      "k4", 4, std::vector<std::int64_t>(16, 1));
  const Graph g = Graph::Complete(SharedWeights(inst));
  const RepairResult r = RepairIsolated(g, g, FrequencyTable(4));
  EXPECT_TRUE(r.graph.SameEdges(g));
  EXPECT_TRUE(r.repaired.empty());
  EXPECT_TRUE(r.shortfall.empty());
}

TEST(RepairTest, RestoresTwoBestEdges) {
  const Instance inst = Instance::FromMatrix(
      "k5", 5, std::vector<std::int64_t>(25, 1));
  const auto w = SharedWeights(inst);
  Graph previous(w, 0);
  previous.AddEdge(0, 1);
  previous.AddEdge(0, 2);
  previous.AddEdge(0, 3);
  previous.AddEdge(1, 2);
  previous.AddEdge(3, 4);
  FrequencyTable t(5);
  SetAverage(t, 0, 1, 42, 10);
  SetAverage(t, 0, 2, 31, 10);
  SetAverage(t, 0, 3, 20, 10);
  Graph pruned(w, 1);
  pruned.AddEdge(1, 2);
  pruned.AddEdge(3, 4);
  const RepairResult r = RepairIsolated(pruned, previous, t);
  EXPECT_EQ(r.repaired, (std::vector<Vertex>{0}));
  EXPECT_TRUE(r.shortfall.empty());
  EXPECT_TRUE(r.graph.HasEdge(0, 1));
  EXPECT_TRUE(r.graph.HasEdge(0, 2));
  EXPECT_FALSE(r.graph.HasEdge(0, 3));
  EXPECT_EQ(r.graph.edge_count(), 4);
}

TEST(RepairTest, ShortfallWhenFewerThanTwo) {
  const Instance inst = Instance::FromMatrix(
      "k4", 4, std::vector<std::int64_t>(16, 1));
  const auto w = SharedWeights(inst);
  Graph previous(w, 0);
  previous.AddEdge(0, 1);
  previous.AddEdge(1, 2);
  previous.AddEdge(2, 3);
  Graph pruned(w, 1);
  pruned.AddEdge(1, 2);
  pruned.AddEdge(2, 3);
  const RepairResult r = RepairIsolated(pruned, previous, FrequencyTable(4));
  EXPECT_EQ(r.repaired, (std::vector<Vertex>{0}));
  EXPECT_EQ(r.shortfall, (std::vector<Vertex>{0}));
  EXPECT_TRUE(r.graph.HasEdge(0, 1));
}

TEST(StopCheckTest, NBelowRule) {
  const std::set<StopRule> rules = {StopRule::kNBelowRule};
  CycleReport report;
  report.edge_count = 300;
  report.n_below_3 = 90;
  EXPECT_EQ(StopCheck(report, 100, 1, 10, rules), StopRule::kNBelowRule);
  report.n_below_3 = 150;
  EXPECT_FALSE(StopCheck(report, 100, 1, 10, rules));
  report.n_below_3 = 100;
  EXPECT_EQ(StopCheck(report, 100, 1, 10, rules), StopRule::kNBelowRule);
}

TEST(StopCheckTest, EdgeTargetAndCap) {
  const std::set<StopRule> all = {StopRule::kNBelowRule, StopRule::kEdgeTarget,
                                  StopRule::kKMaxCap};
  CycleReport report;
  report.edge_count = 149;
  report.n_below_3 = 149;
  report.k = 2;
  // Keep(149) = 100, not below 100.
  EXPECT_FALSE(StopCheck(report, 100, 1, 10, all));
  report.edge_count = 148;
  report.n_below_3 = 148;
  EXPECT_EQ(StopCheck(report, 100, 1, 10, all), StopRule::kEdgeTarget);
  report.edge_count = 1000;
  report.n_below_3 = 1000;
  report.k = 10;
  EXPECT_EQ(StopCheck(report, 100, 1, 10, all), StopRule::kKMaxCap);
  EXPECT_FALSE(StopCheck(report, 100, 1, 10, {}));
}

TEST(RunTest, ExampleStopsAtOptimalTour) {
  SparsifyConfig cfg;
  cfg.c = 1;
  cfg.stop_rules = {StopRule::kEdgeTarget};
  const Tour tour({0, 2, 1, 3}, 4);
  const SparsifyResult r = quadfreq::Run(ExampleInstance(), cfg, tour);
  EXPECT_EQ(r.stop_reason, "edge_target");
  EXPECT_EQ(r.stop_cycle, 1);
  ASSERT_EQ(r.cycles.size(), 2u);
  EXPECT_EQ(r.output().graph.edge_count(), 4);
  EXPECT_EQ(r.output().report.lost_ohc, 0);
  for (const auto& [u, v] : tour.edges()) {
    EXPECT_TRUE(r.output().graph.HasEdge(u, v));
  }
  // G_1 is the 4-cycle scored as an incomplete quad: every edge averages 3.
  EXPECT_TRUE(r.output().report.incomplete_scoring);
  EXPECT_EQ(r.output().report.n_below_3, 0);
}

TEST(RunTest, ExampleNBelowRuleFiresOnCompleteGraph) {
  SparsifyConfig cfg;
  cfg.c = 1;
  const SparsifyResult r = quadfreq::Run(ExampleInstance(), cfg);
  // AB and CD average 1: 2 * 3 <= 6.
  EXPECT_EQ(r.stop_reason, "n_below_rule");
  EXPECT_EQ(r.stop_cycle, 0);
  EXPECT_EQ(r.output().graph.edge_count(), 6);
}

TEST(RunTest, ExtraCyclesAreFlagged) {
  SparsifyConfig cfg;
  cfg.c = 1;
  cfg.max_extra_cycles_after_stop = 1;
  const SparsifyResult r = quadfreq::Run(ExampleInstance(), cfg);
  ASSERT_EQ(r.cycles.size(), 2u);
  EXPECT_EQ(r.stop_cycle, 0);
  EXPECT_FALSE(r.cycles[0].report.after_stop);
  EXPECT_TRUE(r.cycles[1].report.after_stop);
  EXPECT_FALSE(r.cycles[1].report.stop_triggered);
}

class Gr17RunTest : public ::testing::Test {
 protected:
  void SetUp() override {
    instance_ = std::make_unique<Instance>(
        ReadInstanceFile(DataPath("gr17.tsp")));
    tour_ = std::make_unique<Tour>(ReadTourFile(DataPath("gr17.opt.tour"), 17));
  }
  SparsifyConfig Config() const {
    SparsifyConfig cfg;
    cfg.c = 1;
    cfg.perturb = true;
    cfg.perturb_seed = 42;
    cfg.stop_rules = {StopRule::kEdgeTarget, StopRule::kKMaxCap};
    return cfg;
  }
  std::unique_ptr<Instance> instance_;
  std::unique_ptr<Tour> tour_;
};

TEST_F(Gr17RunTest, CountLawAndNesting) {
  const SparsifyResult r = quadfreq::Run(*instance_, Config(), *tour_);
  ASSERT_GE(r.cycles.size(), 2u);
  EXPECT_EQ(r.cycles[0].report.edge_count, 136);
  for (std::size_t k = 1; k < r.cycles.size(); ++k) {
    const Cycle& prev = r.cycles[k - 1];
    const Cycle& cur = r.cycles[k];
    const std::int64_t kept = RetentionRatio{}.Keep(prev.report.edge_count);
    EXPECT_GE(cur.report.edge_count, kept);
    if (prev.report.repaired_vertices.empty()) {
      EXPECT_EQ(cur.report.edge_count, kept);
    }
    for (const Edge& e : cur.graph.Edges()) {
      EXPECT_TRUE(prev.graph.HasEdge(e.u, e.v));
    }
    EXPECT_EQ(cur.graph.cycle(), static_cast<int>(k));
  }
}

TEST_F(Gr17RunTest, TableIsComputedOnReportedGraph) {
  const SparsifyResult r = quadfreq::Run(*instance_, Config(), *tour_);
  for (const Cycle& c : r.cycles) {
    const FrequencyTable again =
        Accumulate(c.graph, r.config.mode, c.report.incomplete_scoring, 1);
    EXPECT_EQ(again, c.table);
    EXPECT_EQ(c.report.edge_count, c.graph.edge_count());
    EXPECT_EQ(c.report.n_below_3, c.table.CountBelow(c.graph, 3));
    EXPECT_LE(c.report.n_below_3 + c.report.n_unscored, c.report.edge_count);
    EXPECT_EQ(c.report.lost_ohc, LostOhcEdges(c.graph, *tour_));
    EXPECT_EQ(c.report.incomplete_scoring,
              c.report.k >= r.config.incomplete_activation_cycle);
  }
}

TEST_F(Gr17RunTest, Deterministic) {
  const SparsifyResult a = quadfreq::Run(*instance_, Config(), *tour_);
  SparsifyConfig cfg = Config();
  cfg.workers = 3;
  const SparsifyResult b = quadfreq::Run(*instance_, cfg, *tour_);
  ASSERT_EQ(a.cycles.size(), b.cycles.size());
  for (std::size_t k = 0; k < a.cycles.size(); ++k) {
    EXPECT_TRUE(a.cycles[k].graph.SameEdges(b.cycles[k].graph));
    EXPECT_EQ(a.cycles[k].table, b.cycles[k].table);
  }
  EXPECT_EQ(a.stop_reason, b.stop_reason);
  EXPECT_EQ(a.stop_cycle, b.stop_cycle);
}

TEST_F(Gr17RunTest, TourDoesNotChangeGraphs) {
  const SparsifyResult with = quadfreq::Run(*instance_, Config(), *tour_);
  const SparsifyResult without = quadfreq::Run(*instance_, Config());
  ASSERT_EQ(with.cycles.size(), without.cycles.size());
  for (std::size_t k = 0; k < with.cycles.size(); ++k) {
    EXPECT_TRUE(with.cycles[k].graph.SameEdges(without.cycles[k].graph));
    EXPECT_FALSE(without.cycles[k].report.lost_ohc);
  }
}

TEST_F(Gr17RunTest, KMaxCapStopsAtKMax) {
  SparsifyConfig cfg = Config();
  cfg.stop_rules = {StopRule::kKMaxCap};
  const SparsifyResult r = quadfreq::Run(*instance_, cfg);
  EXPECT_EQ(r.config.k_max, 6);
  if (r.stop_reason == "k_max_cap") EXPECT_EQ(r.stop_cycle, 6);
}

TEST_F(Gr17RunTest, TourSizeMismatchRejected) {
  const Tour small({0, 1, 2, 3}, 4);
  EXPECT_THROW(quadfreq::Run(*instance_, Config(), small), ContractViolation);
}

TEST(ResolveTest, Defaults) {
  const Instance gr17 = ReadInstanceFile(DataPath("gr17.tsp"));
  const ResolvedConfig r = Resolve(SparsifyConfig{}, gr17);
  EXPECT_EQ(r.c, 5.0);
  EXPECT_TRUE(r.perturb);
  EXPECT_EQ(r.incomplete_activation_cycle, 4);
  EXPECT_EQ(r.k_max, KMax(17, 5.0));
  SparsifyConfig bad;
  bad.c = 0.5;
  EXPECT_THROW(Resolve(bad, gr17), ContractViolation);
  const Instance berlin = ReadInstanceFile(DataPath("berlin52.tsp"));
  EXPECT_FALSE(Resolve(SparsifyConfig{}, berlin).perturb);
}

}  // namespace
}  // namespace quadfreq
