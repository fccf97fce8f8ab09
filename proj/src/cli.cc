#include "quadfreq/cli.h"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "quadfreq/analysis.h"

namespace quadfreq {
namespace {

using Json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json VertexList(const std::vector<Vertex>& vertices) {
  Json list = Json::array();
  for (const Vertex v : vertices) list.push_back(v + 1);
  return list;
}

std::string FormatDouble(double x, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

std::string PerturbText(const ResolvedConfig& cfg) {
  return cfg.perturb ? "on:" + std::to_string(cfg.perturb_seed) : "off";
}

Json ConfigJson(const ResolvedConfig& cfg) {
  Json config;
  config["c"] = cfg.c;
  config["retention_ratio"] = std::to_string(cfg.retention.num) + "/" +
                              std::to_string(cfg.retention.den);
  config["mode"] = cfg.mode.ToString();
  config["perturb"] = PerturbText(cfg);
  config["incomplete_activation_cycle"] = cfg.incomplete_activation_cycle;
  Json rules = Json::array();
  for (const StopRule rule : cfg.stop_rules) rules.push_back(StopRuleName(rule));
  config["stop_rules"] = rules;
  config["max_extra_cycles_after_stop"] = cfg.max_extra_cycles_after_stop;
  config["k_max"] = cfg.k_max;
  return config;
}

Json CycleJson(const CycleReport& r) {
  Json j;
  j["k"] = r.k;
  j["edge_count"] = r.edge_count;
  j["n_below_3"] = r.n_below_3;
  j["n_unscored"] = r.n_unscored;
  if (r.kept_cut_value) {
    j["kept_cut_value"] = r.kept_cut_value->ToDouble();
    j["kept_cut_exact"] = std::to_string(r.kept_cut_value->num) + "/" +
                          std::to_string(r.kept_cut_value->den);
  } else {
    j["kept_cut_value"] = nullptr;
    j["kept_cut_exact"] = nullptr;
  }
  j["repaired_vertices"] = VertexList(r.repaired_vertices);
  j["repair_shortfall"] = VertexList(r.repair_shortfall);
  j["degree_one_vertices"] = VertexList(r.degree_one_vertices);
  j["stop_triggered"] =
      r.stop_triggered ? Json(*r.stop_triggered) : Json(nullptr);
  j["after_stop"] = r.after_stop;
  j["incomplete_scoring"] = r.incomplete_scoring;
  j["complete_quads"] = r.complete_quads;
  j["incomplete_quads"] = r.incomplete_quads;
  if (r.lost_ohc) j["lost_ohc"] = *r.lost_ohc;
  return j;
}

Json MetricsJson(const Metrics& m) {
  Json j;
  j["n"] = m.n;
  j["edge_count"] = m.edge_count;
  j["c"] = m.c;
  j["d"] = m.d;
  j["d_ceil"] = m.d_ceil;
  j["rho"] = m.rho ? Json(*m.rho) : Json(nullptr);
  if (m.l_ohc) j["l_ohc"] = *m.l_ohc;
  return j;
}

Metrics FinalMetrics(const SparsifyResult& result) {
  const Cycle& out = result.output();
  std::optional<StopContext> stop;
  if (result.stop_reason) {
    stop = StopContext{out.report.edge_count, out.report.n_below_3};
  }
  Metrics m = ComputeMetrics(out.graph, stop);
  m.l_ohc = out.report.lost_ohc;
  return m;
}

// Comparison against reference values from --expect; never a failure.
Json CompareWithExpected(const SparsifyResult& result, const Json& expect) {
  Json block;
  Json counts = Json::array();
  if (expect.contains("edge_counts")) {
    for (const auto& [key, value] : expect["edge_counts"].items()) {
      const int k = std::stoi(key);
      Json row;
      row["k"] = k;
      row["expected"] = value;
      if (k < static_cast<int>(result.cycles.size())) {
        const auto ours = result.cycles[k].report.edge_count;
        row["ours"] = ours;
        row["relative_difference"] =
            (static_cast<double>(ours) - value.get<double>()) /
            value.get<double>();
      } else {
        row["ours"] = nullptr;
        row["relative_difference"] = nullptr;
      }
      counts.push_back(row);
    }
  }
  block["edge_counts"] = counts;
  if (expect.contains("first_loss_cycle")) {
    std::optional<int> first;
    for (const Cycle& c : result.cycles) {
      if (c.report.lost_ohc.value_or(0) > 0) {
        first = c.report.k;
        break;
      }
    }
    block["first_loss_cycle"] = {
        {"expected", expect["first_loss_cycle"]},
        {"ours", first ? Json(*first) : Json(nullptr)}};
  }
  if (expect.contains("stop_cycle")) {
    block["stop_cycle"] = {{"expected", expect["stop_cycle"]},
                           {"ours", result.stop_cycle}};
  }
  if (expect.contains("c")) {
    block["c"] = {{"expected", expect["c"]}, {"ours", FinalMetrics(result).c}};
  }
  return block;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write file: " + path.string());
  file << text;
  if (!file) throw IoError("write failed: " + path.string());
}

void PrintSummary(const SparsifyResult& result, const Instance& instance,
                  std::ostream& out) {
  out << instance.name() << " (n=" << instance.size() << ", "
      << result.config.mode.ToString()
      << ", perturb " << PerturbText(result.config) << ")\n";
  out << std::setw(4) << "k" << std::setw(10) << "|E_k|" << std::setw(8)
      << "N<3" << std::setw(8) << "N=0" << std::setw(8) << "lost"
      << "  note\n";
  for (const Cycle& c : result.cycles) {
    const CycleReport& r = c.report;
    std::string note;
    if (r.stop_triggered) note += "stop:" + *r.stop_triggered;
    if (r.after_stop) note += note.empty() ? "after_stop" : " after_stop";
    if (!r.repaired_vertices.empty()) {
      note += (note.empty() ? "" : " ") + std::string("repaired:") +
              std::to_string(r.repaired_vertices.size());
    }
    out << std::setw(4) << r.k << std::setw(10) << r.edge_count << std::setw(8)
        << r.n_below_3 << std::setw(8) << r.n_unscored << std::setw(8)
        << (r.lost_ohc ? std::to_string(*r.lost_ohc) : "-") << "  " << note
        << "\n";
  }
  const Metrics m = FinalMetrics(result);
  out << "k_s=" << result.stop_cycle << " stop="
      << result.stop_reason.value_or("none") << " |E|=" << m.edge_count
      << " c=" << FormatDouble(m.c, 3) << " d=" << m.d;
  if (m.rho) out << " rho=" << FormatDouble(*m.rho, 3);
  if (m.l_ohc) out << " l_ohc=" << *m.l_ohc;
  out << "\n";
}

struct SparsifyArgs {
  std::string instance;
  std::string tour;
  std::string c;
  std::string mode = "exhaustive";
  std::string perturb;
  int extra_cycles = 0;
  std::string out;
  bool final_only = false;
  std::string expect;
  std::string stop_rules;
  std::string activation;
};

SparsifyConfig MakeConfig(const SparsifyArgs& a) {
  SparsifyConfig cfg;
  if (!a.c.empty() && a.c != "auto") {
    std::size_t used = 0;
    try {
      cfg.c = std::stod(a.c, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != a.c.size()) throw ParseError("bad --c value '" + a.c + "'", 0);
  }
  cfg.mode = SamplingMode::Parse(a.mode);
  if (a.perturb == "off") {
    cfg.perturb = false;
  } else if (a.perturb.rfind("on:", 0) == 0) {
    const std::string seed = a.perturb.substr(3);
    std::size_t used = 0;
    try {
      cfg.perturb_seed = std::stoull(seed, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (seed.empty() || used != seed.size() || seed[0] == '-') {
      throw ParseError("bad --perturb value '" + a.perturb + "'", 0);
    }
    cfg.perturb = true;
  } else if (!a.perturb.empty()) {
    throw ParseError("bad --perturb value '" + a.perturb +
                         "' (expected on:<seed> or off)",
                     0);
  }
  cfg.max_extra_cycles_after_stop = a.extra_cycles;
  if (!a.stop_rules.empty()) {
    cfg.stop_rules.clear();
    std::stringstream list(a.stop_rules);
    std::string name;
    while (std::getline(list, name, ',')) cfg.stop_rules.insert(ParseStopRule(name));
  }
  if (!a.activation.empty()) {
    try {
      cfg.incomplete_activation_cycle = std::stoi(a.activation);
    } catch (const std::logic_error&) {
      throw ParseError("bad --activation-cycle value '" + a.activation + "'",
                       0);
    }
  }
  return cfg;
}

int CmdSparsify(const SparsifyArgs& a, std::ostream& out) {
  const Instance instance = ReadInstanceFile(a.instance);
  std::optional<Tour> tour;
  if (!a.tour.empty()) {
    tour = ReadTourFile(a.tour);
    if (tour->size() != instance.size()) {
      throw ContractViolation("tour dimension " + std::to_string(tour->size()) +
                              " does not match instance dimension " +
                              std::to_string(instance.size()));
    }
  }
  const SparsifyConfig cfg = MakeConfig(a);
  Json expect;
  if (!a.expect.empty()) {
    try {
      expect = Json::parse(ReadFileToString(a.expect));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("bad --expect file " + a.expect + ": " + e.what(), 0);
    }
  }
  const SparsifyResult result = Run(instance, cfg, tour);
  Json report = BuildReport(result, instance, a.instance, a.tour);
  if (!expect.is_null()) report["comparison"] = CompareWithExpected(result, expect);

  if (!a.out.empty()) {
    const std::filesystem::path dir(a.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory: " + a.out);
    for (const Cycle& c : result.cycles) {
      if (a.final_only && c.report.k != result.stop_cycle) continue;
      WriteFile(dir / ("graph_k" + std::to_string(c.report.k) + ".edges"),
                FormatEdges(c));
    }
    WriteFile(dir / "report.json", report.dump(2) + "\n");
  }
  PrintSummary(result, instance, out);
  return 0;
}

struct ParsedEdges {
  std::vector<std::array<std::int64_t, 3>> rows;  // u, v (0-indexed), dist
  std::int64_t max_vertex = -1;
};

ParsedEdges ReadEdgesFile(const std::string& path) {
  const std::string text = ReadFileToString(path);
  std::istringstream in(text);
  std::string line;
  ParsedEdges parsed;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::int64_t u = 0;
    std::int64_t v = 0;
    std::int64_t dist = 0;
    double fbar = 0;
    if (!(fields >> u >> v >> dist >> fbar) || u < 1 || v < 1 || u == v ||
        dist < 0) {
      throw ParseError("bad edge line in " + path, line_no);
    }
    parsed.rows.push_back({u - 1, v - 1, dist});
    parsed.max_vertex = std::max({parsed.max_vertex, u - 1, v - 1});
  }
  return parsed;
}

int CmdVerify(const std::string& graph_path, const std::string& tour_path,
              const std::string& instance_path, std::ostream& out) {
  const ParsedEdges edges = ReadEdgesFile(graph_path);
  const Tour tour = ReadTourFile(tour_path);
  const int n = tour.size();
  if (!instance_path.empty()) {
    const Instance instance = ReadInstanceFile(instance_path);
    if (instance.size() != n) {
      throw ContractViolation("dimension mismatch: instance has " +
                              std::to_string(instance.size()) +
                              " vertices, tour has " + std::to_string(n));
    }
  }
  if (edges.max_vertex >= n) {
    throw ContractViolation("dimension mismatch: graph uses vertex " +
                            std::to_string(edges.max_vertex + 1) +
                            " but tour has " + std::to_string(n));
  }
  const auto cells = static_cast<std::size_t>(n) * n;
  std::vector<std::int64_t> original(cells, 0);
  for (const auto& [u, v, dist] : edges.rows) {
    original[u * n + v] = dist;
    original[v * n + u] = dist;
  }
  std::vector<std::int64_t> working = original;
  for (auto& w : working) w *= kWeightScale;
  auto weights = std::make_shared<const Weights>(n, std::move(original),
                                                 std::move(working), false);
  Graph graph(weights, 0);
  for (const auto& [u, v, dist] : edges.rows) {
    graph.AddEdge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  const int lost = LostOhcEdges(graph, tour);
  out << "lost_ohc: " << lost << "\n";
  out << "edges: " << graph.edge_count() << "\n";
  if (graph.edge_count() > 0) {
    const Metrics m = ComputeMetrics(graph);
    out << "c: " << FormatDouble(m.c, 3) << "\n";
    out << "d: " << m.d << "\n";
    out << "d_ceil: " << m.d_ceil << "\n";
  }
  return 0;
}

int CmdDiagnose(int n, int trials, std::uint64_t seed, int quads,
                std::ostream& out) {
  if (n > kMaxBruteForceN) {
    throw ContractViolation("--n " + std::to_string(n) +
                            " is too large: the exact tour oracle needs n <= " +
                            std::to_string(kMaxBruteForceN));
  }
  DiagnosticsConfig cfg;
  cfg.n = n;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.quads_per_edge = quads;
  const DiagnosticsReport r = FrequencyDiagnostics(cfg);
  auto frac = [](const std::array<std::int64_t, 3>& c, int i) {
    const double total = static_cast<double>(c[0] + c[1] + c[2]);
    return total > 0 ? static_cast<double>(c[i]) / total : 0.0;
  };
  const int min_index = static_cast<int>(
      std::min_element(r.ohc_mean_per_instance.begin(),
                       r.ohc_mean_per_instance.end()) -
      r.ohc_mean_per_instance.begin());
  out << "n=" << n << " trials=" << trials << " seed=" << seed
      << " quads_per_edge=" << quads << "\n";
  out << "all edges  p(f=5)=" << FormatDouble(frac(r.all_counts, 0), 4)
      << " p(f=3)=" << FormatDouble(frac(r.all_counts, 1), 4)
      << " p(f=1)=" << FormatDouble(frac(r.all_counts, 2), 4)
      << "  model 1/3 each\n";
  out << "OHC edges  p(f=5)=" << FormatDouble(frac(r.ohc_counts, 0), 4)
      << " p(f=3)=" << FormatDouble(frac(r.ohc_counts, 1), 4)
      << " p(f=1)=" << FormatDouble(frac(r.ohc_counts, 2), 4) << "  model "
      << FormatDouble(r.expected_ohc_p5(), 4) << " for f=5 and f=3\n";
  out << "OHC mean fbar=" << FormatDouble(r.ohc_grand_mean, 4)
      << " (min over instances "
      << FormatDouble(r.ohc_mean_per_instance[min_index], 4) << ")  model "
      << FormatDouble(r.expected_ohc_mean(), 4) << "\n";
  out << "OHC p(f>=3)=" << FormatDouble(r.ohc_p_ge3, 4) << "  model >= "
      << FormatDouble(2.0 / 3.0, 4) << "\n";
  out << "prior-work lower bound on OHC fbar (informational): "
      << FormatDouble(r.prior_lower_bound(), 4) << "\n";

  Json j;
  j["n"] = n;
  j["trials"] = trials;
  j["seed"] = seed;
  j["quads_per_edge"] = quads;
  j["all_counts"] = {{"f5", r.all_counts[0]}, {"f3", r.all_counts[1]},
                     {"f1", r.all_counts[2]}};
  j["ohc_counts"] = {{"f5", r.ohc_counts[0]}, {"f3", r.ohc_counts[1]},
                     {"f1", r.ohc_counts[2]}};
  j["quads_with_ties"] = r.quads_with_ties;
  j["ohc_grand_mean"] = r.ohc_grand_mean;
  j["ohc_min_instance_mean"] = r.ohc_mean_per_instance[min_index];
  j["expected_ohc_mean"] = r.expected_ohc_mean();
  j["all_grand_mean"] = r.all_grand_mean;
  j["ohc_p_ge3"] = r.ohc_p_ge3;
  j["expected_ohc_p5"] = r.expected_ohc_p5();
  j["prior_lower_bound"] = r.prior_lower_bound();
  out << j.dump(2) << "\n";
  return 0;
}

}  // namespace

std::string FormatEdges(const Cycle& cycle) {
  std::string text;
  char line[96];
  for (const Edge& e : cycle.graph.Edges()) {
    std::snprintf(line, sizeof line, "%" PRIu32 " %" PRIu32 " %" PRId64 " %.6f\n",
                  e.u + 1, e.v + 1, cycle.graph.weights().Original(e.u, e.v),
                  cycle.table.Average(e.u, e.v).ToDouble());
    text += line;
  }
  return text;
}

Json BuildReport(const SparsifyResult& result, const Instance& instance,
                 const std::string& instance_path,
                 const std::string& tour_path) {
  Json report;
  report["tool"] = "quadfreq";
  report["version"] = kToolVersion;
  report["instance_path"] = instance_path;
  report["tour_path"] = tour_path.empty() ? Json(nullptr) : Json(tour_path);
  report["instance"] = {{"name", instance.name()},
                        {"n", instance.size()},
                        {"edge_weight_type",
                         EdgeWeightKindName(instance.kind())}};
  report["config"] = ConfigJson(result.config);
  Json cycles = Json::array();
  for (const Cycle& c : result.cycles) cycles.push_back(CycleJson(c.report));
  report["cycles"] = cycles;
  report["stop"] = {
      {"reason", result.stop_reason ? Json(*result.stop_reason) : Json(nullptr)},
      {"cycle", result.stop_cycle}};
  report["metrics"] = MetricsJson(FinalMetrics(result));
  return report;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Quad-frequency sparsification of TSP instances"};
  app.require_subcommand(1);

  SparsifyArgs sa;
  CLI::App* sparsify = app.add_subcommand("sparsify", "Run the elimination");
  sparsify->add_option("--instance", sa.instance, "TSPLIB instance")->required();
  sparsify->add_option("--tour", sa.tour, "Optimal tour for lost-edge counts");
  sparsify->add_option("--c", sa.c, "Target sparsity coefficient or 'auto'");
  sparsify->add_option("--mode", sa.mode, "exhaustive | sampled:<N>:<seed>");
  sparsify->add_option("--perturb", sa.perturb, "on:<seed> | off");
  sparsify->add_option("--extra-cycles", sa.extra_cycles,
                       "Cycles to run past the stop rule")
      ->check(CLI::NonNegativeNumber);
  sparsify->add_option("--out", sa.out, "Output directory");
  sparsify->add_flag("--final-only", sa.final_only,
                     "Write only the emitted graph");
  sparsify->add_option("--expect", sa.expect, "Reference table JSON");
  sparsify->add_option("--stop-rules", sa.stop_rules,
                       "Comma list of n_below_rule,edge_target,k_max_cap");
  sparsify->add_option("--activation-cycle", sa.activation,
                       "First cycle that scores incomplete quads");

  std::string graph_path;
  std::string tour_path;
  std::string verify_instance;
  CLI::App* verify = app.add_subcommand("verify", "Count lost tour edges");
  verify->add_option("--graph", graph_path, "Edge file")->required();
  verify->add_option("--tour", tour_path, "Tour file")->required();
  verify->add_option("--instance", verify_instance, "Instance for a size check");

  int diag_n = 10;
  int diag_trials = 100;
  std::uint64_t diag_seed = 1;
  int diag_quads = 200;
  CLI::App* diagnose = app.add_subcommand("diagnose", "Probability model check");
  diagnose->add_option("--n", diag_n, "Vertices (<= 12)")->required();
  diagnose->add_option("--trials", diag_trials, "Random instances")->required();
  diagnose->add_option("--seed", diag_seed, "Seed")->required();
  diagnose->add_option("--quads-per-edge", diag_quads, "Samples per edge");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (sparsify->parsed()) return CmdSparsify(sa, out);
    if (verify->parsed()) {
      return CmdVerify(graph_path, tour_path, verify_instance, out);
    }
    return CmdDiagnose(diag_n, diag_trials, diag_seed, diag_quads, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace quadfreq
