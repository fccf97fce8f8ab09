#include "quadfreq/frequency.h"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <thread>

#include "quadfreq/quad.h"
#include "quadfreq/random.h"

namespace quadfreq {
namespace {

// Consecutive rejected draws after which sampling falls back to listing the
// edge's scoreable quads explicitly.
constexpr int kMaxRejections = 64;

bool Scoreable(std::uint8_t present, bool allow_incomplete) {
  const int edges = std::popcount(present);
  return edges == kQuadSlots || (allow_incomplete && edges >= 4);
}

// Scores every quad whose smallest vertex a satisfies a % stride == offset.
void ExhaustiveSlice(const Graph& graph, bool allow_incomplete, int offset,
                     int stride, FrequencyTable& table) {
  const int n = graph.size();
  std::array<std::int64_t, 6> w{};
  std::array<int, 6> freq{};
  for (Vertex a = offset; a < static_cast<Vertex>(n); a += stride) {
    for (Vertex b = a + 1; b < static_cast<Vertex>(n); ++b) {
      const int ab = graph.HasEdge(a, b);
      for (Vertex c = b + 1; c < static_cast<Vertex>(n); ++c) {
        const int ac = graph.HasEdge(a, c);
        const int bc = graph.HasEdge(b, c);
        const int triangle = ab + ac + bc;
        // The other three pairs can add at most three edges.
        if (triangle == 0 || (!allow_incomplete && triangle < 3)) continue;
        for (Vertex d = c + 1; d < static_cast<Vertex>(n); ++d) {
          const int ad = graph.HasEdge(a, d);
          const int bd = graph.HasEdge(b, d);
          const int cd = graph.HasEdge(c, d);
          const std::uint8_t present = static_cast<std::uint8_t>(
              ab | (ac << 1) | (ad << 2) | (bc << 3) | (bd << 4) | (cd << 5));
          if (!Scoreable(present, allow_incomplete)) continue;
          const std::array<Vertex, 4> q = {a, b, c, d};
          for (int s = 0; s < kQuadSlots; ++s) {
            if ((present >> s) & 1u) {
              const auto [i, j] = SlotEndpoints(s);
              w[s] = graph.Weight(q[i], q[j]);
            }
          }
          ScoreSlots(present, w.data(), freq.data());
          for (int s = 0; s < kQuadSlots; ++s) {
            if ((present >> s) & 1u) {
              const auto [i, j] = SlotEndpoints(s);
              table.Add(q[i], q[j], freq[s]);
            }
          }
          if (present == kAllSlots) {
            ++table.complete_quads;
          } else {
            ++table.incomplete_quads;
          }
        }
      }
    }
  }
}

// Scores one sampled quad {u, v, x, y} and returns the frequency of (u, v),
// or -1 when the quad is not scoreable.
int ScoreForEdge(const Graph& graph, Vertex u, Vertex v, Vertex x, Vertex y,
                 bool allow_incomplete, bool* complete) {
  const Quad quad = MakeQuad(graph, {u, v, x, y});
  if (!Scoreable(quad.present, allow_incomplete)) return -1;
  *complete = quad.present == kAllSlots;
  const QuadFrequencies f = ScoreQuad(quad);
  int iu = 0;
  int iv = 0;
  for (int i = 0; i < 4; ++i) {
    if (quad.vertices[i] == u) iu = i;
    if (quad.vertices[i] == v) iv = i;
  }
  return f.freq[SlotOf(iu, iv)];
}

void SampledSlice(const Graph& graph, const SamplingMode& mode,
                  bool allow_incomplete, const std::vector<Edge>& edges,
                  int offset, int stride, FrequencyTable& table) {
  const int n = graph.size();
  std::vector<Vertex> others;
  for (std::size_t i = offset; i < edges.size(); i += stride) {
    const auto [u, v] = edges[i];
    Rng rng(DeriveSeed(mode.seed, {u, v}));
    others.clear();
    for (Vertex w = 0; w < static_cast<Vertex>(n); ++w) {
      if (w != u && w != v) others.push_back(w);
    }
    const std::uint64_t m = others.size();
    std::vector<std::pair<Vertex, Vertex>> listed;
    bool use_list = false;
    std::int64_t drawn = 0;
    int rejections = 0;
    bool complete = false;
    while (drawn < mode.samples) {
      if (!use_list) {
        const std::uint64_t i1 = rng.Below(m);
        std::uint64_t i2 = rng.Below(m - 1);
        if (i2 >= i1) ++i2;
        const int f = ScoreForEdge(graph, u, v, others[i1], others[i2],
                                   allow_incomplete, &complete);
        if (f < 0) {
          if (++rejections >= kMaxRejections) {
            use_list = true;
            for (std::size_t a = 0; a < others.size(); ++a) {
              for (std::size_t b = a + 1; b < others.size(); ++b) {
                const Quad quad =
                    MakeQuad(graph, {u, v, others[a], others[b]});
                if (Scoreable(quad.present, allow_incomplete)) {
                  listed.emplace_back(others[a], others[b]);
                }
              }
            }
            if (listed.empty()) break;
          }
          continue;
        }
        rejections = 0;
        table.Add(u, v, f);
      } else {
        const auto& [x, y] = listed[rng.Below(listed.size())];
        table.Add(u, v,
                  ScoreForEdge(graph, u, v, x, y, allow_incomplete, &complete));
      }
      if (complete) {
        ++table.complete_quads;
      } else {
        ++table.incomplete_quads;
      }
      ++drawn;
    }
  }
}

}  // namespace

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const std::int64_t an = a.den == 0 ? 0 : a.num;
  const std::int64_t ad = a.den == 0 ? 1 : a.den;
  const std::int64_t bn = b.den == 0 ? 0 : b.num;
  const std::int64_t bd = b.den == 0 ? 1 : b.den;
  const __int128 lhs = static_cast<__int128>(an) * bd;
  const __int128 rhs = static_cast<__int128>(bn) * ad;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

SamplingMode SamplingMode::Sampled(std::int64_t samples, std::uint64_t seed) {
  if (samples <= 0) throw ContractViolation("sample count must be positive");
  return SamplingMode{Kind::kSampled, samples, seed};
}

std::string SamplingMode::ToString() const {
  if (kind == Kind::kExhaustive) return "exhaustive";
  return "sampled:" + std::to_string(samples) + ":" + std::to_string(seed);
}

SamplingMode SamplingMode::Parse(const std::string& text) {
  if (text == "exhaustive") return Exhaustive();
  const std::string prefix = "sampled:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      try {
        std::size_t used = 0;
        const long long samples = std::stoll(rest.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("samples");
        const std::string seed_text = rest.substr(colon + 1);
        const unsigned long long seed = std::stoull(seed_text, &used);
        if (used != seed_text.size() || seed_text.empty() ||
            seed_text[0] == '-') {
          throw std::invalid_argument("seed");
        }
        return Sampled(samples, seed);
      } catch (const std::logic_error&) {
      }
    }
  }
  throw ParseError("bad mode '" + text +
                       "' (expected exhaustive or sampled:<N>:<seed>)",
                   0);
}

FrequencyTable::FrequencyTable(int n)
    : n_(n),
      total_(static_cast<std::size_t>(n) * n, 0),
      count_(static_cast<std::size_t>(n) * n, 0) {}

Rational FrequencyTable::Average(Vertex u, Vertex v) const {
  const std::size_t i = Index(u, v);
  if (count_[i] == 0) return Rational{0, 1};
  return Rational{total_[i], count_[i]};
}

void FrequencyTable::Add(Vertex u, Vertex v, std::int64_t frequency,
                         std::int64_t quads) {
  const std::size_t i = Index(u, v);
  total_[i] += frequency;
  count_[i] += quads;
}

void FrequencyTable::Merge(const FrequencyTable& other) {
  if (other.n_ != n_) throw ContractViolation("table size mismatch");
  for (std::size_t i = 0; i < total_.size(); ++i) {
    total_[i] += other.total_[i];
    count_[i] += other.count_[i];
  }
  complete_quads += other.complete_quads;
  incomplete_quads += other.incomplete_quads;
}

bool FrequencyTable::NothingScored(const Graph& graph) const {
  for (const Edge& e : graph.Edges()) {
    if (Count(e.u, e.v) > 0) return false;
  }
  return true;
}

std::int64_t FrequencyTable::CountBelow(const Graph& graph,
                                        std::int64_t threshold) const {
  std::int64_t below = 0;
  for (const Edge& e : graph.Edges()) {
    const std::int64_t count = Count(e.u, e.v);
    if (count > 0 && Total(e.u, e.v) < threshold * count) ++below;
  }
  return below;
}

std::int64_t FrequencyTable::CountUnscored(const Graph& graph) const {
  std::int64_t unscored = 0;
  for (const Edge& e : graph.Edges()) {
    if (Count(e.u, e.v) == 0) ++unscored;
  }
  return unscored;
}

int DefaultWorkerCount() {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;
  if (const char* cap = std::getenv("QUADFREQ_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit > 0) workers = std::min(workers, limit);
  }
  return workers;
}

FrequencyTable Accumulate(const Graph& graph, const SamplingMode& mode,
                          bool allow_incomplete, int workers) {
  if (graph.size() < 4) throw ContractViolation("graph needs >= 4 vertices");
  if (workers <= 0) workers = DefaultWorkerCount();
  const int n = graph.size();
  const std::vector<Edge> edges =
      mode.kind == SamplingMode::Kind::kSampled ? graph.Edges()
                                                : std::vector<Edge>{};
  workers = std::max(1, std::min(workers, n));

  std::vector<FrequencyTable> partial(workers, FrequencyTable(n));
  auto work = [&](int w) {
    if (mode.kind == SamplingMode::Kind::kExhaustive) {
      ExhaustiveSlice(graph, allow_incomplete, w, workers, partial[w]);
    } else {
      SampledSlice(graph, mode, allow_incomplete, edges, w, workers,
                   partial[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }
  FrequencyTable table = std::move(partial[0]);
  for (int w = 1; w < workers; ++w) table.Merge(partial[w]);
  return table;
}

}  // namespace quadfreq
