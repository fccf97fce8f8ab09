// Per-edge frequency accumulation over a graph's quadrilaterals.

#ifndef QUADFREQ_FREQUENCY_H_
#define QUADFREQ_FREQUENCY_H_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "quadfreq/graph.h"

namespace quadfreq {

// Exact non-negative rational; a zero denominator reads as 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double ToDouble() const {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
};

struct SamplingMode {
  enum class Kind { kExhaustive, kSampled };
  Kind kind = Kind::kExhaustive;
  std::int64_t samples = 0;  // per edge, sampled mode only
  std::uint64_t seed = 0;

  static SamplingMode Exhaustive() { return {}; }
  static SamplingMode Sampled(std::int64_t samples, std::uint64_t seed);

  // "exhaustive" or "sampled:<N>:<seed>".
  std::string ToString() const;
  static SamplingMode Parse(const std::string& text);
};

class FrequencyTable {
 public:
  explicit FrequencyTable(int n);

  int size() const { return n_; }
  // F(e): summed frequency of e over the quads that scored it.
  std::int64_t Total(Vertex u, Vertex v) const { return total_[Index(u, v)]; }
  // N(e): number of quads that scored e.
  std::int64_t Count(Vertex u, Vertex v) const { return count_[Index(u, v)]; }
  // F(e)/N(e), or 0 when N(e) = 0.
  Rational Average(Vertex u, Vertex v) const;

  void Add(Vertex u, Vertex v, std::int64_t frequency, std::int64_t quads = 1);
  void Merge(const FrequencyTable& other);

  // True when no edge of `graph` was scored by any quad.
  bool NothingScored(const Graph& graph) const;
  // Scored edges of `graph` whose average is strictly below `threshold`.
  std::int64_t CountBelow(const Graph& graph, std::int64_t threshold) const;
  // Edges of `graph` with N(e) = 0.
  std::int64_t CountUnscored(const Graph& graph) const;

  std::int64_t complete_quads = 0;
  std::int64_t incomplete_quads = 0;

  bool operator==(const FrequencyTable&) const = default;

 private:
  std::size_t Index(Vertex u, Vertex v) const {
    return u < v ? static_cast<std::size_t>(u) * n_ + v
                 : static_cast<std::size_t>(v) * n_ + u;
  }

  int n_ = 0;
  std::vector<std::int64_t> total_;
  std::vector<std::int64_t> count_;
};

// Worker count: hardware concurrency, capped by QUADFREQ_THREADS when set.
int DefaultWorkerCount();

// Exhaustive mode scores every 4-vertex subset once and credits all of its
// present edges; sampled mode draws `samples` scoreable quads per edge
// uniformly with replacement from a per-edge substream of the seed and
// credits only that edge. Complete quads are always scoreable; with
// `allow_incomplete`, so are quads with 4 or 5 edges. `workers` <= 0 means
// DefaultWorkerCount(). Output does not depend on the worker count.
FrequencyTable Accumulate(const Graph& graph, const SamplingMode& mode,
                          bool allow_incomplete, int workers = 0);

}  // namespace quadfreq

#endif  // QUADFREQ_FREQUENCY_H_
