// Working edge weights and the preserved graph G_k.

#ifndef QUADFREQ_GRAPH_H_
#define QUADFREQ_GRAPH_H_

#include <compare>
#include <cstdint>
#include <memory>
#include <vector>

#include "quadfreq/tsplib.h"

namespace quadfreq {

// Working weights are fixed-point integers: original * kWeightScale plus an
// optional perturbation in (0, kWeightScale]. All quad comparisons are exact
// integer comparisons on these values.
inline constexpr int kWeightScaleBits = 32;
inline constexpr std::int64_t kWeightScale = std::int64_t{1}
                                             << kWeightScaleBits;
// Largest original distance whose doubled working weight fits in int64.
inline constexpr std::int64_t kMaxOriginalDistance = (std::int64_t{1} << 29) - 1;

struct Edge {
  Vertex u = 0;  // u < v
  Vertex v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge MakeEdge(Vertex a, Vertex b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

class Weights {
 public:
  // Unperturbed weights from an instance.
  static Weights FromInstance(const Instance& instance);
  // `original` and `working` are row-major n x n; working must be
  // symmetric and is what all comparisons use.
  Weights(int n, std::vector<std::int64_t> original,
          std::vector<std::int64_t> working, bool perturbed);

  int size() const { return n_; }
  bool perturbed() const { return perturbed_; }
  std::int64_t Original(Vertex u, Vertex v) const {
    return original_[Index(u, v)];
  }
  std::int64_t Working(Vertex u, Vertex v) const {
    return working_[Index(u, v)];
  }
  double WorkingAsReal(Vertex u, Vertex v) const {
    return static_cast<double>(Working(u, v)) / kWeightScale;
  }

  // Same comparisons under a positive integer rescaling of the originals.
  Weights Scaled(std::int64_t factor) const;

  bool operator==(const Weights&) const = default;

 private:
  std::size_t Index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * n_ + v;
  }

  int n_ = 0;
  std::vector<std::int64_t> original_;
  std::vector<std::int64_t> working_;
  bool perturbed_ = false;
};

class Graph {
 public:
  Graph(std::shared_ptr<const Weights> weights, int cycle);

  static Graph Complete(std::shared_ptr<const Weights> weights);

  int size() const { return n_; }
  int cycle() const { return cycle_; }
  void set_cycle(int k) { cycle_ = k; }
  const Weights& weights() const { return *weights_; }
  const std::shared_ptr<const Weights>& shared_weights() const {
    return weights_;
  }

  bool HasEdge(Vertex u, Vertex v) const {
    return u != v && present_[static_cast<std::size_t>(u) * n_ + v] != 0;
  }
  std::int64_t Weight(Vertex u, Vertex v) const {
    return weights_->Working(u, v);
  }
  // Returns true if the edge was newly added.
  bool AddEdge(Vertex u, Vertex v);
  bool RemoveEdge(Vertex u, Vertex v);

  std::int64_t edge_count() const { return edge_count_; }
  int Degree(Vertex v) const { return degree_[v]; }
  // Lexicographically sorted.
  std::vector<Edge> Edges() const;
  std::vector<Vertex> Neighbors(Vertex v) const;

  bool SameEdges(const Graph& other) const {
    return present_ == other.present_;
  }

 private:
  int n_ = 0;
  int cycle_ = 0;
  std::shared_ptr<const Weights> weights_;
  std::vector<std::uint8_t> present_;
  std::vector<int> degree_;
  std::int64_t edge_count_ = 0;
};

}  // namespace quadfreq

#endif  // QUADFREQ_GRAPH_H_
