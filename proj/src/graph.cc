#include "quadfreq/graph.h"

#include <string>

namespace quadfreq {

Weights Weights::FromInstance(const Instance& instance) {
  const int n = instance.size();
  std::vector<std::int64_t> original = instance.DistanceMatrix();
  std::vector<std::int64_t> working(original.size(), 0);
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (original[i] > kMaxOriginalDistance) {
      throw ContractViolation("distance " + std::to_string(original[i]) +
                              " exceeds the fixed-point range");
    }
    working[i] = original[i] * kWeightScale;
  }
  return Weights(n, std::move(original), std::move(working), false);
}

Weights::Weights(int n, std::vector<std::int64_t> original,
                 std::vector<std::int64_t> working, bool perturbed)
    : n_(n),
      original_(std::move(original)),
      working_(std::move(working)),
      perturbed_(perturbed) {
  const auto cells = static_cast<std::size_t>(n) * n;
  if (original_.size() != cells || working_.size() != cells) {
    throw ContractViolation("weight matrix size does not match n");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (working_[Index(i, j)] != working_[Index(j, i)]) {
        throw ContractViolation("working weights are not symmetric");
      }
    }
  }
}

Weights Weights::Scaled(std::int64_t factor) const {
  if (factor <= 0) throw ContractViolation("scale factor must be positive");
  std::vector<std::int64_t> original = original_;
  std::vector<std::int64_t> working = working_;
  for (auto& w : original) w *= factor;
  for (auto& w : working) w *= factor;
  return Weights(n_, std::move(original), std::move(working), perturbed_);
}

Graph::Graph(std::shared_ptr<const Weights> weights, int cycle)
    : n_(weights->size()),
      cycle_(cycle),
      weights_(std::move(weights)),
      present_(static_cast<std::size_t>(n_) * n_, 0),
      degree_(n_, 0) {}

Graph Graph::Complete(std::shared_ptr<const Weights> weights) {
  Graph g(std::move(weights), 0);
  for (Vertex u = 0; u < static_cast<Vertex>(g.n_); ++u) {
    for (Vertex v = u + 1; v < static_cast<Vertex>(g.n_); ++v) g.AddEdge(u, v);
  }
  return g;
}

bool Graph::AddEdge(Vertex u, Vertex v) {
  if (u == v || u >= static_cast<Vertex>(n_) || v >= static_cast<Vertex>(n_)) {
    throw ContractViolation("invalid edge");
  }
  auto& cell = present_[static_cast<std::size_t>(u) * n_ + v];
  if (cell) return false;
  cell = 1;
  present_[static_cast<std::size_t>(v) * n_ + u] = 1;
  ++degree_[u];
  ++degree_[v];
  ++edge_count_;
  return true;
}

bool Graph::RemoveEdge(Vertex u, Vertex v) {
  if (!HasEdge(u, v)) return false;
  present_[static_cast<std::size_t>(u) * n_ + v] = 0;
  present_[static_cast<std::size_t>(v) * n_ + u] = 0;
  --degree_[u];
  --degree_[v];
  --edge_count_;
  return true;
}

std::vector<Edge> Graph::Edges() const {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(edge_count_));
  for (Vertex u = 0; u < static_cast<Vertex>(n_); ++u) {
    for (Vertex v = u + 1; v < static_cast<Vertex>(n_); ++v) {
      if (HasEdge(u, v)) edges.push_back(Edge{u, v});
    }
  }
  return edges;
}

std::vector<Vertex> Graph::Neighbors(Vertex v) const {
  std::vector<Vertex> out;
  for (Vertex w = 0; w < static_cast<Vertex>(n_); ++w) {
    if (HasEdge(v, w)) out.push_back(w);
  }
  return out;
}

}  // namespace quadfreq
