#include "quadfreq/quad.h"

#include <algorithm>
#include <bit>

namespace quadfreq {
namespace {

constexpr int kSlotTable[4][4] = {
    {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
constexpr int kSlotPairs[6][2] = {{0, 1}, {0, 2}, {0, 3},
                                  {1, 2}, {1, 3}, {2, 3}};

// For endpoint slot (x, y) with interior vertices p < q: the preferred path
// x-p-q-y and the alternative x-q-p-y. Both share the middle slot (p, q).
struct EndpointPaths {
  int x, y, p, q;
  int first_outer, first_inner;    // slots (x,p) and (q,y)
  int second_outer, second_inner;  // slots (x,q) and (p,y)
  int middle;
};

constexpr EndpointPaths MakePaths(int slot) {
  const int x = kSlotPairs[slot][0];
  const int y = kSlotPairs[slot][1];
  const int p = kSlotPairs[5 - slot][0];
  const int q = kSlotPairs[5 - slot][1];
  return EndpointPaths{x,
                       y,
                       p,
                       q,
                       kSlotTable[x][p],
                       kSlotTable[q][y],
                       kSlotTable[x][q],
                       kSlotTable[p][y],
                       5 - slot};
}

constexpr std::array<EndpointPaths, 6> kPaths = {
    MakePaths(0), MakePaths(1), MakePaths(2),
    MakePaths(3), MakePaths(4), MakePaths(5)};

constexpr bool Bit(std::uint8_t mask, int slot) { return (mask >> slot) & 1u; }

// 0: preferred path, 1: alternative, -1: none valid.
inline int ChoosePath(const EndpointPaths& e, std::uint8_t present,
                      const std::int64_t* w) {
  if (!Bit(present, e.middle)) return -1;
  const bool first = Bit(present, e.first_outer) && Bit(present, e.first_inner);
  const bool second =
      Bit(present, e.second_outer) && Bit(present, e.second_inner);
  if (first && second) {
    return w[e.first_outer] + w[e.first_inner] <=
                   w[e.second_outer] + w[e.second_inner]
               ? 0
               : 1;
  }
  if (first) return 0;
  if (second) return 1;
  return -1;
}

}  // namespace

int SlotOf(int i, int j) {
  if (i < 0 || i > 3 || j < 0 || j > 3 || i == j) {
    throw ContractViolation("not a quad vertex pair");
  }
  return kSlotTable[i][j];
}

std::array<int, 2> SlotEndpoints(int slot) {
  return {kSlotPairs[slot][0], kSlotPairs[slot][1]};
}

int Quad::PresentCount() const { return std::popcount(present); }

Quad MakeQuad(const Graph& graph, std::array<Vertex, 4> vertices) {
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
    throw ContractViolation("quad vertices must be distinct");
  }
  Quad quad;
  quad.vertices = vertices;
  for (int s = 0; s < kQuadSlots; ++s) {
    const Vertex u = vertices[kSlotPairs[s][0]];
    const Vertex v = vertices[kSlotPairs[s][1]];
    if (graph.HasEdge(u, v)) {
      quad.present |= static_cast<std::uint8_t>(1u << s);
      quad.weight[s] = graph.Weight(u, v);
    }
  }
  return quad;
}

Quad MakeCompleteQuad(const std::array<std::int64_t, 6>& weights) {
  Quad quad;
  quad.vertices = {0, 1, 2, 3};
  quad.present = kAllSlots;
  quad.weight = weights;
  return quad;
}

std::optional<Op4Path> Op4(const Quad& quad, int x, int y) {
  const int slot = SlotOf(x, y);
  const EndpointPaths& e = kPaths[slot];
  const int choice = ChoosePath(e, quad.present, quad.weight.data());
  if (choice < 0) return std::nullopt;
  Op4Path path;
  if (choice == 0) {
    path.sequence = {e.x, e.p, e.q, e.y};
    path.slots = {e.first_outer, e.middle, e.first_inner};
  } else {
    path.sequence = {e.x, e.q, e.p, e.y};
    path.slots = {e.second_outer, e.middle, e.second_inner};
  }
  for (const int s : path.slots) path.length += quad.weight[s];
  return path;
}

int QuadFrequencies::Total() const {
  int total = 0;
  for (const int f : freq) total += f;
  return total;
}

int ScoreSlots(std::uint8_t present, const std::int64_t* weight, int* freq) {
  for (int s = 0; s < kQuadSlots; ++s) freq[s] = 0;
  int ops = 0;
  for (const EndpointPaths& e : kPaths) {
    const int choice = ChoosePath(e, present, weight);
    if (choice < 0) continue;
    ++ops;
    ++freq[e.middle];
    if (choice == 0) {
      ++freq[e.first_outer];
      ++freq[e.first_inner];
    } else {
      ++freq[e.second_outer];
      ++freq[e.second_inner];
    }
  }
  return ops;
}

QuadFrequencies ScoreQuad(const Quad& quad) {
  QuadFrequencies result;
  result.op_count =
      ScoreSlots(quad.present, quad.weight.data(), result.freq.data());
  return result;
}

QuadFrequencies CompleteQuadFrequencies(const Quad& quad) {
  if (quad.present != kAllSlots) {
    throw ContractViolation("complete quad requires all six edges");
  }
  return ScoreQuad(quad);
}

QuadFrequencies IncompleteQuadFrequencies(const Quad& quad) {
  const QuadPattern pattern = ClassifyPattern(quad.present);
  if (pattern == QuadPattern::kUnscoreable || pattern == QuadPattern::kComplete) {
    throw ContractViolation(
        "incomplete quad requires 4 or 5 edges spanning all four vertices");
  }
  return ScoreQuad(quad);
}

QuadPattern ClassifyPattern(std::uint8_t present) {
  present &= kAllSlots;
  switch (std::popcount(present)) {
    case 6:
      return QuadPattern::kComplete;
    case 5:
      return QuadPattern::kMissingOne;
    case 4: {
      // Four edges on four vertices: a 4-cycle has every degree 2, a paw
      // (triangle plus pendant) does not. Both span all vertices.
      for (int v = 0; v < 4; ++v) {
        int degree = 0;
        for (int w = 0; w < 4; ++w) {
          if (w != v && Bit(present, kSlotTable[v][w])) ++degree;
        }
        if (degree != 2) return QuadPattern::kPaw;
      }
      return QuadPattern::kFourCycle;
    }
    default:
      return QuadPattern::kUnscoreable;
  }
}

std::optional<std::array<int, 3>> ClassifyBySums(const Quad& quad) {
  if (quad.present != kAllSlots) {
    throw ContractViolation("sum classification requires all six edges");
  }
  std::array<std::int64_t, 3> sums;
  for (int p = 0; p < 3; ++p) sums[p] = quad.weight[p] + quad.weight[5 - p];
  if (sums[0] == sums[1] || sums[0] == sums[2] || sums[1] == sums[2]) {
    return std::nullopt;
  }
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return sums[a] < sums[b]; });
  return order;
}

}  // namespace quadfreq
