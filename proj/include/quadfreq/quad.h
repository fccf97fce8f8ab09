// Frequency quadrilaterals.
//
// A quad is four distinct vertices a < b < c < d, referred to locally as
// 0..3. Its six vertex pairs occupy fixed slots:
//
//   slot 0: (0,1)   slot 1: (0,2)   slot 2: (0,3)
//   slot 3: (1,2)   slot 4: (1,3)   slot 5: (2,3)
//
// so the opposite (vertex-disjoint) pair of slot s is slot 5 - s. For a pair
// of endpoints the optimal 4-vertex path (OP4) is the shorter of the two
// Hamiltonian paths between them whose edges are all present; equal lengths
// go to the path whose interior vertices appear in increasing order.
// A pair's frequency is the number of OP4s, one per endpoint pair, that use
// it.

#ifndef QUADFREQ_QUAD_H_
#define QUADFREQ_QUAD_H_

#include <array>
#include <cstdint>
#include <optional>

#include "quadfreq/graph.h"

namespace quadfreq {

inline constexpr int kQuadSlots = 6;
inline constexpr std::uint8_t kAllSlots = 0x3f;

// Slot of the local pair (i, j), i != j.
int SlotOf(int i, int j);
// Local endpoints of a slot, smaller first.
std::array<int, 2> SlotEndpoints(int slot);
constexpr int OppositeSlot(int slot) { return kQuadSlots - 1 - slot; }

struct Quad {
  std::array<Vertex, 4> vertices{};    // ascending
  std::uint8_t present = 0;            // bit s set when slot s is an edge
  std::array<std::int64_t, 6> weight{};  // working weight per present slot

  bool Has(int slot) const { return (present >> slot) & 1u; }
  int PresentCount() const;
};

// Reads the four vertices' pairs from `graph`. The vertices need not be
// sorted but must be distinct.
Quad MakeQuad(const Graph& graph, std::array<Vertex, 4> vertices);
// A quad with all six pairs present, weights given per slot.
Quad MakeCompleteQuad(const std::array<std::int64_t, 6>& weights);

struct Op4Path {
  std::array<int, 4> sequence{};  // local vertices, from the smaller endpoint
  std::array<int, 3> slots{};
  std::int64_t length = 0;
};

// The OP4 between local endpoints x and y, or nullopt when neither path has
// all three edges. Throws ContractViolation for invalid endpoints.
std::optional<Op4Path> Op4(const Quad& quad, int x, int y);

struct QuadFrequencies {
  std::array<int, 6> freq{};
  int op_count = 0;

  int Total() const;
};

// Generic valid-path rule over any present-edge pattern: every endpoint pair
// with at least one valid path contributes its OP4.
QuadFrequencies ScoreQuad(const Quad& quad);

// Requires all six edges.
QuadFrequencies CompleteQuadFrequencies(const Quad& quad);

// Requires four or five present edges spanning all four vertices.
QuadFrequencies IncompleteQuadFrequencies(const Quad& quad);

enum class QuadPattern {
  kComplete,     // 6 edges
  kMissingOne,   // 5 edges
  kFourCycle,    // 4 edges forming a cycle
  kPaw,          // 4 edges forming a triangle with a pendant edge
  kUnscoreable,  // 3 or fewer edges
};

QuadPattern ClassifyPattern(std::uint8_t present);

// Opposite pairs are numbered 0: slots {0,5}, 1: slots {1,4}, 2: slots {2,3}.
// Returns them in strictly ascending order of summed working weight, or
// nullopt when any two sums tie. Requires all six edges.
std::optional<std::array<int, 3>> ClassifyBySums(const Quad& quad);

// Hot-path scorer used by accumulation: writes frequencies for the six slots
// and returns the OP4 count. Slots absent from `present` get 0.
int ScoreSlots(std::uint8_t present, const std::int64_t* weight, int* freq);

}  // namespace quadfreq

#endif  // QUADFREQ_QUAD_H_
