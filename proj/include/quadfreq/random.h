// Seeded random streams with platform-independent output.
//
// std::mt19937_64 is fully specified by the standard, but the standard
// distributions are not, so bounded draws are done here.

#ifndef QUADFREQ_RANDOM_H_
#define QUADFREQ_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace quadfreq {

std::uint64_t SplitMix64(std::uint64_t x);

// Mixes `seed` with a list of stream identifiers (e.g. an edge's endpoints)
// into an independent substream seed.
std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> ids);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t Below(std::uint64_t bound);

  // Uniform in [0, 1) with 53 random bits.
  double Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace quadfreq

#endif  // QUADFREQ_RANDOM_H_
