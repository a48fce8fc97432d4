#pragma once

#include <cstdint>
#include <random>

namespace lossfluid {

// Independent substreams of one replication.
enum class Substream : std::uint32_t {
  Arrivals = 1,
  Marks = 2,
  InitialRemaining = 3,
};

// Uniform random stream owned by exactly one replication. Seeded from
// (seed, substream) so that arrival epochs, service marks and initial
// remaining times do not depend on how events interleave.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, Substream which) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(which), 0x6c6f7373u};
    engine_.seed(seq);
  }

  // Uniform on the open interval (0, 1); 53 random bits.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lossfluid
