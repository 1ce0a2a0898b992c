#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fmd/core.hpp"

namespace fmd {

// A (seed, stream) pair fully determines one random stream. Distinct stream
// ids under the same seed give independent trajectories, so simulations can
// be sharded across threads without any shared generator state.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Deterministic uniform source. The engine (mt19937_64) has its output
// sequence pinned by the C++ standard; variates are derived from raw engine
// words only -- never through std::*_distribution, whose results vary across
// standard-library implementations.
class Rng {
 public:
  explicit Rng(RngSeed s) {
    std::seed_seq seq{static_cast<std::uint32_t>(s.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(s.seed >> 32),
                      static_cast<std::uint32_t>(s.stream & 0xffffffffu),
                      static_cast<std::uint32_t>(s.stream >> 32)};
    engine_.seed(seq);
  }

  // Uniform on the open interval (0,1): (k + 1/2) * 2^-53 with k < 2^53.
  // Never returns 0 or 1, so logs and reciprocals are safe.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unit-rate exponential via inversion.
  double exponential() { return -std::log(uniform01()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fmd
