#pragma once

#include <cstdint>

namespace mscale {

/// PCG32 (XSH-RR 64/32). Small, fast, and identical output on every platform
/// for a fixed (seed, stream) pair, which is what run reproducibility rests on.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();

  /// Uniform in [0,1) with 53 random bits; consumes exactly two 32-bit draws.
  double next_double();

  double uniform(double lo, double hi);

  /// Box-Muller, cosine branch. Consumes two doubles per call; nothing is
  /// cached, so the draw count per call is fixed.
  double normal(double mean = 0.0, double stddev = 1.0);

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

/// Named sub-streams of one run seed. Each purpose draws from its own stream,
/// so consuming more values for one purpose never shifts another.
enum class SubStream : std::uint64_t {
  Init = 0,
  Interior = 1,
  Boundary = 2,
  Data = 3,
  Shuffle = 4,
};

Pcg32 make_stream(std::uint64_t seed, SubStream which);

}  // namespace mscale
