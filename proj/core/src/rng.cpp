#include "mscale/rng.hpp"

#include <cmath>

namespace mscale {

namespace {
constexpr std::uint64_t kMult = 6364136223846793005ULL;
}

Pcg32::Pcg32(std::uint64_t seed, std::uint64_t stream) {
  inc_ = (stream << 1u) | 1u;
  state_ = 0u;
  next_u32();
  state_ += seed;
  next_u32();
}

std::uint32_t Pcg32::next_u32() {
  std::uint64_t old = state_;
  state_ = old * kMult + inc_;
  std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
}

double Pcg32::next_double() {
  std::uint64_t hi = next_u32() >> 5;   // 27 bits
  std::uint64_t lo = next_u32() >> 6;   // 26 bits
  return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

double Pcg32::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double Pcg32::normal(double mean, double stddev) {
  double u1 = next_double();
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log1p(-u1));
  return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
}

Pcg32 make_stream(std::uint64_t seed, SubStream which) {
  return Pcg32(seed, static_cast<std::uint64_t>(which));
}

}  // namespace mscale
