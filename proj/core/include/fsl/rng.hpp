#pragma once

// Counter-based random draws for Monte-Carlo sweeps. Sample i derives its own
// seed from the master seed, so samples can be evaluated in any order on any
// number of workers and still reproduce bit-exactly.

#include <cstdint>

namespace fsl::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// One round of the splitmix64 output function (unsigned wrap-around intended).
inline std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Top 53 bits -> uniform double in [0, 1).
inline double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * (1.0 / 9007199254740992.0);
}

struct DisorderDraw {
  double eps1, eps2;
};

// Independent uniforms on [-eta1, eta1] x [-eta2, eta2] for sample i.
inline DisorderDraw disorder_draw(std::uint64_t master_seed, std::uint64_t i,
                                  double eta1, double eta2) {
  const std::uint64_t s1 = splitmix64(master_seed + i * kGolden);
  const std::uint64_t s2 = splitmix64(s1);
  const double u1 = unit_double(s1);
  const double u2 = unit_double(s2);
  return {eta1 * (2.0 * u1 - 1.0), eta2 * (2.0 * u2 - 1.0)};
}

}  // namespace fsl::rng
