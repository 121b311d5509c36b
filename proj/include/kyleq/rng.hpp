#pragma once

#include <cstdint>
#include <random>

#include "kyleq/gaussian.hpp"

namespace kyleq {

/// SplitMix64 mix; used to derive independent per-path seeds from
/// (master seed, path index) without correlated low bits.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic stream of standard normals. Uses mt19937_64 (sequence fixed
/// by the standard) with an explicit bit-to-uniform map and the inverse-CDF
/// transform, so outputs are identical across platforms and compilers.
class NormalStream {
 public:
  NormalStream(std::uint64_t master_seed, std::uint64_t stream)
      : eng_(mix_seed(master_seed, stream)) {}

  /// Uniform in (0,1), 53-bit resolution, never exactly 0 or 1.
  double uniform() {
    const std::uint64_t bits = eng_() >> 11;  // 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double normal() { return norm_cdf_inv(uniform()); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace kyleq
