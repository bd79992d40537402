#pragma once

#include <cmath>
#include <cstdint>

namespace rnbpg {

// Counter-based splittable generator built on the splitmix64 finalizer:
//   output(i) = mix64(key + (i+1) * GAMMA)
// Integer-only state, so a given (seed, counter) pair yields the same stream
// on every platform. split(s) derives an independent stream key from a
// domain-separated hash of (key, s). Documented in the README.
class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  explicit Rng(std::uint64_t seed) : key_(seed) {}

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  Rng split(std::uint64_t stream) const {
    return Rng(mix64((key_ ^ 0x5851F42D4C957F2Dull) + (stream + 1) * kGamma));
  }

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

  // [0, 1), 53-bit resolution
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Box-Muller, cosine branch only; two uniforms per draw
  double next_normal() {
    double u1 = 1.0 - next_double();  // (0, 1]
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rnbpg
