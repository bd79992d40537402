#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rnbpg/rng.hpp"

namespace rnbpg {

// Draws block indices i with probability p_i by inverting the cumulative
// distribution against one uniform draw per sample. Cumulative sums are plain
// IEEE additions and the uniform path is integer-based, so the index sequence
// for a given (probs, seed) is identical on every platform.
class BlockSampler {
 public:
  BlockSampler(std::span<const double> probs, std::uint64_t seed);
  static BlockSampler uniform(std::size_t n, std::uint64_t seed);

  std::size_t sample();
  std::size_t block_count() const { return cumulative_.size(); }
  const std::vector<double>& cumulative() const { return cumulative_; }

 private:
  std::vector<double> cumulative_;
  Rng rng_;
};

}  // namespace rnbpg
