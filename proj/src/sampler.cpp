#include "rnbpg/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "rnbpg/errors.hpp"

namespace rnbpg {

BlockSampler::BlockSampler(std::span<const double> probs, std::uint64_t seed)
    : rng_(seed) {
  if (probs.empty())
    throw Error(ErrorCode::invalid_parameter, "sampler needs at least one block");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0))
      throw Error(ErrorCode::invalid_parameter, "sampler probabilities must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(ErrorCode::invalid_parameter, "sampler probabilities must sum to 1");
  cumulative_.resize(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cumulative_[i] = acc;
  }
  cumulative_.back() = 1.0;
}

BlockSampler BlockSampler::uniform(std::size_t n, std::uint64_t seed) {
  if (n == 0)
    throw Error(ErrorCode::invalid_parameter, "sampler needs at least one block");
  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  return BlockSampler(probs, seed);
}

std::size_t BlockSampler::sample() {
  double u = rng_.next_double();  // [0, 1)
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;  // cumulative rounding guard
  return static_cast<std::size_t>(it - cumulative_.begin());
}

}  // namespace rnbpg
