#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rnbpg {

// Contiguous partition of {0..total-1} into n blocks.
struct BlockPartition {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> offsets;  // n+1 prefix sums, offsets[n] == total
  std::size_t total = 0;

  std::size_t block_count() const { return sizes.size(); }
  std::size_t size(std::size_t i) const { return sizes[i]; }
  std::size_t offset(std::size_t i) const { return offsets[i]; }
  std::size_t max_block_size() const;

  std::span<double> block(std::span<double> x, std::size_t i) const {
    return x.subspan(offsets[i], sizes[i]);
  }
  std::span<const double> block(std::span<const double> x, std::size_t i) const {
    return x.subspan(offsets[i], sizes[i]);
  }
};

BlockPartition make_partition(std::vector<std::size_t> sizes);
BlockPartition uniform_blocks(std::size_t total, std::size_t block_size);

}  // namespace rnbpg
