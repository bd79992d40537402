#include "rnbpg/partition.hpp"

#include <algorithm>
#include <string>

#include "rnbpg/errors.hpp"

namespace rnbpg {

std::size_t BlockPartition::max_block_size() const {
  std::size_t m = 0;
  for (std::size_t s : sizes) m = std::max(m, s);
  return m;
}

BlockPartition make_partition(std::vector<std::size_t> sizes) {
  if (sizes.empty())
    throw Error(ErrorCode::invalid_partition, "partition needs at least one block");
  BlockPartition p;
  p.offsets.reserve(sizes.size() + 1);
  p.offsets.push_back(0);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0)
      throw Error(ErrorCode::invalid_partition,
                  "block " + std::to_string(i) + " has size 0");
    p.offsets.push_back(p.offsets.back() + sizes[i]);
  }
  p.total = p.offsets.back();
  p.sizes = std::move(sizes);
  return p;
}

BlockPartition uniform_blocks(std::size_t total, std::size_t block_size) {
  if (total == 0)
    throw Error(ErrorCode::invalid_partition, "cannot partition an empty vector");
  if (block_size == 0)
    throw Error(ErrorCode::invalid_partition, "block_size must be positive");
  std::vector<std::size_t> sizes;
  for (std::size_t at = 0; at < total; at += block_size)
    sizes.push_back(std::min(block_size, total - at));
  return make_partition(std::move(sizes));
}

}  // namespace rnbpg
