#include "rnbpg/trace.hpp"

#include <algorithm>

namespace rnbpg {

double trailing_window_max(std::span<const TraceRecord> records, std::size_t at,
                           std::uint32_t m) {
  std::size_t lo = at >= m ? at - m : 0;
  double mx = records[lo].f_value;
  for (std::size_t i = lo + 1; i <= at; ++i) mx = std::max(mx, records[i].f_value);
  return mx;
}

bool window_max_nonincreasing(std::span<const TraceRecord> records, std::uint32_t m,
                              std::size_t* bad_index) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (trailing_window_max(records, i, m) > trailing_window_max(records, i - 1, m)) {
      if (bad_index != nullptr) *bad_index = i;
      return false;
    }
  }
  return true;
}

std::optional<std::size_t> first_gap_hit(std::span<const TraceRecord> records,
                                         double f_star, double gap) {
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].f_value - f_star <= gap) return i;
  return std::nullopt;
}

}  // namespace rnbpg
