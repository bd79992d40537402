#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace rnbpg {

inline constexpr double kNotComputed = std::numeric_limits<double>::quiet_NaN();

// One accepted step. records[0] of a run describes x^0 (block -1, theta NaN).
// f_value carries the solver's bookkept objective for x^k; pg_norm is NaN on
// iterations where the prox-gradient diagnostic was not evaluated.
struct TraceRecord {
  std::uint64_t k = 0;
  std::int64_t block = -1;
  double theta = kNotComputed;
  std::uint32_t inner_trials = 0;
  double f_value = 0.0;
  double step_norm_sq = 0.0;
  double pg_norm = kNotComputed;
  double epoch = 0.0;
  double elapsed_s = 0.0;
};

// Once-per-epoch diagnostic snapshot.
struct DiagnosticReport {
  std::uint64_t k = 0;
  double epoch = 0.0;
  double pg_norm = kNotComputed;
  double gap = kNotComputed;           // f - f_star when f_star known
  double kkt_residual = kNotComputed;  // convex regularizers only
  double min_pg_sq_so_far = kNotComputed;
};

enum class StopReason { max_iters, pg_tol, gap_target };

struct RunTrace {
  std::vector<TraceRecord> records;  // initial state first
  StopReason reason = StopReason::max_iters;
  double total_elapsed_s = 0.0;

  const TraceRecord& last() const { return records.back(); }
  std::size_t iterations() const { return records.size() - 1; }
};

// Largest f_value over the trailing m+1 records ending at index at.
double trailing_window_max(std::span<const TraceRecord> records, std::size_t at,
                           std::uint32_t m);

// True when max over the trailing window never increases from one record to
// the next; on failure reports the first offending index.
bool window_max_nonincreasing(std::span<const TraceRecord> records, std::uint32_t m,
                              std::size_t* bad_index = nullptr);

// First record index with f_value - f_star <= gap, if any.
std::optional<std::size_t> first_gap_hit(std::span<const TraceRecord> records,
                                         double f_star, double gap);

}  // namespace rnbpg
