#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnbpg {

enum class ErrorCode {
  invalid_partition,
  dimension_mismatch,
  invalid_parameter,
  unsupported,
  bad_format,
  bad_config,
  io_failure,
  logic,
  line_search_failure,
  divergence,
  generator_internal,
  diagnostic_unavailable,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Stepsize escalation exhausted its trial cap. Unreachable in exact
// arithmetic; carries enough context to reconstruct the failure.
class LineSearchFailure : public Error {
 public:
  LineSearchFailure(const std::string& what, std::uint64_t k, std::size_t block,
                    std::vector<double> theta_trail, std::vector<double> window)
      : Error(ErrorCode::line_search_failure, what),
        iteration(k),
        block(block),
        theta_trail(std::move(theta_trail)),
        objective_window(std::move(window)) {}

  std::uint64_t iteration;
  std::size_t block;
  std::vector<double> theta_trail;      // every theta tried, in order
  std::vector<double> objective_window; // F window at failure, oldest first
};

}  // namespace rnbpg
