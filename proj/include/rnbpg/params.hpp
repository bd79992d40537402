#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rnbpg/regularizers.hpp"

namespace rnbpg {

struct SolverParams {
  double eta = 1.1;         // stepsize escalation factor, > 1
  double sigma = 1e-4;      // sufficient-decrease weight, > 0
  double alpha_low = 1e-8;  // initial stepsize clamp, 0 < alpha_low <= alpha_high
  double alpha_high = 1e8;
  std::uint32_t window = 10;  // M; window keeps M+1 objective values
  std::vector<double> probs;  // block sampling weights; empty = uniform
  std::uint64_t seed = 0;
  std::uint64_t max_iters = 100000;
  std::uint32_t max_inner_trials = 0;  // 0 = derive from the problem at run start
  double tol = 0.0;                    // prox-gradient-norm stop; 0 only stops at exactly 0
  std::optional<double> f_star;        // known optimum, enables gap reporting/stopping
  double gap_tol = 1e-6;               // used when f_star is set

  void validate() const;  // throws invalid_parameter
};

// flat key=value file; '#' comments and blank lines allowed
struct ConfigFile {
  SolverParams params;
  std::optional<std::size_t> block_size;
  std::optional<SeparableRegularizer> reg;
};

ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::string& path);

}  // namespace rnbpg
