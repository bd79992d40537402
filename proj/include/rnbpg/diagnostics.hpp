#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rnbpg/solver.hpp"
#include "rnbpg/trace.hpp"

namespace rnbpg {

// All-blocks prox step at theta = 1 from a bare point; zero iff x is
// prox-stationary.
std::vector<double> full_prox_gradient(const CompositeProblem& problem,
                                       std::span<const double> x);

// dist(-grad f(x), dPsi(x)); convex regularizers only.
double kkt_residual(const CompositeProblem& problem, std::span<const double> x);

// Least-squares slope of log y against log k. Inputs must be positive.
double power_law_exponent(std::span<const double> k, std::span<const double> y);

// Fitted exponent of the running min of |pg|^2 against k over the trace's
// diagnostic samples. The first window+1 samples are excluded from the fit;
// at least 20 must remain.
double rate_trend(const RunTrace& trace, std::uint32_t window);

// The all-blocks composite step: every block's line-searched prox step taken
// from the same point, stacked into one length-N vector.
struct ComposedStep {
  std::vector<double> d;
  std::vector<double> theta;          // accepted theta per block
  std::vector<std::uint32_t> trials;  // inner trials per block
  double norm = 0.0;
};

// Restricted to dim <= 500: costs a full line-searched pass.
ComposedStep full_composed_step(const CompositeProblem& problem,
                                std::span<const double> x, double window_max,
                                const SolverParams& params);

// (c/2) * [1 + 1/alpha_low + sqrt(1 - 2/c + 1/alpha_low^2)] with
// c = max(alpha_high, eta*(l_max+sigma)); bounds |pg| / |composed step|.
double composed_step_ratio_bound(const SolverParams& params, double l_max);

}  // namespace rnbpg
