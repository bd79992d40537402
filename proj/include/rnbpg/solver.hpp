#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rnbpg/oracle.hpp"
#include "rnbpg/params.hpp"
#include "rnbpg/regularizers.hpp"
#include "rnbpg/sampler.hpp"
#include "rnbpg/trace.hpp"
#include "rnbpg/window.hpp"

namespace rnbpg {

enum class MethodKind { rnbpg, rbcd, rbcd_ls };

// rnbpg: nonmonotone window M = params.window, escalated stepsize, optional
//        curvature (bb) initialization.
// rbcd: theta = L_i, one trial, unconditional commit; never reads the window.
// rbcd_ls: monotone (M = 0) escalation with per-block warm-started theta.
struct Method {
  MethodKind kind = MethodKind::rnbpg;
  bool bb_init = true;  // rnbpg only

  static Method rnbpg(bool bb = true) { return {MethodKind::rnbpg, bb}; }
  static Method rbcd() { return {MethodKind::rbcd, false}; }
  static Method rbcd_ls() { return {MethodKind::rbcd_ls, false}; }
  static Method parse(std::string_view name);  // rnbpg | rbcd | rbcd_ls
  std::string name() const;

  std::uint32_t effective_window(const SolverParams& p) const {
    return kind == MethodKind::rnbpg ? p.window : 0;
  }
};

struct CompositeProblem {
  std::shared_ptr<const SmoothOracle> oracle;
  SeparableRegularizer reg = SeparableRegularizer::zero();

  const BlockPartition& partition() const { return oracle->partition(); }
  std::size_t dim() const { return oracle->dim(); }
  // fresh F(x) = f(x) + Psi(x), independent of any solver state
  double objective(std::span<const double> x) const;
};

// Nonmonotone acceptance test, non-strict.
inline bool accept(double f_trial, double window_max, double sigma,
                   double step_norm_sq) {
  return f_trial <= window_max - 0.5 * sigma * step_norm_sq;
}

struct RunCallbacks {
  std::function<void(const TraceRecord&)> on_record;
  std::function<void(const DiagnosticReport&)> on_diagnostic;
};

class Solver {
 public:
  Solver(CompositeProblem problem, Method method, SolverParams params,
         std::vector<double> x0 = {});

  // One outer iteration: sample block, escalate theta until acceptance,
  // commit. Throws LineSearchFailure / divergence on numerical breakdown.
  TraceRecord step();

  RunTrace run(const RunCallbacks& cb = {});

  // theta^0 from the curvature probe u = prox(x_i, g_i, L_i), clamped to
  // [alpha_low, alpha_high]; falls back to clamp(L_i) when u = 0
  double bb_initial_theta(std::size_t i);

  // single trial at fixed theta: (d_i, F_trial); does not move the iterate
  std::pair<std::vector<double>, double> try_step(std::size_t i, double theta);

  std::span<const double> x() const { return state_.x; }
  double objective_value() const { return f_trace_; }
  double window_max_value() const { return window_.max(); }
  double max_block_lipschitz() const { return l_max_; }
  std::uint32_t trial_cap() const { return trial_cap_; }
  std::uint64_t iterations_done() const { return k_; }
  double prox_gradient_norm();  // at the current iterate, from the cached state

  const CompositeProblem& problem() const { return problem_; }
  const SolverParams& params() const { return params_; }
  const Method& method() const { return method_; }

 private:
  double bb_theta(std::size_t i, std::span<const double> g);
  double initial_theta(std::size_t i, std::span<const double> g);
  double trial_raw(std::size_t i, std::span<const double> d, double* delta_psi);
  void emit_diagnostic(const TraceRecord& rec, const RunCallbacks& cb);

  CompositeProblem problem_;
  Method method_;
  SolverParams params_;
  std::vector<double> probs_;
  BlockSampler sampler_;
  OracleState state_;
  ObjectiveWindow window_;

  // Objective bookkeeping. The window and trace hold values in the "trace
  // frame": the chain of accepted trial values, which the acceptance rule
  // keeps exactly window-max nonincreasing. The oracle's periodic exact
  // refresh can shift the computed value path by rounding-scale drift; offset_
  // re-anchors computed values to the trace frame at each refresh so stalled
  // steps keep reproducing the stored objective bit for bit instead of
  // deadlocking against a stale window.
  double offset_ = 0.0;
  double f_trace_ = 0.0;      // newest trace-frame objective
  double psi_cached_ = 0.0;   // incrementally maintained Psi(x)

  std::vector<double> theta_mem_;  // per-block warm start
  std::vector<double> grad_buf_;
  std::vector<double> d_buf_;
  std::vector<double> u_buf_;
  std::vector<double> full_grad_buf_;
  std::vector<double> pg_buf_;

  double l_max_ = 0.0;
  double theta_cap_ = 0.0;  // max(alpha_high, eta*(L_max+sigma)), reporting only
  std::uint32_t trial_cap_ = 0;
  std::uint64_t k_ = 0;
  double epoch_ = 0.0;
  std::uint64_t diag_period_ = 1;
  double min_pg_sq_ = kNotComputed;
  double start_time_ = 0.0;
};

RunTrace run(const CompositeProblem& problem, Method method,
             const SolverParams& params, const RunCallbacks& cb = {});

}  // namespace rnbpg
