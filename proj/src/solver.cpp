#include "rnbpg/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rnbpg/errors.hpp"
#include "rnbpg/kernels.hpp"

namespace rnbpg {
namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

Method Method::parse(std::string_view name) {
  if (name == "rnbpg") return rnbpg();
  if (name == "rbcd") return rbcd();
  if (name == "rbcd_ls") return rbcd_ls();
  throw Error(ErrorCode::invalid_parameter, "unknown method '" + std::string(name) + "'");
}

std::string Method::name() const {
  switch (kind) {
    case MethodKind::rnbpg: return "rnbpg";
    case MethodKind::rbcd: return "rbcd";
    case MethodKind::rbcd_ls: return "rbcd_ls";
  }
  return "";
}

double CompositeProblem::objective(std::span<const double> x) const {
  OracleState s = oracle->make_state(std::vector<double>(x.begin(), x.end()));
  return oracle->value(s) + reg.value(partition(), x);
}

Solver::Solver(CompositeProblem problem, Method method, SolverParams params,
               std::vector<double> x0)
    : problem_(std::move(problem)),
      method_(method),
      params_(std::move(params)),
      sampler_(BlockSampler::uniform(1, 0)),  // replaced below
      window_(method.effective_window(params_)) {
  params_.validate();
  const BlockPartition& part = problem_.partition();
  const std::size_t n = part.block_count();
  if (params_.probs.empty()) {
    probs_.assign(n, 1.0 / static_cast<double>(n));
  } else {
    if (params_.probs.size() != n)
      throw Error(ErrorCode::invalid_parameter,
                  "probs length does not match the block count");
    probs_ = params_.probs;
  }
  sampler_ = BlockSampler(probs_, params_.seed);

  state_ = problem_.oracle->make_state(std::move(x0));
  psi_cached_ = problem_.reg.value(part, state_.x);
  if (!std::isfinite(psi_cached_))
    throw Error(ErrorCode::invalid_parameter, "x0 is not in the domain of the regularizer");
  f_trace_ = problem_.oracle->value(state_) + psi_cached_;
  if (!std::isfinite(f_trace_))
    throw Error(ErrorCode::divergence, "objective not finite at x0");
  window_.push(f_trace_);

  l_max_ = problem_.oracle->max_block_lipschitz();
  theta_cap_ = std::max(params_.alpha_high, params_.eta * (l_max_ + params_.sigma));
  if (params_.max_inner_trials > 0) {
    trial_cap_ = params_.max_inner_trials;
  } else {
    double span = params_.eta * (l_max_ + params_.sigma) / params_.alpha_low;
    double steps = std::ceil(std::log(span) / std::log(params_.eta));
    trial_cap_ = static_cast<std::uint32_t>(std::max(steps, 0.0)) + 5;
  }

  theta_mem_.assign(n, params_.alpha_low);

  const std::size_t bmax = part.max_block_size();
  grad_buf_.resize(bmax);
  d_buf_.resize(bmax);
  u_buf_.resize(bmax);
  full_grad_buf_.resize(part.total);
  pg_buf_.resize(part.total);
  diag_period_ = n;
  start_time_ = now_seconds();
}

double Solver::trial_raw(std::size_t i, std::span<const double> d,
                         double* delta_psi) {
  const BlockPartition& part = problem_.partition();
  auto xi = part.block(std::span<const double>(state_.x), i);
  double smooth = problem_.oracle->trial_value(state_, i, d);
  // Psi delta in shifted form: exact zero when the step has no effect on x_i,
  // which pins F_trial to the stored objective at stalled steps
  double psi_old = problem_.reg.value_block(xi);
  u_buf_.resize(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) u_buf_[j] = xi[j] + d[j];
  double psi_new = problem_.reg.value_block(std::span<const double>(u_buf_.data(), xi.size()));
  double dpsi = psi_new - psi_old;
  if (delta_psi != nullptr) *delta_psi = dpsi;
  return smooth + (psi_cached_ + dpsi);
}

double Solver::bb_theta(std::size_t i, std::span<const double> g) {
  const BlockPartition& part = problem_.partition();
  const std::size_t ni = part.size(i);
  auto xi = part.block(std::span<const double>(state_.x), i);
  std::span<double> u(d_buf_.data(), ni);
  double li = problem_.oracle->block_lipschitz(i);
  problem_.reg.prox_block(xi, g, li, u);
  double un_sq = kernels::squared_norm(u.data(), ni);
  if (un_sq > 0.0) {
    double raw = problem_.oracle->curvature_along(state_, i, u) / un_sq;
    return std::clamp(raw, params_.alpha_low, params_.alpha_high);
  }
  return std::clamp(li, params_.alpha_low, params_.alpha_high);
}

double Solver::bb_initial_theta(std::size_t i) {
  const std::size_t ni = problem_.partition().size(i);
  std::span<double> g(grad_buf_.data(), ni);
  problem_.oracle->partial_grad(state_, i, g);
  return bb_theta(i, g);
}

double Solver::initial_theta(std::size_t i, std::span<const double> g) {
  switch (method_.kind) {
    case MethodKind::rnbpg:
      if (method_.bb_init) return bb_theta(i, g);
      [[fallthrough]];
    case MethodKind::rbcd_ls:
      // per-block ratchet: resume at the last accepted theta, starting cold
      // at alpha_low on first touch
      return std::clamp(theta_mem_[i], params_.alpha_low,
                        params_.alpha_high);
    case MethodKind::rbcd:
      return problem_.oracle->block_lipschitz(i);
  }
  return params_.alpha_low;
}

std::pair<std::vector<double>, double> Solver::try_step(std::size_t i, double theta) {
  const BlockPartition& part = problem_.partition();
  const std::size_t ni = part.size(i);
  std::vector<double> g(ni), d(ni);
  problem_.oracle->partial_grad(state_, i, std::span<double>(g));
  auto xi = part.block(std::span<const double>(state_.x), i);
  problem_.reg.prox_block(xi, g, theta, std::span<double>(d));
  double f_trial = trial_raw(i, d, nullptr);
  return {std::move(d), f_trial};
}

TraceRecord Solver::step() {
  const BlockPartition& part = problem_.partition();
  const std::size_t i = sampler_.sample();
  const std::size_t ni = part.size(i);
  auto xi = part.block(std::span<const double>(state_.x), i);
  std::span<double> g(grad_buf_.data(), ni);
  problem_.oracle->partial_grad(state_, i, g);
  std::span<double> d(d_buf_.data(), ni);

  double theta = 0.0;
  double candidate = 0.0;
  double step_norm_sq = 0.0;
  double delta_psi = 0.0;
  std::uint32_t trials = 0;

  if (method_.kind == MethodKind::rbcd) {
    theta = problem_.oracle->block_lipschitz(i);
    problem_.reg.prox_block(xi, g, theta, d);
    double f_raw = trial_raw(i, d, &delta_psi);
    candidate = f_raw - offset_;
    step_norm_sq = kernels::squared_norm(d.data(), ni);
    trials = 1;
    if (std::isnan(candidate))
      throw Error(ErrorCode::divergence, "objective became NaN");
  } else {
    const double wmax = window_.max();
    const double theta0 = initial_theta(i, g);
    std::vector<double> trail;
    theta = theta0;
    bool accepted = false;
    for (std::uint32_t j = 0; j < trial_cap_; ++j) {
      trail.push_back(theta);
      problem_.reg.prox_block(xi, g, theta, d);
      double f_raw = trial_raw(i, d, &delta_psi);
      candidate = f_raw - offset_;
      if (std::isnan(candidate))
        throw Error(ErrorCode::divergence, "objective became NaN in the line search");
      step_norm_sq = kernels::squared_norm(d.data(), ni);
      ++trials;
      if (accept(candidate, wmax, params_.sigma, step_norm_sq)) {
        accepted = true;
        break;
      }
      theta *= params_.eta;
    }
    if (!accepted)
      throw LineSearchFailure(
          "no acceptable stepsize after " + std::to_string(trials) +
              " trials at iteration " + std::to_string(k_) + ", block " +
              std::to_string(i),
          k_, i, std::move(trail), window_.values());
    theta_mem_[i] = theta;
  }

  if (candidate - f_trace_ > std::max(1.0, std::abs(f_trace_)) * 1e8)
    throw Error(ErrorCode::divergence, "objective increased beyond any plausible bound");

  bool refreshed = problem_.oracle->commit_step(state_, i, d);
  psi_cached_ += delta_psi;
  window_.push(candidate);
  f_trace_ = candidate;
  ++k_;
  epoch_ += static_cast<double>(ni) / static_cast<double>(part.total);

  if (refreshed) {
    // exact caches from here on; re-anchor the computed frame to the trace
    // frame at the current point (difference is pure drift, rounding scale)
    psi_cached_ = problem_.reg.value(part, state_.x);
    double f_exact = problem_.oracle->value(state_) + psi_cached_;
    offset_ = f_exact - f_trace_;
  }

  TraceRecord rec;
  rec.k = k_;
  rec.block = static_cast<std::int64_t>(i);
  rec.theta = theta;
  rec.inner_trials = trials;
  rec.f_value = candidate;
  rec.step_norm_sq = step_norm_sq;
  rec.epoch = epoch_;
  rec.elapsed_s = now_seconds() - start_time_;
  return rec;
}

double Solver::prox_gradient_norm() {
  const BlockPartition& part = problem_.partition();
  problem_.oracle->full_grad(state_, full_grad_buf_);
  for (std::size_t i = 0; i < part.block_count(); ++i) {
    auto xi = part.block(std::span<const double>(state_.x), i);
    auto gi = part.block(std::span<const double>(full_grad_buf_), i);
    auto di = part.block(std::span<double>(pg_buf_), i);
    problem_.reg.prox_block(xi, gi, 1.0, di);
  }
  return std::sqrt(kernels::squared_norm(pg_buf_.data(), pg_buf_.size()));
}

void Solver::emit_diagnostic(const TraceRecord& rec, const RunCallbacks& cb) {
  if (!cb.on_diagnostic) return;
  DiagnosticReport rep;
  rep.k = rec.k;
  rep.epoch = rec.epoch;
  rep.pg_norm = rec.pg_norm;
  rep.min_pg_sq_so_far = min_pg_sq_;
  if (params_.f_star) rep.gap = rec.f_value - *params_.f_star;
  if (problem_.reg.convex()) {
    problem_.oracle->full_grad(state_, full_grad_buf_);
    rep.kkt_residual =
        problem_.reg.subgradient_residual(problem_.partition(), state_.x, full_grad_buf_);
  }
  cb.on_diagnostic(rep);
}

RunTrace Solver::run(const RunCallbacks& cb) {
  RunTrace out;
  start_time_ = now_seconds();

  TraceRecord rec0;
  rec0.k = 0;
  rec0.f_value = f_trace_;
  double pg0 = prox_gradient_norm();
  rec0.pg_norm = pg0;
  min_pg_sq_ = pg0 * pg0;
  out.records.push_back(rec0);
  if (cb.on_record) cb.on_record(rec0);
  emit_diagnostic(rec0, cb);

  auto finish = [&](StopReason r) {
    out.reason = r;
    out.total_elapsed_s = now_seconds() - start_time_;
    return out;
  };

  if (pg0 <= params_.tol) return finish(StopReason::pg_tol);
  if (params_.f_star && f_trace_ - *params_.f_star <= params_.gap_tol)
    return finish(StopReason::gap_target);

  while (k_ < params_.max_iters) {
    TraceRecord rec = step();
    bool diag_due = (k_ % diag_period_ == 0) || k_ >= params_.max_iters;
    if (diag_due) {
      double pg = prox_gradient_norm();
      rec.pg_norm = pg;
      min_pg_sq_ = std::min(min_pg_sq_, pg * pg);
    }
    out.records.push_back(rec);
    if (cb.on_record) cb.on_record(rec);
    if (diag_due) emit_diagnostic(rec, cb);

    if (params_.f_star && rec.f_value - *params_.f_star <= params_.gap_tol)
      return finish(StopReason::gap_target);
    if (diag_due && rec.pg_norm <= params_.tol) return finish(StopReason::pg_tol);
  }
  return finish(StopReason::max_iters);
}

RunTrace run(const CompositeProblem& problem, Method method,
             const SolverParams& params, const RunCallbacks& cb) {
  Solver s(problem, method, params);
  return s.run(cb);
}

}  // namespace rnbpg
