#include "rnbpg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rnbpg/errors.hpp"
#include "rnbpg/kernels.hpp"

namespace rnbpg {

std::vector<double> full_prox_gradient(const CompositeProblem& problem,
                                       std::span<const double> x) {
  const BlockPartition& part = problem.partition();
  if (x.size() != part.total)
    throw Error(ErrorCode::dimension_mismatch, "full_prox_gradient: wrong x length");
  OracleState s = problem.oracle->make_state(std::vector<double>(x.begin(), x.end()));
  std::vector<double> grad(part.total), g(part.total);
  problem.oracle->full_grad(s, grad);
  for (std::size_t i = 0; i < part.block_count(); ++i) {
    auto xi = part.block(x, i);
    auto gi = part.block(std::span<const double>(grad), i);
    auto di = part.block(std::span<double>(g), i);
    problem.reg.prox_block(xi, gi, 1.0, di);
  }
  return g;
}

double kkt_residual(const CompositeProblem& problem, std::span<const double> x) {
  if (!problem.reg.convex())
    throw Error(ErrorCode::unsupported,
                "kkt_residual requires a convex regularizer");
  const BlockPartition& part = problem.partition();
  if (x.size() != part.total)
    throw Error(ErrorCode::dimension_mismatch, "kkt_residual: wrong x length");
  OracleState s = problem.oracle->make_state(std::vector<double>(x.begin(), x.end()));
  std::vector<double> grad(part.total);
  problem.oracle->full_grad(s, grad);
  return problem.reg.subgradient_residual(part, x, grad);
}

double power_law_exponent(std::span<const double> k, std::span<const double> y) {
  if (k.size() != y.size() || k.size() < 2)
    throw Error(ErrorCode::invalid_parameter,
                "power_law_exponent needs two same-length samples at least");
  const std::size_t n = k.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(k[i] > 0.0) || !(y[i] > 0.0))
      throw Error(ErrorCode::invalid_parameter,
                  "power_law_exponent: samples must be positive");
    lx[i] = std::log(k[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0)
    throw Error(ErrorCode::invalid_parameter,
                "power_law_exponent: degenerate abscissa");
  return sxy / sxx;
}

double rate_trend(const RunTrace& trace, std::uint32_t window) {
  std::vector<double> ks, ys;
  double running = std::numeric_limits<double>::infinity();
  for (const TraceRecord& r : trace.records) {
    if (std::isnan(r.pg_norm)) continue;
    running = std::min(running, r.pg_norm * r.pg_norm);
    ks.push_back(static_cast<double>(r.k));
    ys.push_back(std::max(running, 1e-300));
  }
  const std::size_t skip = static_cast<std::size_t>(window) + 1;
  if (ks.size() < skip + 20)
    throw Error(ErrorCode::diagnostic_unavailable,
                "rate_trend needs at least 20 diagnostic samples past the window");
  return power_law_exponent(std::span<const double>(ks).subspan(skip),
                            std::span<const double>(ys).subspan(skip));
}

ComposedStep full_composed_step(const CompositeProblem& problem,
                                std::span<const double> x, double window_max,
                                const SolverParams& params) {
  params.validate();
  const BlockPartition& part = problem.partition();
  if (part.total > 500)
    throw Error(ErrorCode::diagnostic_unavailable,
                "composed step is restricted to instances with dim <= 500");
  if (x.size() != part.total)
    throw Error(ErrorCode::dimension_mismatch, "full_composed_step: wrong x length");

  OracleState s = problem.oracle->make_state(std::vector<double>(x.begin(), x.end()));
  const double psi = problem.reg.value(part, x);
  const double l_max = problem.oracle->max_block_lipschitz();
  std::uint32_t cap = params.max_inner_trials;
  if (cap == 0) {
    double span = params.eta * (l_max + params.sigma) / params.alpha_low;
    cap = static_cast<std::uint32_t>(
              std::ceil(std::log(span) / std::log(params.eta))) + 5;
  }

  const std::size_t n = part.block_count();
  const std::size_t bmax = part.max_block_size();
  ComposedStep out;
  out.d.assign(part.total, 0.0);
  out.theta.resize(n);
  out.trials.resize(n);
  std::vector<double> g(bmax), d(bmax), xn(bmax);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ni = part.size(i);
    auto xi = part.block(x, i);
    std::span<double> gi(g.data(), ni);
    std::span<double> di(d.data(), ni);
    problem.oracle->partial_grad(s, i, gi);

    double li = problem.oracle->block_lipschitz(i);
    problem.reg.prox_block(xi, gi, li, di);
    double un_sq = kernels::squared_norm(di.data(), ni);
    double theta =
        un_sq > 0.0
            ? std::clamp(problem.oracle->curvature_along(s, i, di) / un_sq,
                         params.alpha_low, params.alpha_high)
            : std::clamp(li, params.alpha_low, params.alpha_high);

    bool accepted = false;
    std::uint32_t trials = 0;
    for (std::uint32_t j = 0; j < cap; ++j) {
      problem.reg.prox_block(xi, gi, theta, di);
      for (std::size_t t = 0; t < ni; ++t) xn[t] = xi[t] + di[t];
      double dpsi =
          problem.reg.value_block(std::span<const double>(xn.data(), ni)) -
          problem.reg.value_block(xi);
      double f_trial = problem.oracle->trial_value(s, i, di) + (psi + dpsi);
      double sns = kernels::squared_norm(di.data(), ni);
      ++trials;
      if (accept(f_trial, window_max, params.sigma, sns)) {
        accepted = true;
        break;
      }
      theta *= params.eta;
    }
    if (!accepted)
      throw LineSearchFailure(
          "composed step: no acceptable stepsize on block " + std::to_string(i),
          0, i, {}, {});
    std::copy(di.begin(), di.end(), out.d.begin() + part.offset(i));
    out.theta[i] = theta;
    out.trials[i] = trials;
  }
  out.norm = std::sqrt(kernels::squared_norm(out.d.data(), out.d.size()));
  return out;
}

double composed_step_ratio_bound(const SolverParams& params, double l_max) {
  double c = std::max(params.alpha_high, params.eta * (l_max + params.sigma));
  double inv = 1.0 / params.alpha_low;
  double under = 1.0 - 2.0 / c + inv * inv;
  return 0.5 * c * (1.0 + inv + std::sqrt(under));
}

}  // namespace rnbpg
