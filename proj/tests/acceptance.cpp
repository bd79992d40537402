// Acceptance gate for the solver library. Each criterion prints exactly one
// PASS/FAIL line; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "prox_grid.hpp"
#include "rnbpg/bench.hpp"
#include "rnbpg/diagnostics.hpp"
#include "rnbpg/errors.hpp"
#include "rnbpg/instances.hpp"
#include "rnbpg/io.hpp"
#include "rnbpg/oracle.hpp"
#include "rnbpg/partition.hpp"
#include "rnbpg/regularizers.hpp"
#include "rnbpg/rng.hpp"
#include "rnbpg/solver.hpp"
#include "rnbpg/trace.hpp"

using namespace rnbpg;

namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) { return format_double(v); }

// ---- shared desk-scale instance -------------------------------------------

const LassoInstance& desk_instance() {
  static LassoInstance inst = generate_lasso(200, 400, 40, 1.0, 42);
  return inst;
}

const CompositeProblem& desk_problem() {
  static CompositeProblem prob = make_lasso_problem(desk_instance(), 20);
  return prob;
}

// Traces accumulated by criteria 1-3 and audited by criterion 4.
std::vector<RunTrace> g_traces_m10;
std::vector<RunTrace> g_traces_m0;

double median10(std::vector<double> v) {
  for (double& x : v)
    if (std::isnan(x)) x = std::numeric_limits<double>::infinity();
  std::sort(v.begin(), v.end());
  return 0.5 * (v[4] + v[5]);
}

// ---- criterion 1: stepsize cap and trial cap -------------------------------

Outcome criterion1() {
  const CompositeProblem& prob = desk_problem();
  SolverParams p;
  p.seed = 1;
  p.max_iters = 50000;

  double t0 = now_s();
  RunTrace tr = run(prob, Method::rnbpg(), p);
  double secs = now_s() - t0;

  double l_max = prob.oracle->max_block_lipschitz();
  double theta_cap = std::max(p.alpha_high, p.eta * (l_max + p.sigma));
  auto trial_cap = static_cast<std::uint32_t>(
                       std::ceil(std::log(theta_cap / p.alpha_low) / std::log(p.eta))) +
                   1;

  double max_theta = 0.0;
  std::uint32_t max_trials = 0;
  std::size_t violations = 0;
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    const TraceRecord& r = tr.records[i];
    max_theta = std::max(max_theta, r.theta);
    max_trials = std::max(max_trials, r.inner_trials);
    if (!(r.theta <= theta_cap) || r.inner_trials > trial_cap) ++violations;
  }

  bool pass = violations == 0 && tr.iterations() == 50000 && secs < 30.0;
  std::ostringstream d;
  d << "50000 iterations in " << fmt(secs) << " s; max theta " << fmt(max_theta)
    << " vs cap " << fmt(theta_cap) << "; max trials " << max_trials << " vs cap "
    << trial_cap << "; " << violations << " violations";
  g_traces_m10.push_back(std::move(tr));
  return {pass, d.str()};
}

// ---- criterion 2: gap 1e-6 within 500 epochs, 10 seeds ----------------------

Outcome criterion2() {
  const LassoInstance& inst = desk_instance();
  const CompositeProblem& prob = desk_problem();

  int hits = 0;
  double worst_epoch = 0.0;
  double t0 = now_s();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SolverParams p;
    p.seed = seed;
    p.f_star = inst.f_star;
    p.gap_tol = 1e-6;
    p.max_iters = 10000;  // 20 blocks of 20: exactly 500 epochs
    RunTrace tr = run(prob, Method::rnbpg(), p);
    if (tr.reason == StopReason::gap_target && tr.last().epoch <= 500.0) {
      ++hits;
      worst_epoch = std::max(worst_epoch, tr.last().epoch);
    }
    g_traces_m10.push_back(std::move(tr));
  }
  double secs = now_s() - t0;

  bool pass = hits == 10 && secs < 60.0;
  std::ostringstream d;
  d << hits << "/10 seeds reached gap <= 1e-6 within 500 epochs (slowest "
    << fmt(worst_epoch) << " epochs) in " << fmt(secs) << " s";
  return {pass, d.str()};
}

// ---- criterion 3: epoch ordering rnbpg < rbcd_ls < rbcd ---------------------

Outcome criterion3() {
  const LassoInstance& inst = desk_instance();
  const CompositeProblem& prob = desk_problem();

  BenchPlan plan;
  plan.methods = {Method::rnbpg(), Method::rbcd_ls(), Method::rbcd()};
  plan.block_sizes = {20};
  plan.seeds.resize(10);
  std::iota(plan.seeds.begin(), plan.seeds.end(), std::uint64_t{1});
  plan.target_gap = 1e-6;
  plan.budget_epochs = 3000.0;  // headroom so no method's median is censored

  std::vector<CellResult> cells = run_bench(inst, plan);
  if (cells.size() != 3) return {false, "bench grid did not produce 3 cells"};

  // replay the same grid to keep the traces for criterion 4, and require the
  // replays to land on the bench epochs exactly
  bool replay_consistent = true;
  for (std::size_t mi = 0; mi < plan.methods.size(); ++mi) {
    for (std::size_t si = 0; si < plan.seeds.size(); ++si) {
      SolverParams p = plan.base;
      p.seed = plan.seeds[si];
      p.f_star = inst.f_star;
      p.gap_tol = plan.target_gap;
      p.max_iters =
          static_cast<std::uint64_t>(std::ceil(plan.budget_epochs * 20.0 * 1.05)) + 5;
      RunTrace tr = run(prob, plan.methods[mi], p);
      bool hit = tr.reason == StopReason::gap_target &&
                 tr.last().epoch <= plan.budget_epochs;
      double bench_epochs = cells[mi].epochs_to_target[si];
      if (hit ? tr.last().epoch != bench_epochs : !std::isnan(bench_epochs))
        replay_consistent = false;
      if (plan.methods[mi].kind == MethodKind::rnbpg)
        g_traces_m10.push_back(std::move(tr));
      else
        g_traces_m0.push_back(std::move(tr));
    }
  }

  double med_rnbpg = median10(cells[0].epochs_to_target);
  double med_ls = median10(cells[1].epochs_to_target);
  double med_rbcd = median10(cells[2].epochs_to_target);

  int wins = 0;
  for (std::size_t si = 0; si < 10; ++si) {
    double a = cells[0].epochs_to_target[si];
    double b = cells[2].epochs_to_target[si];
    if (!std::isnan(a) && (std::isnan(b) || a < b)) ++wins;
  }

  bool all_hit = cells[0].status == CellStatus::ok &&
                 cells[1].status == CellStatus::ok &&
                 cells[2].status == CellStatus::ok;
  bool pass = all_hit && med_rnbpg < med_ls && med_ls < med_rbcd && wins >= 9 &&
              replay_consistent;
  std::ostringstream d;
  d << "median epochs rnbpg " << fmt(med_rnbpg) << " < rbcd_ls " << fmt(med_ls)
    << " < rbcd " << fmt(med_rbcd) << "; rnbpg beat rbcd on " << wins
    << "/10 seeds";
  if (!all_hit) d << "; some runs missed the 3000-epoch budget";
  if (!replay_consistent) d << "; replayed traces diverged from the bench grid";
  return {pass, d.str()};
}

// ---- criterion 4: window descent on every trace from criteria 1-3 ----------

Outcome criterion4() {
  if (g_traces_m10.empty() && g_traces_m0.empty())
    return {false, "no traces were produced upstream"};

  const double sigma = SolverParams{}.sigma;
  std::size_t window_failures = 0;
  std::size_t margin_failures = 0;
  double worst_slack = std::numeric_limits<double>::infinity();

  for (const RunTrace& tr : g_traces_m10)
    if (!window_max_nonincreasing(tr.records, 10)) ++window_failures;

  for (const RunTrace& tr : g_traces_m0) {
    if (!window_max_nonincreasing(tr.records, 0)) ++window_failures;
    for (std::size_t i = 1; i < tr.records.size(); ++i) {
      double decrease = tr.records[i - 1].f_value - tr.records[i].f_value;
      double slack = decrease - 0.5 * sigma * tr.records[i].step_norm_sq;
      worst_slack = std::min(worst_slack, slack);
      if (slack < -1e-12) ++margin_failures;
    }
  }

  bool pass = window_failures == 0 && margin_failures == 0;
  std::ostringstream d;
  d << g_traces_m10.size() << " window-10 traces and " << g_traces_m0.size()
    << " monotone traces; " << window_failures << " window violations, "
    << margin_failures << " decrease-margin violations (worst slack "
    << fmt(worst_slack) << ")";
  return {pass, d.str()};
}

// ---- criterion 5: prox against exhaustive grid search -----------------------

struct KindDraw {
  SeparableRegularizer reg = SeparableRegularizer::zero();
  double x_lo = -2.0, x_hi = 2.0;
};

KindDraw draw_reg(RegKind kind, Rng& rng) {
  double lam = rng.next_uniform(0.2, 1.5);
  switch (kind) {
    case RegKind::zero: return {SeparableRegularizer::zero(), -2.0, 2.0};
    case RegKind::l1: return {SeparableRegularizer::l1(lam), -2.0, 2.0};
    case RegKind::group_l2: return {SeparableRegularizer::group_l2(lam), -2.0, 2.0};
    case RegKind::box: {
      double lo = rng.next_uniform(-1.5, -0.1);
      double hi = rng.next_uniform(0.1, 1.5);
      return {SeparableRegularizer::box(lo, hi), lo, hi};
    }
    case RegKind::l0: return {SeparableRegularizer::l0(lam), -2.0, 2.0};
  }
  return {};
}

Outcome criterion5() {
  const RegKind kinds[] = {RegKind::zero, RegKind::l1, RegKind::group_l2,
                           RegKind::box, RegKind::l0};
  Rng rng(1905);

  std::size_t checked = 0, obj_failures = 0, arg_failures = 0, tie_escapes = 0;
  double max_obj_dev = 0.0, max_arg_dev = 0.0;

  auto check_scalar = [&](const SeparableRegularizer& reg, double x, double g,
                          double theta) {
    double d = 0.0;
    reg.prox_block({&x, 1}, {&g, 1}, theta, {&d, 1});
    double d_grid = testref::grid_prox_scalar(reg, x, g, theta);
    double obj_dev = std::abs(testref::prox_objective_1(reg, x, g, theta, d) -
                              testref::prox_objective_1(reg, x, g, theta, d_grid));
    double arg_dev = std::abs(d - d_grid);
    max_obj_dev = std::max(max_obj_dev, obj_dev);
    if (obj_dev > 1e-6) ++obj_failures;
    // distinct minimizers of equal objective value; the objective check above
    // stays binding
    if (reg.kind() == RegKind::l0 && arg_dev > 2e-4) {
      ++tie_escapes;
    } else {
      max_arg_dev = std::max(max_arg_dev, arg_dev);
      if (arg_dev > 2e-4) ++arg_failures;
    }
    ++checked;
  };

  for (RegKind kind : kinds) {
    for (int t = 0; t < 1000; ++t) {
      KindDraw kd = draw_reg(kind, rng);
      double x = rng.next_uniform(kd.x_lo, kd.x_hi);
      double g = rng.next_uniform(-2.0, 2.0);
      double theta = rng.next_uniform(0.5, 4.0);
      check_scalar(kd.reg, x, g, theta);
    }
    for (int t = 0; t < 1000; ++t) {
      KindDraw kd = draw_reg(kind, rng);
      double x[2] = {rng.next_uniform(kd.x_lo, kd.x_hi),
                     rng.next_uniform(kd.x_lo, kd.x_hi)};
      double g[2] = {rng.next_uniform(-2.0, 2.0), rng.next_uniform(-2.0, 2.0)};
      double theta = rng.next_uniform(0.5, 4.0);
      double d[2] = {0.0, 0.0};
      kd.reg.prox_block(x, g, theta, d);

      double d_grid[2];
      if (kind == RegKind::group_l2) {
        testref::grid_prox_group2(kd.reg, x, g, theta, d_grid);
      } else {
        // the other kinds split over coordinates, so the per-coordinate scans
        // cover the 2-d grid exactly
        d_grid[0] = testref::grid_prox_scalar(kd.reg, x[0], g[0], theta);
        d_grid[1] = testref::grid_prox_scalar(kd.reg, x[1], g[1], theta);
      }
      double obj_dev = std::abs(testref::prox_objective_2(kd.reg, x, g, theta, d) -
                                testref::prox_objective_2(kd.reg, x, g, theta, d_grid));
      double arg_dev = std::max(std::abs(d[0] - d_grid[0]), std::abs(d[1] - d_grid[1]));
      max_obj_dev = std::max(max_obj_dev, obj_dev);
      if (obj_dev > 1e-6) ++obj_failures;
      if (kind == RegKind::l0 && arg_dev > 2e-4) {
        ++tie_escapes;
      } else {
        max_arg_dev = std::max(max_arg_dev, arg_dev);
        if (arg_dev > 2e-4) ++arg_failures;
      }
      ++checked;
    }
  }

  bool pass = obj_failures == 0 && arg_failures == 0;
  std::ostringstream d;
  d << checked << " prox instances (1000 scalar + 1000 2-vector per kind); max "
    << "objective dev " << fmt(max_obj_dev) << ", max argument dev "
    << fmt(max_arg_dev) << ", " << tie_escapes << " l0 ties, " << obj_failures
    << "+" << arg_failures << " failures";
  return {pass, d.str()};
}

// ---- criterion 6: gradients against finite differences, cache drift --------

BlockPartition random_partition(std::size_t total, Rng& rng) {
  std::vector<std::size_t> sizes;
  std::size_t left = total;
  while (left > 0) {
    std::size_t s = 1 + static_cast<std::size_t>(rng.next_u64() % 3);
    s = std::min(s, left);
    sizes.push_back(s);
    left -= s;
  }
  return make_partition(std::move(sizes));
}

// central differences of the oracle value, fresh state per probe
std::vector<double> fd_gradient(const SmoothOracle& oracle,
                                const std::vector<double>& x) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    double h = 1e-6 * (1.0 + std::abs(x[j]));
    std::vector<double> xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    double fp = oracle.value(oracle.make_state(xp));
    double fm = oracle.value(oracle.make_state(xm));
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Outcome criterion6() {
  Rng rng(606);
  std::size_t grad_failures = 0;
  double max_rel = 0.0;

  auto check_oracle = [&](const SmoothOracle& oracle, const std::vector<double>& x) {
    std::vector<double> fd = fd_gradient(oracle, x);
    OracleState st = oracle.make_state(x);
    std::vector<double> g(x.size());
    oracle.full_grad(st, g);

    double scale = 1.0;
    for (double v : g) scale = std::max(scale, std::abs(v));
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      err = std::max(err, std::abs(g[j] - fd[j]));

    const BlockPartition& part = oracle.partition();
    std::vector<double> gi(part.max_block_size());
    for (std::size_t i = 0; i < part.block_count(); ++i) {
      std::span<double> gs(gi.data(), part.size(i));
      oracle.partial_grad(st, i, gs);
      for (std::size_t j = 0; j < gs.size(); ++j)
        err = std::max(err, std::abs(gs[j] - fd[part.offset(i) + j]));
    }
    max_rel = std::max(max_rel, err / scale);
    if (err > 1e-6 * scale) ++grad_failures;
  };

  for (int t = 0; t < 100; ++t) {
    std::size_t m = 3 + rng.next_u64() % 10;
    std::size_t n = 2 + rng.next_u64() % 9;
    DenseMatrix a(m, n);
    for (double& v : a.data()) v = rng.next_uniform(-2.0, 2.0);
    std::vector<double> b(m), x(n);
    for (double& v : b) v = rng.next_uniform(-2.0, 2.0);
    for (double& v : x) v = rng.next_uniform(-2.0, 2.0);
    LeastSquaresOracle oracle(a, b, random_partition(n, rng));
    check_oracle(oracle, x);
  }
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + rng.next_u64() % 7;
    DenseMatrix b(n, n), q(n, n);
    for (double& v : b.data()) v = rng.next_uniform(-1.5, 1.5);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += b.at(k, r) * b.at(k, c);
        q.at(r, c) = s;
      }
    std::vector<double> c(n), x(n);
    for (double& v : c) v = rng.next_uniform(-2.0, 2.0);
    for (double& v : x) v = rng.next_uniform(-2.0, 2.0);
    QuadraticOracle oracle(q, c, random_partition(n, rng));
    check_oracle(oracle, x);
  }

  // drift: hammer one state with random block commits, compare the cache to an
  // exact recomputation
  auto drift_of = [&](const SmoothOracle& oracle, auto exact_cache) {
    const BlockPartition& part = oracle.partition();
    OracleState st = oracle.make_state({});
    std::vector<double> d(part.max_block_size());
    for (int t = 0; t < 10000; ++t) {
      std::size_t i = rng.next_u64() % part.block_count();
      std::span<double> ds(d.data(), part.size(i));
      for (double& v : ds) v = rng.next_uniform(-0.05, 0.05);
      oracle.commit_step(st, i, ds);
    }
    std::vector<double> exact = exact_cache(st.x);
    double num = 0.0, den = 1.0;
    for (std::size_t j = 0; j < exact.size(); ++j) {
      num = std::max(num, std::abs(st.cache[j] - exact[j]));
      den = std::max(den, std::abs(exact[j]));
    }
    return num / den;
  };

  DenseMatrix a(12, 10);
  for (double& v : a.data()) v = rng.next_uniform(-1.0, 1.0);
  std::vector<double> b(12);
  for (double& v : b) v = rng.next_uniform(-1.0, 1.0);
  LeastSquaresOracle ls(a, b, uniform_blocks(10, 3));
  double ls_drift = drift_of(ls, [&](const std::vector<double>& x) {
    std::vector<double> r(12);
    for (std::size_t j = 0; j < 12; ++j) {
      double s = -b[j];
      for (std::size_t c = 0; c < 10; ++c) s += a.at(j, c) * x[c];
      r[j] = s;
    }
    return r;
  });

  DenseMatrix bb(10, 10), q(10, 10);
  for (double& v : bb.data()) v = rng.next_uniform(-1.0, 1.0);
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 10; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < 10; ++k) s += bb.at(k, r) * bb.at(k, c);
      q.at(r, c) = s;
    }
  std::vector<double> lin(10, 0.5);
  QuadraticOracle quad(q, lin, uniform_blocks(10, 2));
  double quad_drift = drift_of(quad, [&](const std::vector<double>& x) {
    std::vector<double> r(10);
    for (std::size_t j = 0; j < 10; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < 10; ++c) s += q.at(j, c) * x[c];
      r[j] = s;
    }
    return r;
  });

  bool pass = grad_failures == 0 && ls_drift <= 1e-10 && quad_drift <= 1e-10;
  std::ostringstream d;
  d << "200 instances, max gradient rel err " << fmt(max_rel) << " ("
    << grad_failures << " failures); cache drift after 10000 commits: ls "
    << fmt(ls_drift) << ", quadratic " << fmt(quad_drift);
  return {pass, d.str()};
}

// ---- criterion 7: generator certificates and perturbation ------------------

double lasso_objective(const LassoInstance& inst, const std::vector<double>& x) {
  const std::size_t m = inst.a.rows(), n = inst.a.cols();
  double quad = 0.0;
  std::vector<double> r(inst.b);
  for (double& v : r) v = -v;
  for (std::size_t c = 0; c < n; ++c) {
    const double* col = inst.a.col(c);
    for (std::size_t j = 0; j < m; ++j) r[j] += col[j] * x[c];
  }
  for (double v : r) quad += v * v;
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  return 0.5 * quad + inst.lambda * l1;
}

Outcome criterion7() {
  const std::size_t m_list[] = {12, 30, 60, 100};
  const std::size_t n_list[] = {18, 45, 90, 150, 240};
  const double lambdas[] = {0.5, 1.0, 2.0};
  Rng rng(707);

  std::size_t instances = 0, cert_failures = 0, perturb_failures = 0;
  double worst_cert = 0.0;

  for (std::size_t m : m_list) {
    for (std::size_t n : n_list) {
      std::size_t smax = std::min(m, n);
      const std::size_t s_list[] = {1, smax / 4, smax / 2, (3 * smax) / 4, smax};
      for (std::size_t s : s_list) {
        double lam = lambdas[instances % 3];
        LassoInstance inst = generate_lasso(m, n, s, lam, 2000 + instances);
        ++instances;

        double cert = certificate_residual(inst);
        worst_cert = std::max(worst_cert, cert);
        if (!(cert <= 1e-8)) ++cert_failures;

        for (int t = 0; t < 100; ++t) {
          std::vector<double> delta(n);
          double norm_sq = 0.0;
          for (double& v : delta) {
            v = rng.next_normal();
            norm_sq += v * v;
          }
          double scale = 0.01 / std::sqrt(norm_sq);
          std::vector<double> x = inst.x_star;
          for (std::size_t j = 0; j < n; ++j) x[j] += scale * delta[j];
          if (!(lasso_objective(inst, x) > inst.f_star)) {
            ++perturb_failures;
            break;
          }
        }
      }
    }
  }

  bool pass = instances == 100 && cert_failures == 0 && perturb_failures == 0;
  std::ostringstream d;
  d << instances << " instances; worst certificate residual " << fmt(worst_cert)
    << "; " << cert_failures << " certificate and " << perturb_failures
    << " perturbation failures";
  return {pass, d.str()};
}

// ---- criterion 8: fitted decay of the running min prox-gradient ------------

Outcome criterion8() {
  const LassoInstance& inst = desk_instance();
  const CompositeProblem& prob = desk_problem();

  int steep = 0;
  double rho_min = std::numeric_limits<double>::infinity();
  double rho_max = -std::numeric_limits<double>::infinity();
  std::string note;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SolverParams p;
    p.seed = seed;
    p.f_star = inst.f_star;
    p.gap_tol = 1e-10;  // run deep so the fit sees a long tail
    p.max_iters = 200000;
    RunTrace tr = run(prob, Method::rnbpg(), p);
    try {
      double rho = rate_trend(tr, p.window);
      rho_min = std::min(rho_min, rho);
      rho_max = std::max(rho_max, rho);
      if (rho <= -0.5) ++steep;
    } catch (const Error& e) {
      note = std::string("; seed ") + std::to_string(seed) + ": " + e.what();
    }
  }

  bool pass = steep >= 8;
  std::ostringstream d;
  d << steep << "/10 seeds with fitted exponent <= -0.5 (range [" << fmt(rho_min)
    << ", " << fmt(rho_max) << "])" << note;
  return {pass, d.str()};
}

// ---- criterion 9: byte-identical CLI reruns ---------------------------------

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

Outcome criterion9() {
  fs::path dir = fs::temp_directory_path() / "rnbpg_acceptance";
  fs::create_directories(dir);
  fs::path inst_path = dir / "desk.bpxi";
  save_instance(desk_instance(), inst_path.string());

  auto spawn = [&](const fs::path& csv) {
    std::string cmd = std::string(RNBPG_CLI_PATH) + " run --instance " +
                      inst_path.string() +
                      " --method rnbpg --block-size 20 --seed 4 --csv " +
                      csv.string() + " > /dev/null";
    int rc = std::system(cmd.c_str());
    return rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
  };

  fs::path csv_a = dir / "rerun_a.csv", csv_b = dir / "rerun_b.csv";
  if (!spawn(csv_a) || !spawn(csv_b)) return {false, "CLI run did not exit cleanly"};

  auto a = read_lines(csv_a);
  auto b = read_lines(csv_b);
  if (a.size() != b.size() || a.size() < 3)
    return {false, "trace row counts differ or the run is trivial"};

  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::string_view va(a[i]), vb(b[i]);
    va = va.substr(0, va.rfind(','));  // elapsed_s is the last column
    vb = vb.substr(0, vb.rfind(','));
    if (va != vb) ++mismatches;
  }

  bool pass = mismatches == 0;
  std::ostringstream d;
  d << "two CLI reruns, " << a.size() << " lines each, " << mismatches
    << " mismatching lines after dropping elapsed_s";
  return {pass, d.str()};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "stepsize and trial caps", criterion1},
      {2, "known-optimum convergence", criterion2},
      {3, "method ordering at blocksize 20", criterion3},
      {4, "window descent", criterion4},
      {5, "prox grid equivalence", criterion5},
      {6, "gradient and cache accuracy", criterion6},
      {7, "generator certificates", criterion7},
      {8, "prox-gradient decay rate", criterion8},
      {9, "deterministic reruns", criterion9},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    Outcome out;
    try {
      out = e.fn();
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    if (!out.pass) ++failures;
    std::cout << "criterion " << e.id << " (" << e.label << "): "
              << (out.pass ? "PASS" : "FAIL") << " [" << out.detail << "]\n";
    std::cout.flush();
  }
  std::cout << "acceptance: " << (9 - failures) << "/9 criteria passed\n";
  return failures;
}
