#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rnbpg/bench.hpp"
#include "rnbpg/diagnostics.hpp"
#include "rnbpg/errors.hpp"
#include "rnbpg/instances.hpp"
#include "rnbpg/io.hpp"
#include "rnbpg/params.hpp"
#include "rnbpg/solver.hpp"

namespace {

using namespace rnbpg;

const char* reason_name(StopReason r) {
  switch (r) {
    case StopReason::max_iters: return "max_iters";
    case StopReason::pg_tol: return "pg_tol";
    case StopReason::gap_target: return "gap_target";
  }
  return "";
}

struct SourceArgs {
  std::string instance_path;
  std::uint32_t m = 0, n = 0;
  std::size_t sparsity = 0;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  bool gen_given = false;
};

void add_source_flags(CLI::App* cmd, SourceArgs& src) {
  auto* inst = cmd->add_option("--instance", src.instance_path, "BPXI instance file");
  auto* gm = cmd->add_option("--gen-m", src.m, "generated instance rows");
  auto* gn = cmd->add_option("--gen-n", src.n, "generated instance columns");
  auto* gs = cmd->add_option("--gen-sparsity", src.sparsity, "optimum nonzeros");
  cmd->add_option("--gen-lambda", src.lambda, "l1 weight of the generated instance");
  cmd->add_option("--gen-seed", src.seed, "generator seed");
  inst->excludes(gm)->excludes(gn)->excludes(gs);
  gm->needs(gn)->needs(gs);
}

LassoInstance resolve_source(const SourceArgs& src) {
  if (!src.instance_path.empty()) return load_instance(src.instance_path);
  if (src.m == 0 && src.n == 0)
    throw Error(ErrorCode::bad_config,
                "no instance: give --instance or --gen-m/--gen-n/--gen-sparsity");
  return generate_lasso(src.m, src.n, src.sparsity, src.lambda, src.seed);
}

int cmd_gen(std::uint32_t m, std::uint32_t n, std::size_t sparsity, double lambda,
            std::uint64_t seed, const std::string& out_path) {
  LassoInstance inst = generate_lasso(m, n, sparsity, lambda, seed);
  save_instance(inst, out_path);
  std::cout << "wrote " << out_path << ": m=" << m << " n=" << n
            << " sparsity=" << sparsity << " lambda=" << format_double(lambda)
            << " seed=" << seed << "\n"
            << "KKT residual " << format_double(certificate_residual(inst))
            << " <= 1e-8\n"
            << "F* = " << format_double(inst.f_star) << "\n";
  return 0;
}

struct RunArgs {
  SourceArgs src;
  std::string method_name = "rnbpg";
  std::size_t block_size = 1;
  std::uint64_t seed = 0;
  std::uint64_t max_iters = 0;
  std::uint32_t window = 0;
  double target_gap = 1e-6;
  double tol = 0.0;
  bool no_bb = false;
  std::string config_path, csv_path, diag_path, reg_spec;
};

int cmd_run(const RunArgs& a, const CLI::App* cmd) {
  LassoInstance inst = resolve_source(a.src);

  ConfigFile cfg;
  if (!a.config_path.empty()) cfg = load_config(a.config_path);
  SolverParams p = cfg.params;
  if (cmd->count("--seed")) p.seed = a.seed;
  if (cmd->count("--max-iters")) p.max_iters = a.max_iters;
  if (cmd->count("--window")) p.window = a.window;
  if (cmd->count("--tol")) p.tol = a.tol;
  p.gap_tol = a.target_gap;

  std::size_t bs = a.block_size;
  if (!cmd->count("--block-size") && cfg.block_size) bs = *cfg.block_size;

  SeparableRegularizer reg = SeparableRegularizer::l1(inst.lambda);
  if (!a.reg_spec.empty())
    reg = SeparableRegularizer::parse(a.reg_spec);
  else if (cfg.reg)
    reg = *cfg.reg;

  // the certified optimum only applies to the instance's own l1 objective
  if (inst.has_optimum() && reg.kind() == RegKind::l1 &&
      reg.lambda() == inst.lambda)
    p.f_star = inst.f_star;
  else
    p.f_star.reset();

  Method method = Method::parse(a.method_name);
  if (a.no_bb) method.bb_init = false;

  CompositeProblem problem = make_lasso_problem(inst, bs);
  problem.reg = reg;

  std::ofstream csv_file, diag_file;
  std::ostream* csv = &std::cout;
  if (!a.csv_path.empty()) {
    csv_file.open(a.csv_path, std::ios::trunc);
    if (!csv_file)
      throw Error(ErrorCode::io_failure, "cannot open '" + a.csv_path + "'");
    csv = &csv_file;
  }
  std::ostream& summary = a.csv_path.empty() ? std::cerr : std::cout;

  RunCallbacks cb;
  write_trace_csv_header(*csv);
  cb.on_record = [&](const TraceRecord& rec) {
    write_trace_csv_row(*csv, rec, p.f_star);
  };
  if (!a.diag_path.empty()) {
    diag_file.open(a.diag_path, std::ios::trunc);
    if (!diag_file)
      throw Error(ErrorCode::io_failure, "cannot open '" + a.diag_path + "'");
    write_diag_csv_header(diag_file);
    cb.on_diagnostic = [&](const DiagnosticReport& rep) {
      write_diag_csv_row(diag_file, rep);
    };
  }

  RunTrace trace = run(problem, method, p, cb);
  csv->flush();

  const TraceRecord& last = trace.last();
  summary << "summary: method=" << method.name() << " block_size=" << bs
          << " seed=" << p.seed << " iterations=" << last.k
          << " epochs=" << format_double(last.epoch)
          << " f=" << format_double(last.f_value)
          << " reason=" << reason_name(trace.reason)
          << " wall_s=" << format_double(trace.total_elapsed_s);
  if (p.f_star) {
    summary << " gap=" << format_double(last.f_value - *p.f_star) << " result="
            << (trace.reason == StopReason::gap_target ? "hit" : "miss");
  }
  summary << "\n";
  return 0;
}

struct BenchArgs {
  SourceArgs src;
  std::vector<std::string> methods = {"rnbpg", "rbcd_ls", "rbcd"};
  std::vector<std::size_t> block_sizes = {20};
  std::vector<std::uint64_t> seeds;
  double target_gap = 1e-6;
  double budget_epochs = 500.0;
  std::string config_path, out_path;
};

int cmd_bench(const BenchArgs& a) {
  LassoInstance inst = resolve_source(a.src);

  BenchPlan plan;
  if (!a.config_path.empty()) plan.base = load_config(a.config_path).params;
  for (const std::string& name : a.methods)
    plan.methods.push_back(Method::parse(name));
  plan.block_sizes = a.block_sizes;
  plan.seeds = a.seeds;
  if (plan.seeds.empty()) {
    plan.seeds.resize(10);
    std::iota(plan.seeds.begin(), plan.seeds.end(), std::uint64_t{1});
  }
  plan.target_gap = a.target_gap;
  plan.budget_epochs = a.budget_epochs;

  std::vector<CellResult> cells = run_bench(inst, plan);

  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (!a.out_path.empty()) {
    out_file.open(a.out_path, std::ios::trunc);
    if (!out_file)
      throw Error(ErrorCode::io_failure, "cannot open '" + a.out_path + "'");
    out = &out_file;
  }
  write_bench_csv(*out, cells, plan.seeds.size());
  out->flush();
  if (!a.out_path.empty())
    std::cout << "wrote " << a.out_path << " (" << cells.size() << " cells)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized block proximal gradient benchmark harness"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a certified l1 instance");
  std::uint32_t gen_m = 0, gen_n = 0;
  std::size_t gen_sparsity = 0;
  double gen_lambda = 1.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--m", gen_m, "rows")->required();
  gen->add_option("--n", gen_n, "columns")->required();
  gen->add_option("--sparsity", gen_sparsity, "optimum nonzeros")->required();
  gen->add_option("--lambda", gen_lambda, "l1 weight");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output BPXI path")->required();

  auto* runc = app.add_subcommand("run", "run one method and stream its trace");
  RunArgs ra;
  add_source_flags(runc, ra.src);
  runc->add_option("--method", ra.method_name, "rnbpg | rbcd | rbcd_ls");
  runc->add_option("--block-size", ra.block_size, "coordinates per block");
  runc->add_option("--seed", ra.seed, "sampling seed");
  runc->add_option("--max-iters", ra.max_iters, "iteration budget");
  runc->add_option("--window", ra.window, "nonmonotone window M");
  runc->add_option("--target-gap", ra.target_gap, "stop at F - F* <= this");
  runc->add_option("--tol", ra.tol, "stop when the prox gradient norm <= this");
  runc->add_flag("--no-bb", ra.no_bb, "disable the curvature initialization");
  runc->add_option("--config", ra.config_path, "key=value parameter file");
  runc->add_option("--csv", ra.csv_path, "trace CSV path (default stdout)");
  runc->add_option("--diag-csv", ra.diag_path, "per-epoch diagnostic CSV path");
  runc->add_option("--reg", ra.reg_spec,
                   "regularizer override, e.g. l1:0.5 or zero");

  auto* benchc = app.add_subcommand("bench", "run a method x blocksize x seed grid");
  BenchArgs ba;
  add_source_flags(benchc, ba.src);
  benchc->add_option("--methods", ba.methods, "methods to compare")->delimiter(',');
  benchc->add_option("--block-sizes", ba.block_sizes, "block sizes to sweep")
      ->delimiter(',');
  benchc->add_option("--seeds", ba.seeds, "seeds (default 1..10)")->delimiter(',');
  benchc->add_option("--target-gap", ba.target_gap, "per-run gap target");
  benchc->add_option("--budget-epochs", ba.budget_epochs, "per-run epoch budget");
  benchc->add_option("--config", ba.config_path, "key=value parameter file");
  benchc->add_option("--out", ba.out_path, "aggregate CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed())
      return cmd_gen(gen_m, gen_n, gen_sparsity, gen_lambda, gen_seed, gen_out);
    if (runc->parsed()) return cmd_run(ra, runc);
    return cmd_bench(ba);
  } catch (const rnbpg::LineSearchFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n  theta trail:";
    for (double t : e.theta_trail) std::cerr << ' ' << rnbpg::format_double(t);
    std::cerr << "\n  objective window:";
    for (double f : e.objective_window) std::cerr << ' ' << rnbpg::format_double(f);
    std::cerr << "\n";
    return 3;
  } catch (const rnbpg::Error& e) {
    if (e.code() == rnbpg::ErrorCode::divergence) {
      std::cerr << "numerical failure: " << e.what() << "\n";
      return 3;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
