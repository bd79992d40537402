#include "rnbpg/bench.hpp"

#include <algorithm>
#include <cmath>

#include "rnbpg/errors.hpp"
#include "rnbpg/io.hpp"

namespace rnbpg {

std::string cell_status_name(CellStatus s) {
  switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::partial: return "partial";
    case CellStatus::miss: return "miss";
    case CellStatus::error: return "error";
  }
  return "";
}

std::vector<CellResult> run_bench(const LassoInstance& inst, const BenchPlan& plan) {
  if (!inst.has_optimum())
    throw Error(ErrorCode::invalid_parameter,
                "run_bench needs an instance with a certified optimum");
  if (plan.methods.empty() || plan.block_sizes.empty() || plan.seeds.empty())
    throw Error(ErrorCode::invalid_parameter,
                "run_bench needs at least one method, block size, and seed");
  if (!(plan.target_gap > 0.0) || !(plan.budget_epochs > 0.0))
    throw Error(ErrorCode::invalid_parameter,
                "run_bench: target gap and epoch budget must be positive");

  std::vector<CellResult> out;
  for (std::size_t bs : plan.block_sizes) {
    CompositeProblem problem = make_lasso_problem(inst, bs);
    const double n_blocks =
        static_cast<double>(problem.partition().block_count());
    for (const Method& method : plan.methods) {
      CellResult cell;
      cell.method = method.name();
      cell.block_size = bs;
      try {
        for (std::uint64_t seed : plan.seeds) {
          SolverParams p = plan.base;
          p.seed = seed;
          p.f_star = inst.f_star;
          p.gap_tol = plan.target_gap;
          // epoch accounting is stochastic for uneven blocks; pad the
          // iteration budget and filter on the recorded epoch below
          p.max_iters = static_cast<std::uint64_t>(
                            std::ceil(plan.budget_epochs * n_blocks * 1.05)) + 5;
          RunTrace trace = run(problem, method, p);
          bool hit = trace.reason == StopReason::gap_target &&
                     trace.last().epoch <= plan.budget_epochs;
          cell.epochs_to_target.push_back(hit ? trace.last().epoch : kNotComputed);
          if (hit) ++cell.hits;
        }
        if (cell.hits > 0) {
          double sum = 0.0;
          for (double e : cell.epochs_to_target)
            if (!std::isnan(e)) sum += e;
          cell.mean_epochs = sum / static_cast<double>(cell.hits);
          double ss = 0.0;
          for (double e : cell.epochs_to_target)
            if (!std::isnan(e)) ss += (e - cell.mean_epochs) * (e - cell.mean_epochs);
          cell.sd_epochs =
              cell.hits > 1 ? std::sqrt(ss / static_cast<double>(cell.hits - 1)) : 0.0;
        }
        cell.status = cell.hits == plan.seeds.size() ? CellStatus::ok
                      : cell.hits > 0                ? CellStatus::partial
                                                     : CellStatus::miss;
      } catch (const std::exception& e) {
        cell.status = CellStatus::error;
        cell.note = e.what();
      }
      out.push_back(std::move(cell));
    }
  }
  return out;
}

void write_bench_csv(std::ostream& os, std::span<const CellResult> cells,
                     std::size_t n_seeds) {
  os << kBenchCsvHeader << '\n';
  for (const CellResult& c : cells) {
    std::string note = c.note;
    std::replace(note.begin(), note.end(), ',', ';');
    os << c.method << ',' << c.block_size << ',' << n_seeds << ',' << c.hits
       << ',' << format_double(c.mean_epochs) << ','
       << format_double(c.sd_epochs) << ',' << cell_status_name(c.status) << ','
       << note << '\n';
  }
}

}  // namespace rnbpg
