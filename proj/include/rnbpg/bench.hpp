#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rnbpg/instances.hpp"
#include "rnbpg/params.hpp"
#include "rnbpg/solver.hpp"

namespace rnbpg {

// Grid of (method x block size x seed) runs over one certified instance,
// x0 = 0 everywhere. A run hits when it reaches gap <= target_gap within
// budget_epochs of work.
struct BenchPlan {
  std::vector<Method> methods;
  std::vector<std::size_t> block_sizes;
  std::vector<std::uint64_t> seeds;
  double target_gap = 1e-6;
  double budget_epochs = 500.0;
  SolverParams base;  // seed, f_star, gap_tol, max_iters set per run
};

enum class CellStatus { ok, partial, miss, error };
std::string cell_status_name(CellStatus s);

struct CellResult {
  std::string method;
  std::size_t block_size = 0;
  std::vector<double> epochs_to_target;  // per seed, NaN on a budget miss
  std::size_t hits = 0;
  double mean_epochs = kNotComputed;  // over hitting seeds
  double sd_epochs = kNotComputed;    // sample sd, 0 for a single hit
  CellStatus status = CellStatus::error;
  std::string note;  // error text when status == error
};

// Sequential; one oracle per block size shared by every method and seed.
// A failing cell is reported in its result, the rest of the grid still runs.
std::vector<CellResult> run_bench(const LassoInstance& inst, const BenchPlan& plan);

inline constexpr const char* kBenchCsvHeader =
    "method,block_size,n_seeds,n_hit,mean_epochs_to_target,sd_epochs_to_target,"
    "status,note";

void write_bench_csv(std::ostream& os, std::span<const CellResult> cells,
                     std::size_t n_seeds);

}  // namespace rnbpg
