#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rnbpg/bench.hpp"
#include "rnbpg/instances.hpp"
#include "rnbpg/io.hpp"
#include "rnbpg/solver.hpp"

using namespace rnbpg;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("format_double round-trips and blanks out NaN") {
  for (double v : {0.1, 1.0, -2.5, 1e-300, 3.141592653589793, 1e8}) {
    std::string s = format_double(v);
    double back = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(ec == std::errc());
    REQUIRE(p == s.data() + s.size());
    CHECK(back == v);
  }
  CHECK(format_double(kNotComputed).empty());
  CHECK(format_double(5.0) == "5");
}

TEST_CASE("trace csv layout") {
  auto inst = generate_lasso(12, 16, 4, 1.0, 5);
  auto prob = make_lasso_problem(inst, 4);
  SolverParams p;
  p.max_iters = 30;
  p.f_star = inst.f_star;
  p.gap_tol = 0.0;  // never reached; runs the full budget
  RunTrace tr = run(prob, Method::rnbpg(), p);

  std::ostringstream os;
  write_trace_csv(os, tr, inst.f_star);
  auto lines = lines_of(os.str());
  REQUIRE(lines.size() == tr.records.size());  // header replaces the k=0 row
  CHECK(lines[0] == kTraceCsvHeader);
  CHECK(count_fields(lines[0]) == 10);
  for (std::size_t i = 1; i < lines.size(); ++i)
    CHECK(count_fields(lines[i]) == 10);

  // k and block columns of the first iteration row
  CHECK(lines[1].substr(0, 2) == "1,");

  // gap column filled when f_star is known, blank otherwise
  std::ostringstream bare;
  write_trace_csv(bare, tr, std::nullopt);
  auto bare_lines = lines_of(bare.str());
  auto field = [](const std::string& line, std::size_t idx) {
    std::size_t from = 0;
    for (std::size_t i = 0; i < idx; ++i) from = line.find(',', from) + 1;
    return line.substr(from, line.find(',', from) - from);
  };
  CHECK(!field(lines[1], 6).empty());
  CHECK(field(bare_lines[1], 6).empty());

  // pg_norm is only evaluated on diagnostic iterations; other rows are blank
  bool saw_blank = false, saw_value = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (field(lines[i], 8).empty())
      saw_blank = true;
    else
      saw_value = true;
  }
  CHECK(saw_blank);
  CHECK(saw_value);
}

TEST_CASE("zero-iteration traces produce a header-only csv") {
  auto inst = generate_lasso(8, 10, 2, 1.0, 6);
  auto prob = make_lasso_problem(inst, 2);
  SolverParams p;
  p.max_iters = 0;
  RunTrace tr = run(prob, Method::rnbpg(), p);
  std::ostringstream os;
  write_trace_csv(os, tr, std::nullopt);
  auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 1);
  CHECK(lines[0] == kTraceCsvHeader);
}

TEST_CASE("diagnostic csv rows") {
  auto inst = generate_lasso(10, 12, 3, 1.0, 7);
  auto prob = make_lasso_problem(inst, 3);
  SolverParams p;
  p.max_iters = 20;
  p.f_star = inst.f_star;
  p.gap_tol = 0.0;
  std::ostringstream os;
  write_diag_csv_header(os);
  std::size_t rows = 0;
  RunCallbacks cb;
  cb.on_diagnostic = [&](const DiagnosticReport& rep) {
    write_diag_csv_row(os, rep);
    ++rows;
    CHECK(rep.min_pg_sq_so_far >= 0.0);
  };
  Solver s(prob, Method::rnbpg(), p);
  s.run(cb);
  auto lines = lines_of(os.str());
  REQUIRE(lines.size() == rows + 1);
  CHECK(lines[0] == kDiagCsvHeader);
  CHECK(count_fields(lines[0]) == 6);
  for (std::size_t i = 1; i < lines.size(); ++i)
    CHECK(count_fields(lines[i]) == 6);
}

TEST_CASE("bench grid aggregates per cell") {
  auto inst = generate_lasso(20, 24, 6, 1.0, 12);
  BenchPlan plan;
  plan.methods = {Method::rnbpg(), Method::rbcd_ls(), Method::rbcd()};
  plan.block_sizes = {4};
  plan.seeds = {1, 2, 3};
  plan.target_gap = 1e-6;
  plan.budget_epochs = 500.0;
  auto cells = run_bench(inst, plan);
  REQUIRE(cells.size() == 3);
  for (const auto& cell : cells) {
    CHECK(cell.block_size == 4);
    CHECK(cell.epochs_to_target.size() == 3);
    CHECK(cell.status == CellStatus::ok);
    CHECK(cell.hits == 3);
    CHECK(std::isfinite(cell.mean_epochs));
    CHECK(std::isfinite(cell.sd_epochs));
    CHECK(cell.mean_epochs > 0.0);
    for (double e : cell.epochs_to_target) CHECK(e <= 500.0);
  }
  CHECK(cells[0].method == "rnbpg");
  CHECK(cells[1].method == "rbcd_ls");
  CHECK(cells[2].method == "rbcd");

  std::ostringstream os;
  write_bench_csv(os, cells, plan.seeds.size());
  auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == kBenchCsvHeader);
  CHECK(lines[1].substr(0, 6) == "rnbpg,");
}

TEST_CASE("single seed cells report zero spread") {
  auto inst = generate_lasso(16, 20, 4, 1.0, 13);
  BenchPlan plan;
  plan.methods = {Method::rnbpg()};
  plan.block_sizes = {5};
  plan.seeds = {4};
  auto cells = run_bench(inst, plan);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].hits == 1);
  CHECK(cells[0].sd_epochs == 0.0);
}

TEST_CASE("budget misses are marked not crashed") {
  auto inst = generate_lasso(16, 20, 4, 1.0, 14);
  BenchPlan plan;
  plan.methods = {Method::rbcd()};
  plan.block_sizes = {4};
  plan.seeds = {1, 2};
  plan.target_gap = 1e-12;
  plan.budget_epochs = 0.5;  // a handful of iterations; cannot reach 1e-12
  auto cells = run_bench(inst, plan);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].hits == 0);
  CHECK(cells[0].status == CellStatus::miss);
  CHECK(std::isnan(cells[0].mean_epochs));
  for (double e : cells[0].epochs_to_target) CHECK(std::isnan(e));

  std::ostringstream os;
  write_bench_csv(os, cells, plan.seeds.size());
  auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 2);
  // mean and sd columns are empty on a full miss
  CHECK(lines[1].find("miss") != std::string::npos);
}

TEST_CASE("bench requires a certified instance") {
  LassoInstance inst;
  inst.a = DenseMatrix(3, 4);
  inst.b = {0.0, 0.0, 0.0};
  inst.lambda = 1.0;
  BenchPlan plan;
  plan.methods = {Method::rnbpg()};
  plan.block_sizes = {2};
  plan.seeds = {1};
  CHECK_THROWS_AS(run_bench(inst, plan), Error);
}

TEST_CASE("cell status names") {
  CHECK(cell_status_name(CellStatus::ok) == "ok");
  CHECK(cell_status_name(CellStatus::partial) == "partial");
  CHECK(cell_status_name(CellStatus::miss) == "miss");
  CHECK(cell_status_name(CellStatus::error) == "error");
}
