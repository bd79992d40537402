#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "rnbpg/trace.hpp"

namespace rnbpg {

// Shortest decimal that round-trips the double; NaN becomes the empty field.
std::string format_double(double v);

inline constexpr const char* kTraceCsvHeader =
    "k,epoch,block,theta,inner_trials,f,gap,step_norm_sq,pg_norm,elapsed_s";

void write_trace_csv_header(std::ostream& os);
// Iteration rows only: the k = 0 initial-state record is skipped, so a run
// with max_iters = 0 produces a header-only file. gap stays empty without
// f_star.
void write_trace_csv_row(std::ostream& os, const TraceRecord& rec,
                         std::optional<double> f_star);
void write_trace_csv(std::ostream& os, const RunTrace& trace,
                     std::optional<double> f_star);

inline constexpr const char* kDiagCsvHeader =
    "k,epoch,pg_norm,gap,kkt_residual,min_pg_sq_so_far";

void write_diag_csv_header(std::ostream& os);
void write_diag_csv_row(std::ostream& os, const DiagnosticReport& rep);

}  // namespace rnbpg
