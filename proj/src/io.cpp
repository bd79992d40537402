#include "rnbpg/io.hpp"

#include <charconv>
#include <cmath>

namespace rnbpg {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

void write_trace_csv_header(std::ostream& os) { os << kTraceCsvHeader << '\n'; }

void write_trace_csv_row(std::ostream& os, const TraceRecord& rec,
                         std::optional<double> f_star) {
  if (rec.k == 0) return;
  os << rec.k << ',' << format_double(rec.epoch) << ',' << rec.block << ','
     << format_double(rec.theta) << ',' << rec.inner_trials << ','
     << format_double(rec.f_value) << ','
     << (f_star ? format_double(rec.f_value - *f_star) : std::string()) << ','
     << format_double(rec.step_norm_sq) << ',' << format_double(rec.pg_norm)
     << ',' << format_double(rec.elapsed_s) << '\n';
}

void write_trace_csv(std::ostream& os, const RunTrace& trace,
                     std::optional<double> f_star) {
  write_trace_csv_header(os);
  for (const TraceRecord& rec : trace.records) write_trace_csv_row(os, rec, f_star);
}

void write_diag_csv_header(std::ostream& os) { os << kDiagCsvHeader << '\n'; }

void write_diag_csv_row(std::ostream& os, const DiagnosticReport& rep) {
  os << rep.k << ',' << format_double(rep.epoch) << ','
     << format_double(rep.pg_norm) << ',' << format_double(rep.gap) << ','
     << format_double(rep.kkt_residual) << ','
     << format_double(rep.min_pg_sq_so_far) << '\n';
}

}  // namespace rnbpg
