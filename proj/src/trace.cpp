#include "dpg/trace.hpp"

#include "dpg/io.hpp"

#include <limits>
#include <ostream>

namespace dpg {

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << kTraceHeader << '\n';
  for (const TraceRow& row : trace.rows) {
    const IterationMetrics& m = row.metrics;
    const double eps = m.eps.value_or(std::numeric_limits<double>::quiet_NaN());
    out << m.k << ',' << m.comm_cumulative << ',' << format_double(m.f_avg) << ',' << format_double(m.D) << ','
        << format_double(m.dx_norm) << ',' << format_double(m.e_norm) << ',' << format_double(eps) << ','
        << format_double(m.residual_bound) << ',' << format_double(m.max_consensus_gap) << ','
        << format_double(m.geo_bound) << ',' << format_double(m.rate_sum) << ',' << m.slots << ',' << m.messages
        << ',' << m.messages_cumulative << '\n';
  }
}

}  // namespace dpg
