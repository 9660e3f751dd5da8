#pragma once

// Per-iteration records produced by a run.

#include "dpg/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace dpg {

/// Everything the observer computes at iteration k. Row k = 0 holds the
/// initial point; quantities that need a previous iterate are 0 there.
struct IterationMetrics {
  std::size_t k = 0;
  Vector x_bar;            // average iterate
  Vector v_bar;            // average post-consensus point
  Vector z;                // prox of v_bar (centralized exact step)
  double dx_norm = 0.0;    // ||x_bar_k - x_bar_{k-1}||
  double e_norm = 0.0;     // ||e_k||
  std::optional<double> eps;  // eps_k; empty when G_h is unusable
  double residual_bound = 0.0;
  bool residual_partial = false;  // eps term omitted
  double D = 0.0;
  double max_consensus_gap = 0.0;  // max_i ||x_i - x_bar||
  double geo_bound = 0.0;          // 2 Gamma gamma^k sum_j ||q_j||
  double f_avg = 0.0;              // f(x_bar)
  double rate_sum = 0.0;           // sum_{j<=k} ||x_bar_j - x_bar_{j-1}||^2
  std::size_t comm_cumulative = 0;

  // Communication accounting for this iteration.
  std::size_t slots = 0;
  std::size_t messages = 0;
  std::size_t messages_cumulative = 0;

  // Right-hand sides and residuals of the per-iteration certificates.
  double e_bound = 0.0;                   // (L/m) sum ||x_{i,k-1} - x_bar_{k-1}||
  std::optional<double> eps_bound;        // (2G_h/m) S + (1/2alpha)(S/m)^2, S = sum ||v_i - v_bar||
  double mean_tracking_error = 0.0;       // ||v_bar_k - (x_bar_{k-1} - alpha(grad g(x_bar_{k-1}) + e_k))||_inf
  std::optional<double> inexact_excess;   // prox-objective gap minus eps_k
  double v_spread_max = 0.0;              // max_i ||v_i - v_bar||
  double v_spread_bound = 0.0;            // Gamma gamma^k sum_j ||q_j||
  double q_sum = 0.0;                     // sum_j ||q_j||
  std::optional<double> q_growth_bound;   // sum_j ||q_{j,k-1}|| + alpha m (G_g + G_h)
  bool in_ball = true;                    // iterates inside the radius used for G_h, G_g
};

struct Snapshot {
  AgentVectors x;
  AgentVectors q;  // empty in row 0
  AgentVectors v;  // empty in row 0
};

struct TraceRow {
  IterationMetrics metrics;
  std::optional<Snapshot> snapshot;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  int agents = 0;
  int dim = 0;
  double alpha = 0.0;
  double lipschitz = 0.0;
  double radius = 0.0;
  std::optional<double> G_h;
  double G_g = 0.0;
  bool stopped_early = false;

  std::size_t iterations() const noexcept { return rows.empty() ? 0 : rows.size() - 1; }
  const IterationMetrics& last() const { return rows.back().metrics; }
};

/// Column order of the CSV trace.
inline constexpr const char* kTraceHeader =
    "k,comm_cumulative,f_avg,D,dx_norm,e_norm,eps,residual_bound,max_consensus_gap,geo_bound,rate_T_times_stat,"
    "slots,messages,messages_cumulative";

/// One header line, then one line per row. Unavailable eps prints as "nan".
void write_trace_csv(std::ostream& out, const RunTrace& trace);

}  // namespace dpg
