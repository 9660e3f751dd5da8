#pragma once

// Certificates computed along a run from full-state snapshots. The observer
// sees every agent at once; none of this is part of the distributed protocol.

#include "dpg/graph.hpp"
#include "dpg/objective.hpp"
#include "dpg/prox.hpp"
#include "dpg/trace.hpp"
#include "dpg/types.hpp"

#include <optional>

namespace dpg {

Vector mean(const AgentVectors& vectors);

/// sum_i ||x_i - mean||.
double spread(const AgentVectors& vectors, const Vector& center);

/// e = (1/m) sum_i (grad g_i(x_i) - grad g_i(x_bar)).
Vector error_sequence_e(const AgentVectors& x_all, const Objectives& objectives);

/// eps = ||x_bar - z|| (G_h + ||z - v_bar|| / alpha) + ||x_bar - z||^2 / (2 alpha).
/// Empty when G_h is unavailable.
std::optional<double> error_sequence_eps(const Vector& x_bar, const Vector& v_bar, const Vector& z, double alpha,
                                         std::optional<double> G_h);

/// D = sum_i <x_i, sum_j a_ij (x_i - x_j)>.
double disagreement(const AgentVectors& x_all, const Matrix& A);

/// (1/2) sum_{i,j} a_ij ||x_i - x_j||^2; equals disagreement() for symmetric A.
double disagreement_pairwise(const AgentVectors& x_all, const Matrix& A);

struct StationarityBound {
  double value = 0.0;
  bool partial = false;  // eps term missing
};

/// (1/alpha + L) ||x_bar_k - x_bar_{k-1}|| + sqrt(2 eps_k / alpha) + ||e_k||.
StationarityBound stationarity_bound(double dx_norm, std::optional<double> eps, double e_norm, double alpha,
                                     double L);

struct RateStatistic {
  double statistic = 0.0;  // (1/T) sum_{k<=T} ||x_bar_k - x_bar_{k-1}||^2
  double scaled = 0.0;     // T * statistic
};

RateStatistic rate_statistic(const RunTrace& trace, std::size_t T);

/// Constants the observer needs; built once per run.
struct MonitorSetup {
  Objectives objectives;
  Regularizer regularizer = Regularizer::zero(1);
  double alpha = 0.0;
  double lipschitz = 0.0;
  double radius = 0.0;                      // ball for G_h and G_g
  std::optional<GeometricConstants> geometry;  // empty for one agent or eta outside (0, 1)
};

/// Turns consecutive snapshots into IterationMetrics.
class Monitor {
 public:
  explicit Monitor(MonitorSetup setup);

  IterationMetrics initial(const AgentVectors& x0);

  /// x_prev are the iterates that produced q; mixing is the symmetric matrix
  /// used for D.
  IterationMetrics step(std::size_t k, const AgentVectors& x_prev, const AgentVectors& q, const AgentVectors& v,
                        const AgentVectors& x, const Matrix& mixing);

  std::optional<double> G_h() const noexcept { return G_h_; }
  double G_g() const noexcept { return G_g_; }

 private:
  bool inside(const Vector& p) const;

  MonitorSetup setup_;
  std::optional<double> G_h_;
  double G_g_ = 0.0;
  Vector x_bar_prev_;
  double q_sum_prev_ = 0.0;
  double rate_sum_ = 0.0;
};

}  // namespace dpg
