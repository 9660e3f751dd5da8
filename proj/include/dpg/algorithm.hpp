#pragma once

// Distributed proximal gradient iteration. At iteration k every agent
//   q_i = x_i - alpha grad g_i(x_i)         local gradient step
//   v_i = sum_j lambda_ij q_j               k gossip rounds
//   x_i = prox_{alpha,h}(v_i)               local proximal step
// with lambda = Phi(t(k) + k - 1, t(k)).

#include "dpg/diagnostics.hpp"
#include "dpg/graph.hpp"
#include "dpg/objective.hpp"
#include "dpg/prox.hpp"
#include "dpg/trace.hpp"
#include "dpg/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dpg {

struct AgentState {
  Vector x;
  Vector q;
  Vector v;
};

struct Problem {
  Objectives objectives;
  Regularizer regularizer = Regularizer::zero(1);
  GraphSchedule schedule = GraphSchedule::constant(AdjacencyMatrix(Matrix::Identity(1, 1)));

  int agents() const noexcept { return static_cast<int>(objectives.size()); }
  int dim() const noexcept { return regularizer.dim(); }
};

enum class ConsensusMode { matrix, gossip };

enum class InitKind { zeros, gaussian };

struct RunOptions {
  double alpha = 0.0;
  std::size_t max_iter = 0;
  /// Stop once the stationarity bound falls below tol; 0 disables.
  double tol = 0.0;
  /// Starting points; empty means zeros.
  AgentVectors initial;
  /// Keep x/q/v for rows with k % snapshot_every == 0; 0 keeps none.
  std::size_t snapshot_every = 0;
  ConsensusMode consensus = ConsensusMode::matrix;
  /// Ball radius for G_h and G_g; 0 picks 10 * max(1, max_i ||x_i,0||).
  double radius = 0.0;
};

/// Schedule is invalid over the slots a run would consume.
class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// q = x - alpha grad g(x). Throws NumericalFault on a non-finite gradient.
Vector gradient_step(const Vector& x, const LocalObjective& g, double alpha, int agent = 0, long iteration = 0);

/// v_i = sum_j weights(i, j) q_j, summed in increasing j.
AgentVectors consensus_step(const AgentVectors& q, const Matrix& weights);

/// x = prox_{alpha,h}(v).
Vector prox_step(const Vector& v, const Regularizer& h, double alpha);

/// One full iteration k >= 1; adds the k consumed slots to slots_used.
std::vector<AgentState> iterate(const std::vector<AgentState>& states, const Objectives& objectives,
                                const ConsensusWeightCache& weights, const Regularizer& h, double alpha,
                                std::size_t k, std::size_t& slots_used);

/// alpha = safety / L.
double auto_step(double lipschitz, double safety = 0.9);

/// Checks 0 < alpha < 1/L; throws StepSizeError.
void check_step(double alpha, double lipschitz);

AgentVectors initial_points(int agents, int dim, InitKind kind, double scale, std::uint64_t seed);

/// Symmetric doubly stochastic matrix used for the disagreement metric at
/// iteration k: the mean of the B slot matrices ending at the last slot of
/// iteration k (or the first B slots early on).
Matrix disagreement_matrix(const GraphSchedule& schedule, std::size_t k);

/// Validates the step size and the schedule over T(T+1)/2 slots, then runs
/// max_iter iterations recording diagnostics for every row.
RunTrace run(const Problem& problem, const RunOptions& options);

}  // namespace dpg
