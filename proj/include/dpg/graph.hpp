#pragma once

// Time-varying undirected communication graphs: slot weight matrices A(t),
// schedules over slots, transition products Phi(t, s) = A(t)...A(s) and the
// per-iteration consensus weights built from them.

#include "dpg/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

namespace dpg {

/// Undirected edge between two distinct agents (0-based ids).
struct Edge {
  int a = 0;
  int b = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Tolerance on row/column sums for matrices this library generates.
inline constexpr double kGeneratedStochasticTol = 1e-12;
/// Tolerance on row/column sums for matrices read from user files.
inline constexpr double kUserStochasticTol = 1e-9;

/// Weight matrix of one communication slot.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(Matrix w);

  int size() const noexcept { return static_cast<int>(w_.rows()); }
  const Matrix& weights() const noexcept { return w_; }
  double operator()(int i, int j) const { return w_(i, j); }

  /// Off-diagonal pairs {i, j}, i < j, with positive weight.
  std::vector<Edge> edges() const;

  /// Smallest positive entry (the realized weight floor).
  double min_positive() const;

  bool is_symmetric(double tol) const;
  bool is_nonnegative() const;
  /// max over rows and columns of |sum - 1|.
  double stochastic_defect() const;
  /// Diagonal >= eta and every positive off-diagonal entry >= eta.
  bool satisfies_floor(double eta, double tol = 0.0) const;

 private:
  Matrix w_;
};

/// Metropolis-Hastings weights: a_ij = 1 / (1 + max(deg_i, deg_j)) on edges,
/// the diagonal absorbs the remainder of each row.
AdjacencyMatrix metropolis_weights(std::span<const Edge> edges, int m);

enum class ScheduleKind { static_graph, periodic_list, random_b_connected };

std::string to_string(ScheduleKind kind);

/// Immutable sequence of slot matrices A(0), A(1), ... . Copies share state,
/// so a schedule may be handed to several threads.
class GraphSchedule {
 public:
  /// Same matrix in every slot.
  static GraphSchedule constant(AdjacencyMatrix a, int B = 1);

  /// Slot t uses slots[t % slots.size()]; with cyclic = false the list is
  /// finite and reading past it throws ScheduleExhausted.
  static GraphSchedule periodic(std::vector<AdjacencyMatrix> slots, int B, bool cyclic = true,
                                double tolerance = kGeneratedStochasticTol);

  /// Seeded random schedule. Slots with t % B == 0 carry a random spanning
  /// tree, every other slot keeps each possible edge with probability
  /// edge_prob. All weights are Metropolis.
  static GraphSchedule random_b_connected(int m, int B, std::uint64_t seed, double edge_prob = 0.3);

  AdjacencyMatrix at(std::size_t t) const;

  int agents() const noexcept;
  int interval() const noexcept;  // B
  double eta() const noexcept;
  ScheduleKind kind() const noexcept;
  double tolerance() const noexcept;
  /// Number of slots for finite lists; 0 when the schedule never ends.
  std::size_t length() const noexcept;
  /// Number of distinct slot matrices in one period (1 for static, 0 for random).
  std::size_t period() const noexcept;

  /// Replace the weight floor with a declared value.
  GraphSchedule with_eta(double eta) const;

  /// Identity of the shared state; equal for copies of one schedule.
  const void* id() const noexcept { return impl_.get(); }

 private:
  struct Impl;
  explicit GraphSchedule(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

struct ValidationReport {
  std::size_t horizon = 0;
  int interval = 1;
  double eta = 0.0;
  std::vector<std::size_t> stochasticity_failures;  // slots failing symmetry/sums/sign
  std::vector<std::size_t> eta_failures;            // slots violating the floor
  std::vector<std::size_t> disconnected_windows;    // first slot of each bad window
  bool exhausted = false;                           // finite schedule ended early

  bool valid() const noexcept {
    return stochasticity_failures.empty() && eta_failures.empty() &&
           disconnected_windows.empty() && !exhausted;
  }

  std::string summary() const;
};

/// Checks slots [0, horizon): double stochasticity, the eta floor, and that
/// every window of B consecutive slots has a connected union graph.
ValidationReport validate_schedule(const GraphSchedule& schedule, std::size_t horizon);

/// Phi(t, s) = A(t) A(t-1) ... A(s).
Matrix transition_matrix(const GraphSchedule& schedule, std::size_t t, std::size_t s);

/// Slots consumed before iteration k: t(k) = k(k-1)/2.
constexpr std::size_t communication_offset(std::size_t k) { return k * (k - 1) / 2; }

/// Slots consumed by iterations 1..T: T(T+1)/2.
constexpr std::size_t cumulative_slots(std::size_t T) { return T * (T + 1) / 2; }

/// Weights of iteration k: Phi(t(k) + k - 1, t(k)), i.e. k gossip rounds.
Matrix consensus_weights(const GraphSchedule& schedule, std::size_t k);

/// consensus_weights with results memoized per iteration. Readers share a
/// lock; a miss computes outside the lock and inserts under an exclusive one.
class ConsensusWeightCache {
 public:
  explicit ConsensusWeightCache(GraphSchedule schedule) : schedule_(std::move(schedule)) {}

  Matrix operator()(std::size_t k) const;
  const GraphSchedule& schedule() const noexcept { return schedule_; }
  std::size_t cached() const;

 private:
  GraphSchedule schedule_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::size_t, Matrix> cache_;
};

struct GeometricConstants {
  double Gamma = 0.0;
  double gamma = 0.0;
  long B0 = 0;
  double log_Gamma = 0.0;
  double log_gamma = 0.0;  // kept separately: gamma rounds to 1 when eta^B0 is tiny

  /// Gamma * gamma^k, evaluated in log space.
  double decay(std::size_t k) const;
};

/// B0 = (m-1)B, gamma = (1 - eta^B0)^(1/B0), Gamma = 2(1 + eta^-B0)/(1 - eta^B0).
GeometricConstants geometric_constants(int m, int B, double eta);

/// Structured text: one matrix per block, rows whitespace-separated,
/// blocks separated by blank lines. '#' starts a comment.
std::vector<AdjacencyMatrix> read_matrices(std::istream& in);
void write_matrices(std::ostream& out, std::span<const AdjacencyMatrix> matrices);

/// Fixed topologies used by configs and tests.
std::vector<Edge> complete_edges(int m);
std::vector<Edge> path_edges(int m);
std::vector<Edge> ring_edges(int m);
std::vector<Edge> star_edges(int m);
/// Two slots whose union is the path 0-1-...-(m-1): even links, then odd links.
std::vector<AdjacencyMatrix> alternating_path_slots(int m);

}  // namespace dpg
