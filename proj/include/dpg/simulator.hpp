#pragma once

// Message-level execution of the consensus stage: one synchronous round per
// communication slot, each agent mixing what its neighbours sent.

#include "dpg/graph.hpp"
#include "dpg/trace.hpp"
#include "dpg/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dpg {

struct RoundMessage {
  int from = 0;
  int to = 0;
  std::size_t slot = 0;
  Vector payload;
};

/// Message counts for a contiguous range of slots. Self-weighting is local
/// work and is tallied separately from messages.
struct CommLog {
  std::size_t first_slot = 0;
  std::size_t slots = 0;
  std::vector<std::size_t> messages_per_slot;
  std::size_t messages = 0;
  std::size_t self_updates = 0;
  std::vector<std::size_t> sent_per_agent;
  std::vector<std::size_t> payload_per_agent;  // doubles sent: dim * messages

  void append(const CommLog& next);
};

struct GossipResult {
  AgentVectors values;
  CommLog log;
};

/// Applies y <- A(slot) y for slot = start_slot, ..., start_slot + rounds - 1,
/// exchanging one message per directed positive off-diagonal weight.
GossipResult gossip_rounds(const AgentVectors& q, const GraphSchedule& schedule, std::size_t start_slot,
                           std::size_t rounds);

/// The CommLog gossip_rounds would produce, without moving payloads.
CommLog account_rounds(const GraphSchedule& schedule, std::size_t start_slot, std::size_t rounds, int dim);

struct ReplayReport {
  bool passed = true;
  double max_deviation = 0.0;
  std::size_t iterations_checked = 0;
  std::vector<std::size_t> failed_iterations;
  std::string summary() const;
};

inline constexpr double kReplayTolerance = 1e-8;

/// Re-runs gossip_rounds on every recorded q and compares with recorded v.
/// Throws std::invalid_argument when an iteration lacks a snapshot.
ReplayReport replay_check(const RunTrace& trace, const GraphSchedule& schedule, double tolerance = kReplayTolerance);

}  // namespace dpg
