#include "dpg/simulator.hpp"

#include "dpg/io.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dpg {

void CommLog::append(const CommLog& next) {
  if (slots == 0) first_slot = next.first_slot;
  slots += next.slots;
  messages_per_slot.insert(messages_per_slot.end(), next.messages_per_slot.begin(), next.messages_per_slot.end());
  messages += next.messages;
  self_updates += next.self_updates;
  if (sent_per_agent.size() < next.sent_per_agent.size()) {
    sent_per_agent.resize(next.sent_per_agent.size(), 0);
    payload_per_agent.resize(next.payload_per_agent.size(), 0);
  }
  for (std::size_t i = 0; i < next.sent_per_agent.size(); ++i) {
    sent_per_agent[i] += next.sent_per_agent[i];
    payload_per_agent[i] += next.payload_per_agent[i];
  }
}

namespace {

CommLog empty_log(std::size_t start_slot, int agents) {
  CommLog log;
  log.first_slot = start_slot;
  log.sent_per_agent.assign(static_cast<std::size_t>(agents), 0);
  log.payload_per_agent.assign(static_cast<std::size_t>(agents), 0);
  return log;
}

}  // namespace

GossipResult gossip_rounds(const AgentVectors& q, const GraphSchedule& schedule, std::size_t start_slot,
                           std::size_t rounds) {
  if (rounds < 1) throw std::invalid_argument("gossip_rounds: rounds must be >= 1");
  const int m = schedule.agents();
  if (static_cast<int>(q.size()) != m) throw std::invalid_argument("gossip_rounds: agent count mismatch");
  const auto dim = static_cast<std::size_t>(q.front().size());

  GossipResult result{q, empty_log(start_slot, m)};
  AgentVectors& y = result.values;
  std::vector<std::vector<RoundMessage>> inbox(static_cast<std::size_t>(m));

  for (std::size_t slot = start_slot; slot < start_slot + rounds; ++slot) {
    const AdjacencyMatrix A = schedule.at(slot);
    for (auto& box : inbox) box.clear();

    // Fan-out from the pre-round state.
    std::size_t sent = 0;
    for (int from = 0; from < m; ++from)
      for (int to = 0; to < m; ++to)
        if (to != from && A(to, from) > 0.0) {
          inbox[to].push_back({from, to, slot, y[from]});
          ++result.log.sent_per_agent[from];
          result.log.payload_per_agent[from] += dim;
          ++sent;
        }

    // Barrier: every agent mixes its own value with what it received.
    AgentVectors next(y.size());
    for (int i = 0; i < m; ++i) {
      next[i] = A(i, i) * y[i];
      for (const RoundMessage& msg : inbox[i]) next[i] += A(i, msg.from) * msg.payload;
    }
    y = std::move(next);

    result.log.messages_per_slot.push_back(sent);
    result.log.messages += sent;
    result.log.self_updates += static_cast<std::size_t>(m);
    ++result.log.slots;
  }
  return result;
}

CommLog account_rounds(const GraphSchedule& schedule, std::size_t start_slot, std::size_t rounds, int dim) {
  const int m = schedule.agents();
  CommLog log = empty_log(start_slot, m);
  for (std::size_t slot = start_slot; slot < start_slot + rounds; ++slot) {
    const AdjacencyMatrix A = schedule.at(slot);
    std::size_t sent = 0;
    for (int from = 0; from < m; ++from)
      for (int to = 0; to < m; ++to)
        if (to != from && A(to, from) > 0.0) {
          ++log.sent_per_agent[from];
          log.payload_per_agent[from] += static_cast<std::size_t>(dim);
          ++sent;
        }
    log.messages_per_slot.push_back(sent);
    log.messages += sent;
    log.self_updates += static_cast<std::size_t>(m);
    ++log.slots;
  }
  return log;
}

std::string ReplayReport::summary() const {
  std::ostringstream out;
  out << "replay: " << (passed ? "pass" : "FAIL") << ", iterations=" << iterations_checked
      << ", max deviation=" << format_double(max_deviation);
  if (!failed_iterations.empty()) out << ", first failing iteration=" << failed_iterations.front();
  return out.str();
}

ReplayReport replay_check(const RunTrace& trace, const GraphSchedule& schedule, double tolerance) {
  ReplayReport report;
  for (std::size_t k = 1; k < trace.rows.size(); ++k) {
    const auto& snap = trace.rows[k].snapshot;
    if (!snap || snap->q.empty() || snap->v.empty())
      throw std::invalid_argument("replay_check: iteration " + std::to_string(k) + " has no q/v snapshot");
    const GossipResult gossip = gossip_rounds(snap->q, schedule, communication_offset(k), k);
    double deviation = 0.0;
    for (std::size_t i = 0; i < gossip.values.size(); ++i)
      deviation = std::max(deviation, (gossip.values[i] - snap->v[i]).cwiseAbs().maxCoeff());
    report.max_deviation = std::max(report.max_deviation, deviation);
    if (!(deviation < tolerance)) {
      report.passed = false;
      report.failed_iterations.push_back(k);
    }
    ++report.iterations_checked;
  }
  return report;
}

}  // namespace dpg
