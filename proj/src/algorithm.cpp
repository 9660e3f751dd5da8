#include "dpg/algorithm.hpp"

#include "dpg/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dpg {

namespace {

bool finite(const Vector& v) { return v.allFinite(); }

}  // namespace

Vector gradient_step(const Vector& x, const LocalObjective& g, double alpha, int agent, long iteration) {
  if (!(alpha > 0.0)) throw std::invalid_argument("gradient_step: step size must be > 0");
  const Vector grad = g.gradient(x);
  if (!finite(grad)) throw NumericalFault(agent, iteration, "non-finite gradient");
  return x - alpha * grad;
}

AgentVectors consensus_step(const AgentVectors& q, const Matrix& weights) {
  const auto m = static_cast<Eigen::Index>(q.size());
  if (weights.rows() != m || weights.cols() != m) throw std::invalid_argument("consensus_step: weight matrix size mismatch");
  for (const Vector& qj : q)
    if (qj.size() != q.front().size()) throw std::invalid_argument("consensus_step: dimension mismatch");
  AgentVectors v(q.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    v[i] = Vector::Zero(q.front().size());
    for (Eigen::Index j = 0; j < m; ++j) v[i] += weights(i, j) * q[j];
  }
  return v;
}

Vector prox_step(const Vector& v, const Regularizer& h, double alpha) { return h.prox(v, alpha); }

std::vector<AgentState> iterate(const std::vector<AgentState>& states, const Objectives& objectives,
                                const ConsensusWeightCache& weights, const Regularizer& h, double alpha,
                                std::size_t k, std::size_t& slots_used) {
  if (k < 1) throw std::invalid_argument("iterate: iteration index must be >= 1");
  if (states.size() != objectives.size()) throw std::invalid_argument("iterate: agent count mismatch");
  const int m = static_cast<int>(states.size());

  AgentVectors q(states.size());
  for (int i = 0; i < m; ++i) q[i] = gradient_step(states[i].x, *objectives[i], alpha, i, static_cast<long>(k));

  AgentVectors v = consensus_step(q, weights(k));
  slots_used += k;

  std::vector<AgentState> next(states.size());
  for (int i = 0; i < m; ++i) {
    next[i].x = prox_step(v[i], h, alpha);
    if (!finite(v[i]) || !finite(next[i].x)) throw NumericalFault(i, static_cast<long>(k), "non-finite iterate");
    next[i].q = std::move(q[i]);
    next[i].v = std::move(v[i]);
  }
  return next;
}

double auto_step(double lipschitz, double safety) {
  if (!(lipschitz > 0.0)) throw StepSizeError("auto step size needs L > 0");
  if (!(safety > 0.0 && safety < 1.0)) throw StepSizeError("step safety factor must lie in (0, 1)");
  return safety / lipschitz;
}

void check_step(double alpha, double lipschitz) {
  if (!(alpha > 0.0)) throw StepSizeError("step size must be > 0");
  if (lipschitz > 0.0 && !(alpha * lipschitz < 1.0))
    throw StepSizeError("step size " + std::to_string(alpha) + " violates alpha < 1/L = " +
                        std::to_string(1.0 / lipschitz));
}

AgentVectors initial_points(int agents, int dim, InitKind kind, double scale, std::uint64_t seed) {
  AgentVectors x(static_cast<std::size_t>(agents), Vector::Zero(dim));
  if (kind == InitKind::gaussian) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    for (Vector& xi : x)
      for (Eigen::Index j = 0; j < dim; ++j) xi[j] = normal(rng);
  }
  return x;
}

Matrix disagreement_matrix(const GraphSchedule& schedule, std::size_t k) {
  const auto B = static_cast<std::size_t>(schedule.interval());
  const std::size_t end = communication_offset(std::max<std::size_t>(k, 1)) + std::max<std::size_t>(k, 1);
  const std::size_t start = end >= B ? end - B : 0;
  Matrix total = Matrix::Zero(schedule.agents(), schedule.agents());
  for (std::size_t t = start; t < start + B; ++t) total += schedule.at(t).weights();
  return total / static_cast<double>(B);
}

RunTrace run(const Problem& problem, const RunOptions& options) {
  const int m = problem.agents();
  const int n = problem.dim();
  if (m < 1) throw std::invalid_argument("run: no agents");
  if (problem.schedule.agents() != m)
    throw std::invalid_argument("run: schedule has " + std::to_string(problem.schedule.agents()) + " agents, problem has " +
                                std::to_string(m));
  for (const auto& g : problem.objectives)
    if (g->dim() != n) throw std::invalid_argument("run: objective dimension differs from the regularizer's");

  const double L = global_lipschitz(problem.objectives);
  check_step(options.alpha, L);

  const std::size_t T = options.max_iter;
  const std::size_t horizon =
      std::max(cumulative_slots(T), static_cast<std::size_t>(problem.schedule.interval()));
  const ValidationReport report = validate_schedule(problem.schedule, horizon);
  if (!report.valid()) throw ScheduleError("schedule invalid over " + std::to_string(horizon) + " slots\n" + report.summary());

  AgentVectors x = options.initial.empty() ? AgentVectors(static_cast<std::size_t>(m), Vector::Zero(n)) : options.initial;
  if (static_cast<int>(x.size()) != m) throw std::invalid_argument("run: wrong number of initial points");
  for (const Vector& xi : x)
    if (xi.size() != n) throw std::invalid_argument("run: initial point dimension mismatch");

  double radius = options.radius;
  if (radius <= 0.0) {
    double largest = 1.0;
    for (const Vector& xi : x) largest = std::max(largest, xi.norm());
    radius = 10.0 * largest;
  }

  MonitorSetup setup;
  setup.objectives = problem.objectives;
  setup.regularizer = problem.regularizer;
  setup.alpha = options.alpha;
  setup.lipschitz = L;
  setup.radius = radius;
  const double eta = problem.schedule.eta();
  if (m >= 2 && eta > 0.0 && eta < 1.0) setup.geometry = geometric_constants(m, problem.schedule.interval(), eta);
  Monitor monitor(setup);

  RunTrace trace;
  trace.agents = m;
  trace.dim = n;
  trace.alpha = options.alpha;
  trace.lipschitz = L;
  trace.radius = radius;
  trace.G_h = monitor.G_h();
  trace.G_g = monitor.G_g();
  trace.rows.reserve(T + 1);

  const bool keep = options.snapshot_every > 0;
  {
    TraceRow row;
    row.metrics = monitor.initial(x);
    row.metrics.D = disagreement(x, disagreement_matrix(problem.schedule, 1));
    if (keep) row.snapshot = Snapshot{x, {}, {}};
    trace.rows.push_back(std::move(row));
  }

  ConsensusWeightCache weights(problem.schedule);
  std::vector<AgentState> states(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) states[i].x = x[i];

  std::size_t slots_used = 0;
  std::size_t messages_total = 0;
  for (std::size_t k = 1; k <= T; ++k) {
    AgentVectors x_prev(states.size());
    for (int i = 0; i < m; ++i) x_prev[i] = states[i].x;

    CommLog log;
    if (options.consensus == ConsensusMode::matrix) {
      states = iterate(states, problem.objectives, weights, problem.regularizer, options.alpha, k, slots_used);
      log = account_rounds(problem.schedule, communication_offset(k), k, n);
    } else {
      AgentVectors q(states.size());
      for (int i = 0; i < m; ++i)
        q[i] = gradient_step(states[i].x, *problem.objectives[i], options.alpha, i, static_cast<long>(k));
      GossipResult gossip = gossip_rounds(q, problem.schedule, communication_offset(k), k);
      slots_used += k;
      for (int i = 0; i < m; ++i) {
        states[i].q = std::move(q[i]);
        states[i].v = std::move(gossip.values[i]);
        states[i].x = prox_step(states[i].v, problem.regularizer, options.alpha);
        if (!finite(states[i].v) || !finite(states[i].x))
          throw NumericalFault(i, static_cast<long>(k), "non-finite iterate");
      }
      log = std::move(gossip.log);
    }

    AgentVectors q(states.size()), v(states.size());
    for (int i = 0; i < m; ++i) {
      q[i] = states[i].q;
      v[i] = states[i].v;
      x[i] = states[i].x;
    }

    TraceRow row;
    row.metrics = monitor.step(k, x_prev, q, v, x, disagreement_matrix(problem.schedule, k));
    messages_total += log.messages;
    row.metrics.comm_cumulative = slots_used;
    row.metrics.slots = log.slots;
    row.metrics.messages = log.messages;
    row.metrics.messages_cumulative = messages_total;
    if (keep && k % options.snapshot_every == 0) row.snapshot = Snapshot{x, std::move(q), std::move(v)};
    trace.rows.push_back(std::move(row));

    const IterationMetrics& last = trace.rows.back().metrics;
    if (options.tol > 0.0 && !last.residual_partial && last.residual_bound < options.tol) {
      trace.stopped_early = true;
      break;
    }
  }
  return trace;
}

}  // namespace dpg
