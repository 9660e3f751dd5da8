#include "dpg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpg {

Vector mean(const AgentVectors& vectors) {
  if (vectors.empty()) throw std::invalid_argument("mean: no vectors");
  Vector total = Vector::Zero(vectors.front().size());
  for (const Vector& v : vectors) total += v;
  return total / static_cast<double>(vectors.size());
}

double spread(const AgentVectors& vectors, const Vector& center) {
  double total = 0.0;
  for (const Vector& v : vectors) total += (v - center).norm();
  return total;
}

Vector error_sequence_e(const AgentVectors& x_all, const Objectives& objectives) {
  if (x_all.size() != objectives.size()) throw std::invalid_argument("error_sequence_e: agent count mismatch");
  const Vector x_bar = mean(x_all);
  Vector e = Vector::Zero(x_bar.size());
  for (std::size_t i = 0; i < x_all.size(); ++i)
    e += objectives[i]->gradient(x_all[i]) - objectives[i]->gradient(x_bar);
  return e / static_cast<double>(x_all.size());
}

std::optional<double> error_sequence_eps(const Vector& x_bar, const Vector& v_bar, const Vector& z, double alpha,
                                         std::optional<double> G_h) {
  if (!G_h) return std::nullopt;
  const double gap = (x_bar - z).norm();
  return gap * (*G_h + (z - v_bar).norm() / alpha) + gap * gap / (2.0 * alpha);
}

double disagreement(const AgentVectors& x_all, const Matrix& A) {
  const auto m = static_cast<Eigen::Index>(x_all.size());
  if (A.rows() != m || A.cols() != m) throw std::invalid_argument("disagreement: matrix size mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    Vector local = Vector::Zero(x_all[i].size());
    for (Eigen::Index j = 0; j < m; ++j) local += A(i, j) * (x_all[i] - x_all[j]);
    total += x_all[i].dot(local);
  }
  return total;
}

double disagreement_pairwise(const AgentVectors& x_all, const Matrix& A) {
  const auto m = static_cast<Eigen::Index>(x_all.size());
  if (A.rows() != m || A.cols() != m) throw std::invalid_argument("disagreement: matrix size mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) total += A(i, j) * (x_all[i] - x_all[j]).squaredNorm();
  return 0.5 * total;
}

StationarityBound stationarity_bound(double dx_norm, std::optional<double> eps, double e_norm, double alpha,
                                     double L) {
  if (!(alpha > 0.0)) throw std::invalid_argument("stationarity_bound: step size must be > 0");
  StationarityBound b;
  b.value = (1.0 / alpha + L) * dx_norm + e_norm;
  if (eps)
    b.value += std::sqrt(2.0 * std::max(0.0, *eps) / alpha);
  else
    b.partial = true;
  return b;
}

RateStatistic rate_statistic(const RunTrace& trace, std::size_t T) {
  if (T == 0) throw std::invalid_argument("rate_statistic: T must be >= 1");
  if (T > trace.iterations()) throw std::invalid_argument("rate_statistic: T exceeds the trace length");
  double total = 0.0;
  for (std::size_t k = 1; k <= T; ++k) {
    const double d = trace.rows[k].metrics.dx_norm;
    total += d * d;
  }
  return {total / static_cast<double>(T), total};
}

// ---------------------------------------------------------------------------

Monitor::Monitor(MonitorSetup setup) : setup_(std::move(setup)) {
  if (setup_.objectives.empty()) throw std::invalid_argument("Monitor: no objectives");
  G_h_ = setup_.regularizer.subgradient_bound(setup_.radius);
  for (const auto& g : setup_.objectives) G_g_ = std::max(G_g_, g->gradient_bound(setup_.radius));
}

bool Monitor::inside(const Vector& p) const { return p.norm() <= setup_.radius; }

IterationMetrics Monitor::initial(const AgentVectors& x0) {
  IterationMetrics m;
  m.k = 0;
  m.x_bar = mean(x0);
  m.v_bar = m.x_bar;
  m.z = m.x_bar;
  m.f_avg = average_value(setup_.objectives, m.x_bar) + setup_.regularizer.value(m.x_bar);
  m.eps = G_h_ ? std::optional<double>(0.0) : std::nullopt;
  for (const Vector& x : x0) m.max_consensus_gap = std::max(m.max_consensus_gap, (x - m.x_bar).norm());
  m.in_ball = std::all_of(x0.begin(), x0.end(), [&](const Vector& x) { return inside(x); });
  x_bar_prev_ = m.x_bar;
  q_sum_prev_ = 0.0;
  rate_sum_ = 0.0;
  return m;
}

IterationMetrics Monitor::step(std::size_t k, const AgentVectors& x_prev, const AgentVectors& q, const AgentVectors& v,
                               const AgentVectors& x, const Matrix& mixing) {
  const double alpha = setup_.alpha;
  const double L = setup_.lipschitz;
  const auto agents = static_cast<double>(x.size());
  const Regularizer& h = setup_.regularizer;

  IterationMetrics m;
  m.k = k;

  const Vector x_bar_prev = mean(x_prev);
  const Vector e = error_sequence_e(x_prev, setup_.objectives);
  m.e_norm = e.norm();
  m.e_bound = L / agents * spread(x_prev, x_bar_prev);

  m.v_bar = mean(v);
  const Vector tracked = x_bar_prev - alpha * (average_gradient(setup_.objectives, x_bar_prev) + e);
  m.mean_tracking_error = (m.v_bar - tracked).cwiseAbs().maxCoeff();

  m.z = h.prox(m.v_bar, alpha);
  m.x_bar = mean(x);

  m.in_ball = inside(m.x_bar) && inside(m.z) &&
              std::all_of(x.begin(), x.end(), [&](const Vector& p) { return inside(p); }) &&
              std::all_of(x_prev.begin(), x_prev.end(), [&](const Vector& p) { return inside(p); });
  const std::optional<double> G_h = (h.bound_needs_radius() && !m.in_ball) ? std::nullopt : G_h_;

  m.eps = error_sequence_eps(m.x_bar, m.v_bar, m.z, alpha, G_h);
  const double v_spread = spread(v, m.v_bar);
  if (G_h) {
    const double avg = v_spread / agents;
    m.eps_bound = 2.0 * *G_h / agents * v_spread + avg * avg / (2.0 * alpha);
  }
  if (m.eps) m.inexact_excess = check_inexact_prox(h, m.x_bar, tracked, alpha, *m.eps).excess;

  m.dx_norm = (m.x_bar - x_bar_prev).norm();
  rate_sum_ += m.dx_norm * m.dx_norm;
  m.rate_sum = rate_sum_;

  const StationarityBound bound = stationarity_bound(m.dx_norm, m.eps, m.e_norm, alpha, L);
  m.residual_bound = bound.value;
  m.residual_partial = bound.partial;

  m.D = disagreement(x, mixing);
  for (const Vector& p : x) m.max_consensus_gap = std::max(m.max_consensus_gap, (p - m.x_bar).norm());
  for (const Vector& p : v) m.v_spread_max = std::max(m.v_spread_max, (p - m.v_bar).norm());

  for (const Vector& p : q) m.q_sum += p.norm();
  if (setup_.geometry) {
    const double decay = setup_.geometry->decay(k);
    m.v_spread_bound = decay * m.q_sum;
    m.geo_bound = 2.0 * decay * m.q_sum;
  }
  if (k >= 2 && G_h && m.in_ball) m.q_growth_bound = q_sum_prev_ + alpha * agents * (G_g_ + *G_h);
  q_sum_prev_ = m.q_sum;

  m.f_avg = average_value(setup_.objectives, m.x_bar) + h.value(m.x_bar);
  x_bar_prev_ = m.x_bar;
  return m;
}

}  // namespace dpg
