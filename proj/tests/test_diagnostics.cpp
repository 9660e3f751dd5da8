#include "dpg/diagnostics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dpg;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

Objectives identity_quadratics(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Objectives gs;
  for (int i = 0; i < m; ++i) {
    Vector c(n);
    for (int j = 0; j < n; ++j) c[j] = normal(rng);
    gs.push_back(std::make_shared<Quadratic>(Matrix::Identity(n, n), c));
  }
  return gs;
}

AgentVectors random_agents(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  AgentVectors xs(m, Vector(n));
  for (Vector& x : xs)
    for (int j = 0; j < n; ++j) x[j] = normal(rng);
  return xs;
}

}  // namespace

TEST(ErrorE, ZeroAtConsensus) {
  std::mt19937_64 rng(1);
  const Objectives gs = identity_quadratics(4, 3, rng);
  const AgentVectors xs(4, Vector::Constant(3, 0.7));
  EXPECT_EQ(error_sequence_e(xs, gs).norm(), 0.0);
}

TEST(ErrorE, SymmetricDeviationsCancelForLinearGradients) {
  std::mt19937_64 rng(2);
  const Objectives gs{std::make_shared<Quadratic>(Matrix::Identity(2, 2), Vector::Zero(2)),
                      std::make_shared<Quadratic>(Matrix::Identity(2, 2), Vector::Zero(2))};
  const Vector xbar = Vector::Constant(2, 1.0), d = Vector::Constant(2, 0.3);
  EXPECT_LT(error_sequence_e({xbar + d, xbar - d}, gs).norm(), 1e-15);
}

TEST(ErrorE, LipschitzBoundOnRandomStates) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 200; ++t) {
    Objectives gs;
    for (int i = 0; i < 5; ++i) {
      Matrix a = Matrix::NullaryExpr(3, 3, [&]() { return normal(rng); });
      gs.push_back(std::make_shared<Quadratic>(a * a.transpose(), Vector::Zero(3)));
    }
    const AgentVectors xs = random_agents(5, 3, rng);
    const double bound = global_lipschitz(gs) / 5.0 * spread(xs, mean(xs));
    EXPECT_LE(error_sequence_e(xs, gs).norm(), bound + 1e-10);
  }
}

TEST(ErrorEps, Examples) {
  // ||x - z|| = 0.1, ||z - v|| = 0.05, G_h = 2, alpha = 0.5.
  const auto eps = error_sequence_eps(scalar(0.1), scalar(0.05), scalar(0.0), 0.5, 2.0);
  ASSERT_TRUE(eps.has_value());
  EXPECT_NEAR(*eps, 0.1 * (2.0 + 0.05 / 0.5) + 0.01 / (2 * 0.5), 1e-15);
  EXPECT_NEAR(*eps, 0.22, 1e-15);
  EXPECT_EQ(*error_sequence_eps(scalar(1.0), scalar(3.0), scalar(1.0), 0.5, 2.0), 0.0);
  EXPECT_FALSE(error_sequence_eps(scalar(1.0), scalar(3.0), scalar(1.0), 0.5, std::nullopt).has_value());
}

TEST(Disagreement, TwoAgents) {
  Matrix a = Matrix::Constant(2, 2, 0.5);
  const AgentVectors xs{scalar(1.0), scalar(0.0)};
  EXPECT_DOUBLE_EQ(disagreement(xs, a), 0.5);
  EXPECT_DOUBLE_EQ(disagreement_pairwise(xs, a), 0.5);
  EXPECT_EQ(disagreement({scalar(2.0), scalar(2.0)}, a), 0.0);
}

TEST(Disagreement, FormsAgreeAndScaleQuadratically) {
  std::mt19937_64 rng(4);
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {0, 3}, {1, 4}};
  const Matrix a = metropolis_weights(edges, 5).weights();
  for (int t = 0; t < 100; ++t) {
    AgentVectors xs = random_agents(5, 3, rng);
    const double d = disagreement(xs, a);
    EXPECT_NEAR(d, disagreement_pairwise(xs, a), 1e-10);
    for (Vector& x : xs) x *= 3.0;
    EXPECT_NEAR(disagreement(xs, a), 9.0 * d, 1e-10 * (1 + d));
  }
}

TEST(Stationarity, Examples) {
  const StationarityBound b = stationarity_bound(0.01, 0.0, 0.002, 0.1, 1.0);
  EXPECT_NEAR(b.value, 0.112, 1e-15);
  EXPECT_FALSE(b.partial);
  EXPECT_EQ(stationarity_bound(0.0, 0.0, 0.0, 0.1, 1.0).value, 0.0);
  const StationarityBound p = stationarity_bound(0.01, std::nullopt, 0.002, 0.1, 1.0);
  EXPECT_TRUE(p.partial);
  EXPECT_NEAR(p.value, 0.112, 1e-15);
  EXPECT_NEAR(stationarity_bound(0.0, 0.2, 0.0, 0.1, 1.0).value, 2.0, 1e-15);
}

TEST(Rate, SyntheticHarmonicSteps) {
  // ||x_bar_k - x_bar_{k-1}|| = c / k; the sum of squares tends to c^2 pi^2 / 6.
  const double c = 0.5;
  RunTrace trace;
  trace.rows.resize(1);
  double sum = 0.0;
  for (std::size_t k = 1; k <= 2000; ++k) {
    TraceRow row;
    row.metrics.k = k;
    row.metrics.dx_norm = c / k;
    sum += (c / k) * (c / k);
    row.metrics.rate_sum = sum;
    trace.rows.push_back(row);
  }
  const RateStatistic r = rate_statistic(trace, 2000);
  EXPECT_NEAR(r.scaled, c * c * M_PI * M_PI / 6.0, c * c / 1999.0);
  EXPECT_NEAR(r.statistic, r.scaled / 2000.0, 1e-18);
  EXPECT_THROW(rate_statistic(trace, 0), std::invalid_argument);
  EXPECT_THROW(rate_statistic(trace, 2001), std::invalid_argument);
}

TEST(Rate, ConstantTrajectory) {
  RunTrace trace;
  trace.rows.resize(6);
  EXPECT_EQ(rate_statistic(trace, 5).statistic, 0.0);
}

TEST(Monitor, RowZeroAndCertificatesOnRandomStep) {
  std::mt19937_64 rng(9);
  const int m = 4, n = 3;
  MonitorSetup setup;
  setup.objectives = identity_quadratics(m, n, rng);
  setup.regularizer = Regularizer::l1(n, 0.2);
  setup.alpha = 0.5;
  setup.lipschitz = 1.0;
  setup.radius = 100.0;
  setup.geometry = geometric_constants(m, 1, 0.25);
  Monitor monitor(setup);

  const AgentVectors x0 = random_agents(m, n, rng);
  const IterationMetrics r0 = monitor.initial(x0);
  EXPECT_EQ(r0.k, 0u);
  EXPECT_EQ(r0.dx_norm, 0.0);
  EXPECT_TRUE(r0.x_bar.isApprox(mean(x0)));

  // One step of the iteration with a hand-made doubly stochastic matrix.
  const Matrix w = metropolis_weights(complete_edges(m), m).weights();
  AgentVectors q(m), v(m), x(m);
  for (int i = 0; i < m; ++i) q[i] = x0[i] - setup.alpha * setup.objectives[i]->gradient(x0[i]);
  for (int i = 0; i < m; ++i) {
    v[i] = Vector::Zero(n);
    for (int j = 0; j < m; ++j) v[i] += w(i, j) * q[j];
    x[i] = setup.regularizer.prox(v[i], setup.alpha);
  }
  const IterationMetrics r1 = monitor.step(1, x0, q, v, x, w);
  EXPECT_LT(r1.mean_tracking_error, 1e-12);
  EXPECT_LE(r1.e_norm, r1.e_bound + 1e-10);
  ASSERT_TRUE(r1.eps.has_value());
  ASSERT_TRUE(r1.eps_bound.has_value());
  EXPECT_LE(*r1.eps, *r1.eps_bound + 1e-10);
  ASSERT_TRUE(r1.inexact_excess.has_value());
  EXPECT_LE(*r1.inexact_excess, 1e-9);
  EXPECT_LE(r1.max_consensus_gap, r1.geo_bound);
  EXPECT_NEAR(r1.dx_norm, (mean(x) - mean(x0)).norm(), 1e-15);
  EXPECT_NEAR(r1.D, disagreement_pairwise(x, w), 1e-12);
  EXPECT_NEAR(r1.rate_sum, r1.dx_norm * r1.dx_norm, 1e-18);
}

TEST(Monitor, BallViolationDropsEps) {
  std::mt19937_64 rng(10);
  MonitorSetup setup;
  setup.objectives = identity_quadratics(2, 2, rng);
  setup.regularizer = Regularizer::elastic_net(2, 0.1, 0.1);
  setup.alpha = 0.5;
  setup.lipschitz = 1.0;
  setup.radius = 0.01;
  Monitor monitor(setup);
  const AgentVectors x0{Vector::Constant(2, 5.0), Vector::Constant(2, -5.0)};
  monitor.initial(x0);
  const Matrix w = Matrix::Constant(2, 2, 0.5);
  AgentVectors q(2), v(2), x(2);
  for (int i = 0; i < 2; ++i) q[i] = x0[i];
  for (int i = 0; i < 2; ++i) {
    v[i] = 0.5 * (q[0] + q[1]);
    x[i] = setup.regularizer.prox(v[i], 0.5);
  }
  const IterationMetrics r = monitor.step(1, x0, q, v, x, w);
  EXPECT_FALSE(r.in_ball);
  EXPECT_FALSE(r.eps.has_value());
  EXPECT_TRUE(r.residual_partial);
}
