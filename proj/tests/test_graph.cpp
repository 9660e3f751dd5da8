#include "dpg/graph.hpp"
#include "dpg/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace dpg;

namespace {

// Metropolis rule written out entry by entry from degrees, for comparison.
Matrix metropolis_by_hand(const std::vector<Edge>& edges, int m) {
  std::vector<int> degree(m, 0);
  for (const Edge& e : edges) {
    ++degree[e.a];
    ++degree[e.b];
  }
  Matrix w = Matrix::Zero(m, m);
  for (const Edge& e : edges) {
    const double a = 1.0 / (1.0 + std::max(degree[e.a], degree[e.b]));
    w(e.a, e.b) = a;
    w(e.b, e.a) = a;
  }
  for (int i = 0; i < m; ++i) {
    double off = 0.0;
    for (int j = 0; j < m; ++j)
      if (j != i) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return w;
}

Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index l = 0; l < a.cols(); ++l) c(i, j) += a(i, l) * b(l, j);
  return c;
}

AdjacencyMatrix single_edge(int m, int a, int b) {
  const std::vector<Edge> e{{a, b}};
  return metropolis_weights(e, m);
}

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Io, StrictParsing) {
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
  EXPECT_THROW(parse_double(""), std::invalid_argument);
  EXPECT_EQ(parse_integer("+3"), 3);
  EXPECT_THROW(parse_integer("3.0"), std::invalid_argument);
  EXPECT_EQ(trim("  a b \t"), "a b");
  EXPECT_EQ(split_whitespace(" a  bc\td ").size(), 3u);
}

TEST(Metropolis, CompleteTwoAgents) {
  const AdjacencyMatrix a = metropolis_weights(complete_edges(2), 2);
  EXPECT_DOUBLE_EQ(a(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(a(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(1, 1), 0.5);
}

TEST(Metropolis, EmptyEdgeSetIsIdentity) {
  const AdjacencyMatrix a = metropolis_weights({}, 3);
  EXPECT_TRUE(a.weights().isApprox(Matrix::Identity(3, 3)));
}

TEST(Metropolis, PathOfThree) {
  const AdjacencyMatrix a = metropolis_weights(path_edges(3), 3);
  Matrix expected(3, 3);
  expected << 2.0 / 3, 1.0 / 3, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 1.0 / 3, 2.0 / 3;
  // The middle row keeps 1 - 2/3; first and last keep 1 - 1/3.
  EXPECT_LT((a.weights() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(a.stochastic_defect(), 1e-15);
  EXPECT_TRUE(a.is_symmetric(0.0));
}

TEST(Metropolis, MatchesHandRuleOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 9);
    std::vector<Edge> edges;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (rng() % 3 == 0) edges.push_back({i, j});
    const AdjacencyMatrix a = metropolis_weights(edges, m);
    EXPECT_LT((a.weights() - metropolis_by_hand(edges, m)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_TRUE(a.is_nonnegative());
    EXPECT_LT(a.stochastic_defect(), kGeneratedStochasticTol);
  }
}

TEST(Metropolis, RejectsBadInput) {
  EXPECT_THROW(metropolis_weights({}, 0), std::invalid_argument);
  const std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(metropolis_weights(loop, 3), std::invalid_argument);
  const std::vector<Edge> out{{0, 3}};
  EXPECT_THROW(metropolis_weights(out, 3), std::invalid_argument);
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  EXPECT_THROW(metropolis_weights(dup, 3), std::invalid_argument);
}

TEST(Validate, CompleteGraphEverySlot) {
  const auto s = GraphSchedule::constant(metropolis_weights(complete_edges(5), 5));
  EXPECT_TRUE(validate_schedule(s, 50).valid());
}

TEST(Validate, AlternatingEdgesNeedTwoSlotWindows) {
  const std::vector<AdjacencyMatrix> slots{single_edge(3, 0, 1), single_edge(3, 1, 2)};
  EXPECT_TRUE(validate_schedule(GraphSchedule::periodic(slots, 2), 40).valid());
  const ValidationReport one = validate_schedule(GraphSchedule::periodic(slots, 1), 40);
  EXPECT_FALSE(one.valid());
  EXPECT_EQ(one.disconnected_windows.size(), 40u);
}

TEST(Validate, IsolatedNodeFailsEveryWindow) {
  const auto s = GraphSchedule::constant(single_edge(3, 0, 1), 2);
  const ValidationReport r = validate_schedule(s, 10);
  EXPECT_FALSE(r.valid());
  EXPECT_EQ(r.disconnected_windows.size(), 9u);
  EXPECT_THROW(validate_schedule(s, 1), std::invalid_argument);
}

TEST(Validate, EtaFloorAndStochasticity) {
  const auto s = GraphSchedule::constant(metropolis_weights(path_edges(3), 3)).with_eta(0.5);
  const ValidationReport r = validate_schedule(s, 3);
  EXPECT_EQ(r.eta_failures.size(), 3u);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 0.9;
  bad(0, 1) = 0.2;
  bad(1, 0) = 0.2;
  bad(1, 1) = 0.8;
  const ValidationReport r2 = validate_schedule(GraphSchedule::periodic({AdjacencyMatrix(bad)}, 1, true, kUserStochasticTol), 2);
  EXPECT_EQ(r2.stochasticity_failures.size(), 2u);
}

TEST(Validate, FiniteListRunsOut) {
  const std::vector<AdjacencyMatrix> slots{AdjacencyMatrix(Matrix::Constant(2, 2, 0.5))};
  const auto s = GraphSchedule::periodic(slots, 1, false);
  EXPECT_TRUE(validate_schedule(s, 1).valid());
  EXPECT_TRUE(validate_schedule(s, 3).exhausted);
  EXPECT_THROW(s.at(1), ScheduleExhausted);
}

TEST(Validate, RandomScheduleIsBConnected) {
  for (int B : {1, 2, 3}) {
    const auto s = GraphSchedule::random_b_connected(7, B, 42, 0.2);
    EXPECT_TRUE(validate_schedule(s, 300).valid()) << "B=" << B;
    EXPECT_TRUE(s.at(17).weights() == GraphSchedule::random_b_connected(7, B, 42, 0.2).at(17).weights());
  }
}

TEST(Transition, SingleFactor) {
  const auto s = GraphSchedule::periodic(alternating_path_slots(4), 2);
  EXPECT_TRUE(transition_matrix(s, 3, 3) == s.at(3).weights());
}

TEST(Transition, AveragingMatrixIsIdempotent) {
  const auto s = GraphSchedule::constant(AdjacencyMatrix(Matrix::Constant(4, 4, 0.25)));
  EXPECT_LT((transition_matrix(s, 9, 2) - Matrix::Constant(4, 4, 0.25)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Transition, PathSquaredByHand) {
  const AdjacencyMatrix a = metropolis_weights(path_edges(3), 3);
  const Matrix phi = transition_matrix(GraphSchedule::constant(a), 1, 0);
  Matrix expected(3, 3);
  // Row-by-column products of the path matrix with itself.
  expected << 5.0 / 9, 1.0 / 3, 1.0 / 9, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 9, 1.0 / 3, 5.0 / 9;
  EXPECT_LT((phi - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((phi.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-15);
  EXPECT_LT((phi.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-15);
}

TEST(Transition, OrderedProductOfRandomSlots) {
  const auto s = GraphSchedule::random_b_connected(5, 2, 9);
  Matrix expected = s.at(4).weights();
  for (std::size_t t = 5; t <= 9; ++t) expected = naive_product(s.at(t).weights(), expected);
  EXPECT_LT((transition_matrix(s, 9, 4) - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(transition_matrix(s, 3, 4), std::invalid_argument);
}

TEST(ConsensusWeights, Offsets) {
  EXPECT_EQ(communication_offset(1), 0u);
  EXPECT_EQ(communication_offset(2), 1u);
  EXPECT_EQ(communication_offset(4), 6u);
  EXPECT_EQ(cumulative_slots(3), 6u);
  EXPECT_EQ(cumulative_slots(20), 210u);
}

TEST(ConsensusWeights, SingleAgent) {
  const auto s = GraphSchedule::constant(AdjacencyMatrix(Matrix::Identity(1, 1)));
  for (std::size_t k = 1; k < 6; ++k) EXPECT_EQ(consensus_weights(s, k)(0, 0), 1.0);
}

TEST(ConsensusWeights, CompleteUniform) {
  const auto s = GraphSchedule::constant(AdjacencyMatrix(Matrix::Constant(5, 5, 0.2)));
  for (std::size_t k = 1; k < 6; ++k)
    EXPECT_LT((consensus_weights(s, k) - Matrix::Constant(5, 5, 0.2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ConsensusWeights, SecondIterationUsesSlotsOneAndTwo) {
  const std::vector<AdjacencyMatrix> slots{single_edge(3, 0, 1), single_edge(3, 1, 2)};
  const auto s = GraphSchedule::periodic(slots, 2);
  // t(2) = 1: slot 1 (edge 1-2) first, then slot 2 (edge 0-1).
  const Matrix expected = naive_product(slots[0].weights(), slots[1].weights());
  EXPECT_LT((consensus_weights(s, 2) - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(consensus_weights(s, 0), std::invalid_argument);
}

TEST(ConsensusWeights, CacheAgreesAndMemoizes) {
  const auto s = GraphSchedule::random_b_connected(6, 2, 3);
  ConsensusWeightCache cache(s);
  for (std::size_t k = 1; k <= 8; ++k) EXPECT_TRUE(cache(k) == consensus_weights(s, k));
  EXPECT_EQ(cache.cached(), 8u);
  cache(3);
  EXPECT_EQ(cache.cached(), 8u);
}

TEST(Geometric, TwoAgents) {
  const GeometricConstants g = geometric_constants(2, 1, 0.5);
  EXPECT_EQ(g.B0, 1);
  EXPECT_DOUBLE_EQ(g.gamma, 0.5);
  EXPECT_DOUBLE_EQ(g.Gamma, 12.0);
  EXPECT_DOUBLE_EQ(g.decay(3), 12.0 * 0.125);
}

TEST(Geometric, ThreeAgentsTwoSlotWindows) {
  const GeometricConstants g = geometric_constants(3, 2, 0.25);
  const double eta4 = std::pow(0.25, 4);
  EXPECT_EQ(g.B0, 4);
  EXPECT_NEAR(g.gamma, std::pow(1.0 - eta4, 0.25), 1e-15);
  EXPECT_NEAR(g.Gamma, 2.0 * 257.0 / (1.0 - eta4), 1e-9);
  EXPECT_LT(g.gamma, 1.0);
}

TEST(Geometric, RejectsDegenerateInput) {
  EXPECT_THROW(geometric_constants(1, 1, 0.5), std::invalid_argument);
  EXPECT_THROW(geometric_constants(3, 1, 0.0), std::invalid_argument);
  EXPECT_THROW(geometric_constants(3, 1, 1.0), std::invalid_argument);
}

TEST(Geometric, DecayStaysFiniteForTinyEta) {
  const GeometricConstants g = geometric_constants(10, 2, 0.1);
  EXPECT_TRUE(std::isfinite(g.Gamma));
  EXPECT_TRUE(std::isfinite(g.decay(1)));
  EXPECT_GT(g.decay(1), g.decay(1000000));
  const GeometricConstants huge = geometric_constants(100, 2, 0.01);
  EXPECT_FALSE(std::isfinite(huge.Gamma));
  EXPECT_TRUE(std::isfinite(huge.log_Gamma));
}

TEST(MatrixText, RoundTrip) {
  const auto slots = alternating_path_slots(5);
  std::ostringstream out;
  write_matrices(out, slots);
  std::istringstream in(out.str());
  const auto back = read_matrices(in);
  ASSERT_EQ(back.size(), slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) EXPECT_TRUE(back[i].weights() == slots[i].weights());
}

TEST(MatrixText, RejectsRaggedRows) {
  std::istringstream in("0.5 0.5\n0.5\n");
  EXPECT_THROW(read_matrices(in), ParseError);
}

TEST(Topologies, AlternatingPathUnionIsPath) {
  const auto slots = alternating_path_slots(6);
  ASSERT_EQ(slots.size(), 2u);
  EXPECT_EQ(slots[0].edges().size() + slots[1].edges().size(), 5u);
  EXPECT_DOUBLE_EQ(slots[0].min_positive(), 0.5);
  EXPECT_EQ(ring_edges(5).size(), 5u);
  EXPECT_EQ(star_edges(5).size(), 4u);
  EXPECT_EQ(complete_edges(5).size(), 10u);
}
