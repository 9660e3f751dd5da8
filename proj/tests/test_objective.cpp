#include "dpg/dataset.hpp"
#include "dpg/objective.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace dpg;

namespace {

Dataset parse(const std::string& text, std::optional<int> dim = std::nullopt) {
  std::istringstream in(text);
  return parse_libsvm(in, dim);
}

Dataset random_dataset(int samples, int dim, std::uint64_t seed, double density = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0), coin(0.0, 1.0);
  Dataset d;
  d.dim = dim;
  for (int s = 0; s < samples; ++s) {
    Sample sample;
    sample.label = coin(rng) < 0.5 ? -1 : 1;
    for (int j = 0; j < dim; ++j)
      if (coin(rng) < density) sample.features.push_back({j, u(rng)});
    d.samples.push_back(sample);
  }
  return d;
}

Vector random_point(int n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector x(n);
  for (int j = 0; j < n; ++j) x[j] = normal(rng);
  return x;
}

Vector central_difference(const LocalObjective& g, const Vector& x) {
  const double h = 1e-6 * (1.0 + x.norm());
  Vector grad(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector p = x, q = x;
    p[j] += h;
    q[j] -= h;
    grad[j] = (g.value(p) - g.value(q)) / (2 * h);
  }
  return grad;
}

Matrix random_psd(int n, std::mt19937_64& rng) {
  const Matrix a = Matrix::NullaryExpr(n, n, [&]() { return std::normal_distribution<double>()(rng); });
  return a * a.transpose() / n;
}

}  // namespace

TEST(Libsvm, SingleLine) {
  const Dataset d = parse("+1 3:1.5\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.samples[0].label, 1);
  ASSERT_EQ(d.samples[0].features.size(), 1u);
  EXPECT_EQ(d.samples[0].features[0].index, 2);
  EXPECT_EQ(d.samples[0].features[0].value, 1.5);
  EXPECT_EQ(d.dim, 3);
  EXPECT_EQ(parse("+1 3:1.5\n", 10).dim, 10);
}

TEST(Libsvm, LabelSets) {
  const Dataset a = parse("0 1:1\n1 2:1\n");
  EXPECT_EQ(a.samples[0].label, -1);
  EXPECT_EQ(a.samples[1].label, 1);
  const Dataset b = parse("1 1:1\n2 2:1\n");
  EXPECT_EQ(b.samples[0].label, -1);
  EXPECT_EQ(b.samples[1].label, 1);
  const Dataset c = parse("-1 1:1 # comment\n\n+1 2:1\n");
  EXPECT_EQ(c.size(), 2u);
}

TEST(Libsvm, ErrorsCarryLineNumbers) {
  try {
    parse("+1 1:1\n-1 2:1 1:3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("+1 1:1\n-1 x\n"), ParseError);
  EXPECT_THROW(parse("+1 0:1\n"), ParseError);
  EXPECT_THROW(parse("3 1:1\n5 1:1\n"), ParseError);
  EXPECT_THROW(parse("+1 4:1\n", 3), ParseError);
}

TEST(Libsvm, RoundTrip) {
  const Dataset d = random_dataset(40, 7, 2);
  std::ostringstream out;
  write_libsvm(out, d);
  EXPECT_EQ(parse(out.str(), 7), d);
  std::ostringstream again;
  write_libsvm(again, parse(out.str(), 7));
  EXPECT_EQ(out.str(), again.str());
}

TEST(Shard, Sizes) {
  const Dataset d = random_dataset(10, 3, 1);
  const auto parts = shard(d, 3, 5);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0].size(), 4u);
  EXPECT_EQ(parts[1].size(), 3u);
  EXPECT_EQ(parts[2].size(), 3u);
  EXPECT_EQ(shard(d, 1, 5).front(), d);
  EXPECT_EQ(shard(d, 3, 5), parts);
  EXPECT_THROW(shard(d, 11, 5), std::invalid_argument);
  EXPECT_THROW(shard(d, 0, 5), std::invalid_argument);
  EXPECT_THROW(shard(Dataset{}, 2, 5), std::invalid_argument);
}

TEST(Shard, PartitionIsDisjointAndComplete) {
  Dataset d = random_dataset(57, 2, 4);
  for (std::size_t i = 0; i < d.size(); ++i) d.samples[i].features = {{0, static_cast<double>(i)}};
  std::multiset<double> seen;
  for (const Dataset& p : shard(d, 6, 9))
    for (const Sample& s : p.samples) seen.insert(s.features[0].value);
  ASSERT_EQ(seen.size(), 57u);
  double expect = 0.0;
  for (double v : seen) EXPECT_EQ(v, expect++);
}

TEST(Shard, SubsampleIsSeeded) {
  const Dataset d = random_dataset(100, 4, 6);
  EXPECT_EQ(subsample(d, 30, 1), subsample(d, 30, 1));
  EXPECT_EQ(subsample(d, 30, 1).size(), 30u);
  EXPECT_NE(subsample(d, 30, 1), subsample(d, 30, 2));
  const auto p = seeded_permutation(20, 3);
  EXPECT_EQ(std::set<std::size_t>(p.begin(), p.end()).size(), 20u);
}

TEST(Sigmoid, Values) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(std::log(3.0)), 0.25, 1e-15);
  EXPECT_EQ(sigmoid(1000.0), 0.0);
  EXPECT_EQ(sigmoid(-1000.0), 1.0);
  const Dataset one = parse("+1 1:1 2:2\n");
  EXPECT_EQ(sigmoid_loss_value(Vector::Zero(2), one), 0.5);
  double previous = 1.0;
  for (double s = 0.0; s < 20.0; s += 0.5) {
    const double v = sigmoid_loss_value(Vector::Constant(2, s), one);
    EXPECT_LE(v, previous);
    previous = v;
  }
}

TEST(Sigmoid, GradientAtZero) {
  const Dataset d = parse("-1 1:2 3:-1\n");
  const Vector g = sigmoid_loss_grad(Vector::Zero(3), d);
  // -sigma(0)(1 - sigma(0)) l a = -0.25 * (-1) * a
  EXPECT_NEAR(g[0], 0.5, 1e-15);
  EXPECT_EQ(g[1], 0.0);
  EXPECT_NEAR(g[2], -0.25, 1e-15);
  const Dataset empty_row = parse("+1\n", 3);
  EXPECT_EQ(sigmoid_loss_grad(Vector::Ones(3), empty_row).norm(), 0.0);
  EXPECT_THROW(sigmoid_loss_grad(Vector::Zero(2), d), std::invalid_argument);
}

TEST(Sigmoid, CurvatureConstant) {
  // Closed form: the maximum of |s(1-s)(1-2s)| is 1/(6 sqrt 3).
  EXPECT_NEAR(sigmoid_curvature_bound(), 1.0 / (6.0 * std::sqrt(3.0)), 1e-9);
  EXPECT_NEAR(sigmoid_curvature_bound(), 0.09623, 1e-5);
  // Finite-difference second derivative never exceeds it.
  const double h = 1e-4;
  for (double u = -10.0; u <= 10.0; u += 0.01) {
    const double d2 = (sigmoid(u + h) - 2 * sigmoid(u) + sigmoid(u - h)) / (h * h);
    EXPECT_LE(std::abs(d2), sigmoid_curvature_bound() + 1e-6);
  }
}

TEST(Sigmoid, LipschitzOfUnitSample) {
  const SigmoidLoss g(parse("+1 2:1\n"));
  EXPECT_NEAR(g.lipschitz_bound(), 0.0962, 1e-4);
  EXPECT_THROW(SigmoidLoss(Dataset{{}, 3}), std::invalid_argument);
}

TEST(Sigmoid, GradientMatchesFiniteDifferences) {
  const SigmoidLoss g(random_dataset(30, 6, 12), 0.01);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_point(6, 1.0, rng);
    const Vector fd = central_difference(g, x);
    EXPECT_LT((g.gradient(x) - fd).norm(), 1e-5 * std::max(1.0, fd.norm()));
  }
}

TEST(Sigmoid, LipschitzProbe) {
  const SigmoidLoss g(random_dataset(20, 5, 21));
  std::mt19937_64 rng(22);
  for (int t = 0; t < 10000; ++t) {
    const Vector x = random_point(5, 2.0, rng), y = x + random_point(5, 0.3, rng);
    ASSERT_LE((g.gradient(x) - g.gradient(y)).norm(), g.lipschitz_bound() * (x - y).norm() * (1 + 1e-8));
  }
}

TEST(Sigmoid, GradientBound) {
  const Dataset d = random_dataset(25, 4, 31);
  const SigmoidLoss g(d);
  double mean_norm = 0.0;
  for (const Sample& s : d.samples) mean_norm += std::sqrt(s.squared_norm());
  mean_norm /= d.size();
  EXPECT_NEAR(g.gradient_bound(1.0), 0.25 * mean_norm, 1e-15);
  std::mt19937_64 rng(32);
  for (int t = 0; t < 1000; ++t) EXPECT_LE(g.gradient(random_point(4, 3.0, rng)).norm(), 0.25 * mean_norm);
}

TEST(Quadratic, Lipschitz) {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 1.0;
  q(1, 1) = 2.0;
  EXPECT_NEAR(Quadratic(q, Vector::Zero(2)).lipschitz_bound(), 2.0, 1e-8);
  EXPECT_NEAR(Quadratic(Matrix::Identity(3, 3), Vector::Zero(3)).lipschitz_bound(), 1.0, 1e-12);
}

TEST(Quadratic, PowerIterationMatchesEigenSolver) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    const Matrix q = random_psd(6, rng);
    const double exact = Eigen::SelfAdjointEigenSolver<Matrix>(q).eigenvalues().maxCoeff();
    EXPECT_NEAR(largest_eigenvalue(q), exact, 1e-8 * exact);
  }
}

TEST(Quadratic, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(42);
  const Quadratic g(random_psd(5, rng), random_point(5, 1.0, rng));
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_point(5, 2.0, rng);
    const Vector fd = central_difference(g, x);
    EXPECT_LT((g.gradient(x) - fd).norm(), 1e-5 * std::max(1.0, fd.norm()));
  }
}

TEST(Quadratic, RejectsBadShapes) {
  Matrix q = Matrix::Identity(2, 2);
  q(0, 1) = 1.0;
  EXPECT_THROW(Quadratic(q, Vector::Zero(2)), std::invalid_argument);
  EXPECT_THROW(Quadratic(Matrix::Identity(2, 2), Vector::Zero(3)), std::invalid_argument);
}

TEST(Objectives, Aggregates) {
  Objectives gs{std::make_shared<Quadratic>(Matrix::Identity(1, 1), Vector::Constant(1, 1.0)),
                std::make_shared<Quadratic>(3.0 * Matrix::Identity(1, 1), Vector::Constant(1, -1.0))};
  EXPECT_DOUBLE_EQ(global_lipschitz(gs), 3.0);
  const Vector x = Vector::Constant(1, 2.0);
  EXPECT_DOUBLE_EQ(average_value(gs, x), 0.5 * (0.5 * 1.0 + 0.5 * 3.0 * 9.0));
  EXPECT_DOUBLE_EQ(average_gradient(gs, x)[0], 0.5 * (1.0 + 9.0));
}
