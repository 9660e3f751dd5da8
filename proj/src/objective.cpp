#include "dpg/objective.hpp"

#include "dpg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dpg {

double sigmoid(double u) {
  if (u > 0.0) {
    const double e = std::exp(-u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(u));
}

namespace {

double sigmoid_curvature(double u) {
  const double s = sigmoid(u);
  return std::abs(s * (1.0 - s) * (1.0 - 2.0 * s));
}

double compute_curvature_bound() {
  constexpr double step = 1e-4;
  double best_u = -10.0;
  double best = sigmoid_curvature(best_u);
  for (long i = 1; i <= 200000; ++i) {
    const double u = -10.0 + static_cast<double>(i) * step;
    if (const double c = sigmoid_curvature(u); c > best) {
      best = c;
      best_u = u;
    }
  }
  const double u = oracle::golden_section([](double t) { return -sigmoid_curvature(t); }, best_u - step,
                                          best_u + step, 1e-12);
  return std::max(best, sigmoid_curvature(u));
}

void require_nonempty(const Dataset& shard, const char* where) {
  if (shard.empty()) throw std::invalid_argument(std::string(where) + ": empty shard");
}

void require_dim(const Vector& x, int dim, const char* where) {
  if (x.size() != dim)
    throw std::invalid_argument(std::string(where) + ": dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(dim));
}

}  // namespace

double sigmoid_curvature_bound() {
  static const double bound = compute_curvature_bound();
  return bound;
}

double sigmoid_loss_value(const Vector& x, const Dataset& shard) {
  require_nonempty(shard, "sigmoid_loss_value");
  require_dim(x, shard.dim, "sigmoid_loss_value");
  double total = 0.0;
  for (const Sample& s : shard.samples) total += sigmoid(s.label * s.dot(x));
  return total / static_cast<double>(shard.size());
}

Vector sigmoid_loss_grad(const Vector& x, const Dataset& shard) {
  require_nonempty(shard, "sigmoid_loss_grad");
  require_dim(x, shard.dim, "sigmoid_loss_grad");
  Vector grad = Vector::Zero(shard.dim);
  for (const Sample& s : shard.samples) {
    const double sig = sigmoid(s.label * s.dot(x));
    const double coeff = -sig * (1.0 - sig) * s.label;
    for (const Feature& f : s.features) grad[f.index] += coeff * f.value;
  }
  return grad / static_cast<double>(shard.size());
}

// ---------------------------------------------------------------------------

SigmoidLoss::SigmoidLoss(Dataset shard, double ridge) : shard_(std::move(shard)), ridge_(ridge) {
  require_nonempty(shard_, "SigmoidLoss");
  if (ridge_ < 0.0) throw std::invalid_argument("SigmoidLoss: ridge weight must be >= 0");
  double sum_norm = 0.0;
  double sum_sq = 0.0;
  for (const Sample& s : shard_.samples) {
    const double sq = s.squared_norm();
    sum_sq += sq;
    sum_norm += std::sqrt(sq);
  }
  const double count = static_cast<double>(shard_.size());
  mean_norm_ = sum_norm / count;
  lipschitz_ = sigmoid_curvature_bound() * sum_sq / count + 2.0 * ridge_;
}

double SigmoidLoss::value(const Vector& x) const {
  double v = sigmoid_loss_value(x, shard_);
  if (ridge_ > 0.0) v += ridge_ * x.squaredNorm();
  return v;
}

Vector SigmoidLoss::gradient(const Vector& x) const {
  Vector g = sigmoid_loss_grad(x, shard_);
  if (ridge_ > 0.0) g += 2.0 * ridge_ * x;
  return g;
}

double SigmoidLoss::gradient_bound(double radius) const { return 0.25 * mean_norm_ + 2.0 * ridge_ * radius; }

std::string SigmoidLoss::describe() const {
  std::ostringstream out;
  out << "sigmoid-loss(samples=" << shard_.size() << ", dim=" << shard_.dim;
  if (ridge_ > 0.0) out << ", ridge=" << ridge_;
  out << ")";
  return out.str();
}

// ---------------------------------------------------------------------------

double largest_eigenvalue(const Matrix& Q, double rel_tol) {
  if (Q.rows() != Q.cols()) throw std::invalid_argument("largest_eigenvalue: matrix must be square");
  const auto n = Q.rows();
  if (n == 0) return 0.0;
  // Deterministic start with distinct components so it is not orthogonal to
  // a coordinate eigenvector.
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * static_cast<double>(i) / static_cast<double>(n);
  x.normalize();
  double lambda = x.dot(Q * x);
  for (int iter = 0; iter < 100000; ++iter) {
    Vector y = Q * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
    const double next = x.dot(Q * x);
    const bool converged = std::abs(next - lambda) <= rel_tol * std::abs(next);
    lambda = next;
    if (converged) break;
  }
  return lambda;
}

Quadratic::Quadratic(Matrix Q, Vector c) : Q_(std::move(Q)), c_(std::move(c)) {
  if (Q_.rows() != Q_.cols() || Q_.rows() != c_.size()) throw std::invalid_argument("Quadratic: shape mismatch");
  if ((Q_ - Q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + Q_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("Quadratic: Q must be symmetric");
  lipschitz_ = largest_eigenvalue(Q_);
}

double Quadratic::value(const Vector& x) const {
  require_dim(x, dim(), "Quadratic::value");
  const Vector d = x - c_;
  return 0.5 * d.dot(Q_ * d);
}

Vector Quadratic::gradient(const Vector& x) const {
  require_dim(x, dim(), "Quadratic::gradient");
  return Q_ * (x - c_);
}

double Quadratic::gradient_bound(double radius) const { return lipschitz_ * (radius + c_.norm()); }

std::string Quadratic::describe() const {
  std::ostringstream out;
  out << "quadratic(dim=" << dim() << ", L=" << lipschitz_ << ")";
  return out.str();
}

// ---------------------------------------------------------------------------

double global_lipschitz(const Objectives& objectives) {
  double L = 0.0;
  for (const auto& g : objectives) L = std::max(L, g->lipschitz_bound());
  return L;
}

double average_value(const Objectives& objectives, const Vector& x) {
  double total = 0.0;
  for (const auto& g : objectives) total += g->value(x);
  return total / static_cast<double>(objectives.size());
}

Vector average_gradient(const Objectives& objectives, const Vector& x) {
  Vector total = Vector::Zero(x.size());
  for (const auto& g : objectives) total += g->gradient(x);
  return total / static_cast<double>(objectives.size());
}

}  // namespace dpg
