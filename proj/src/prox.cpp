#include "dpg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpg {

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::zero:
      return "zero";
    case RegularizerKind::l1:
      return "l1";
    case RegularizerKind::squared_l2:
      return "squared-l2";
    case RegularizerKind::elastic_net:
      return "elastic-net";
    case RegularizerKind::box:
      return "box";
  }
  return "unknown";
}

RegularizerKind parse_regularizer_kind(const std::string& name) {
  if (name == "zero" || name == "none") return RegularizerKind::zero;
  if (name == "l1") return RegularizerKind::l1;
  if (name == "squared-l2" || name == "l2") return RegularizerKind::squared_l2;
  if (name == "elastic-net") return RegularizerKind::elastic_net;
  if (name == "box" || name == "box-indicator") return RegularizerKind::box;
  throw std::invalid_argument("unknown regularizer kind '" + name + "'");
}

Regularizer::Regularizer(RegularizerKind kind, int dim, double lambda1, double lambda2, double lo, double hi)
    : kind_(kind), dim_(dim), lambda1_(lambda1), lambda2_(lambda2), lo_(lo), hi_(hi) {
  if (dim < 1) throw std::invalid_argument("Regularizer: dimension must be >= 1");
  if (lambda1 < 0.0 || lambda2 < 0.0) throw std::invalid_argument("Regularizer: weights must be nonnegative");
  if (kind == RegularizerKind::box && !(lo <= hi)) throw std::invalid_argument("Regularizer: box needs lo <= hi");
}

Regularizer Regularizer::zero(int dim) { return {RegularizerKind::zero, dim, 0.0, 0.0, 0.0, 0.0}; }
Regularizer Regularizer::l1(int dim, double lambda1) { return {RegularizerKind::l1, dim, lambda1, 0.0, 0.0, 0.0}; }
Regularizer Regularizer::squared_l2(int dim, double lambda2) {
  return {RegularizerKind::squared_l2, dim, 0.0, lambda2, 0.0, 0.0};
}
Regularizer Regularizer::elastic_net(int dim, double lambda1, double lambda2) {
  return {RegularizerKind::elastic_net, dim, lambda1, lambda2, 0.0, 0.0};
}
Regularizer Regularizer::box(int dim, double lo, double hi) { return {RegularizerKind::box, dim, 0.0, 0.0, lo, hi}; }

void Regularizer::check_dim(const Vector& v, const char* where) const {
  if (v.size() != dim_)
    throw std::invalid_argument(std::string(where) + ": dimension " + std::to_string(v.size()) + ", expected " +
                                std::to_string(dim_));
}

double Regularizer::coordinate_value(double x) const {
  switch (kind_) {
    case RegularizerKind::zero:
      return 0.0;
    case RegularizerKind::l1:
      return lambda1_ * std::abs(x);
    case RegularizerKind::squared_l2:
      return lambda2_ * x * x;
    case RegularizerKind::elastic_net:
      return lambda1_ * std::abs(x) + lambda2_ * x * x;
    case RegularizerKind::box:
      return (x >= lo_ && x <= hi_) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double Regularizer::value(const Vector& x) const {
  check_dim(x, "Regularizer::value");
  switch (kind_) {
    case RegularizerKind::zero:
      return 0.0;
    case RegularizerKind::l1:
      return lambda1_ * x.lpNorm<1>();
    case RegularizerKind::squared_l2:
      return lambda2_ * x.squaredNorm();
    case RegularizerKind::elastic_net:
      return lambda1_ * x.lpNorm<1>() + lambda2_ * x.squaredNorm();
    case RegularizerKind::box:
      return (x.array() >= lo_).all() && (x.array() <= hi_).all() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double soft_threshold(double v, double threshold) {
  if (v > threshold) return v - threshold;
  if (v < -threshold) return v + threshold;
  return 0.0;
}

Vector Regularizer::prox(const Vector& v, double alpha) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("prox: step size must be > 0");
  check_dim(v, "prox");
  Vector z(v.size());
  switch (kind_) {
    case RegularizerKind::zero:
      z = v;
      break;
    case RegularizerKind::l1:
      for (Eigen::Index j = 0; j < v.size(); ++j) z[j] = soft_threshold(v[j], alpha * lambda1_);
      break;
    case RegularizerKind::squared_l2:
      z = v / (1.0 + 2.0 * alpha * lambda2_);
      break;
    case RegularizerKind::elastic_net: {
      // Stationarity of lambda1|z| + lambda2 z^2 + (z - v)^2 / (2 alpha).
      const double shrink = 1.0 + 2.0 * alpha * lambda2_;
      for (Eigen::Index j = 0; j < v.size(); ++j) z[j] = soft_threshold(v[j], alpha * lambda1_) / shrink;
      break;
    }
    case RegularizerKind::box:
      z = v.cwiseMax(lo_).cwiseMin(hi_);
      break;
  }
  return z;
}

double Regularizer::prox_objective(const Vector& x, const Vector& v, double alpha) const {
  return (x - v).squaredNorm() / (2.0 * alpha) + value(x);
}

std::optional<double> Regularizer::subgradient_bound(double radius) const {
  const double root_n = std::sqrt(static_cast<double>(dim_));
  switch (kind_) {
    case RegularizerKind::zero:
      return 0.0;
    case RegularizerKind::l1:
      return lambda1_ * root_n;
    case RegularizerKind::squared_l2:
      return 2.0 * lambda2_ * radius;
    case RegularizerKind::elastic_net:
      return lambda1_ * root_n + 2.0 * lambda2_ * radius;
    case RegularizerKind::box:
      return std::nullopt;
  }
  return std::nullopt;
}

bool Regularizer::bound_needs_radius() const noexcept {
  return kind_ == RegularizerKind::squared_l2 || kind_ == RegularizerKind::elastic_net;
}

InexactProxCheck check_inexact_prox(const Regularizer& h, const Vector& candidate, const Vector& v, double alpha,
                                    double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("check_inexact_prox: epsilon must be >= 0");
  const Vector exact = h.prox(v, alpha);
  InexactProxCheck result;
  result.gap = h.prox_objective(candidate, v, alpha) - h.prox_objective(exact, v, alpha);
  result.excess = result.gap - epsilon;
  result.accepted = result.excess <= 0.0;
  return result;
}

Vector prox_residual_subgradient(const Vector& x_prev, const Vector& x_next, const Vector& g_bar, const Vector& e,
                                 const Vector& p, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("prox_residual_subgradient: step size must be > 0");
  const auto n = x_prev.size();
  if (x_next.size() != n || g_bar.size() != n || e.size() != n || p.size() != n)
    throw std::invalid_argument("prox_residual_subgradient: dimension mismatch");
  return (x_prev - x_next - p) / alpha - g_bar - e;
}

}  // namespace dpg
