#pragma once

// Smooth local costs g_i held by the agents.

#include "dpg/dataset.hpp"
#include "dpg/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace dpg {

class LocalObjective {
 public:
  virtual ~LocalObjective() = default;

  virtual int dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;

  /// Lipschitz constant of the gradient.
  virtual double lipschitz_bound() const = 0;

  /// Upper bound on ||grad g(x)|| for ||x|| <= radius.
  virtual double gradient_bound(double radius) const = 0;

  virtual std::string describe() const = 0;
};

using ObjectivePtr = std::shared_ptr<const LocalObjective>;
using Objectives = std::vector<ObjectivePtr>;

/// sigma(u) = 1 / (1 + e^u), evaluated without overflow.
double sigmoid(double u);

/// max_u |sigma''(u)| = max_u |sigma(1 - sigma)(1 - 2 sigma)|, found once by a
/// grid over [-10, 10] with step 1e-4 and golden-section refinement.
double sigmoid_curvature_bound();

/// Mean over the shard of sigma(l <a, x>).
double sigmoid_loss_value(const Vector& x, const Dataset& shard);
/// Mean over the shard of -sigma(u)(1 - sigma(u)) l a, u = l <a, x>.
Vector sigmoid_loss_grad(const Vector& x, const Dataset& shard);

/// Sigmoid classification loss on a data shard, optionally plus ridge ||x||^2
/// when the smooth part carries the l2 term.
class SigmoidLoss final : public LocalObjective {
 public:
  explicit SigmoidLoss(Dataset shard, double ridge = 0.0);

  int dim() const override { return shard_.dim; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double lipschitz_bound() const override { return lipschitz_; }
  double gradient_bound(double radius) const override;
  std::string describe() const override;

  const Dataset& shard() const noexcept { return shard_; }
  double ridge() const noexcept { return ridge_; }

 private:
  Dataset shard_;
  double ridge_;
  double mean_norm_ = 0.0;
  double lipschitz_ = 0.0;
};

/// g(x) = (1/2)(x - c)' Q (x - c) with Q symmetric positive semidefinite.
class Quadratic final : public LocalObjective {
 public:
  Quadratic(Matrix Q, Vector c);

  int dim() const override { return static_cast<int>(c_.size()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double lipschitz_bound() const override { return lipschitz_; }
  double gradient_bound(double radius) const override;
  std::string describe() const override;

  const Matrix& Q() const noexcept { return Q_; }
  const Vector& c() const noexcept { return c_; }

 private:
  Matrix Q_;
  Vector c_;
  double lipschitz_;
};

/// Largest eigenvalue of a symmetric PSD matrix by power iteration, run until
/// the Rayleigh quotient changes by less than rel_tol (relative).
double largest_eigenvalue(const Matrix& Q, double rel_tol = 1e-12);

/// max_i L_i.
double global_lipschitz(const Objectives& objectives);

/// (1/m) sum_i g_i(x).
double average_value(const Objectives& objectives, const Vector& x);
/// (1/m) sum_i grad g_i(x).
Vector average_gradient(const Objectives& objectives, const Vector& x);

}  // namespace dpg
