#pragma once

// Non-smooth convex regularizers h with closed-form proximal maps
//   prox_{alpha,h}(v) = argmin_z h(z) + ||z - v||^2 / (2 alpha)
// and the inexact-prox certificate used by the diagnostics.

#include "dpg/types.hpp"

#include <optional>
#include <string>

namespace dpg {

enum class RegularizerKind { zero, l1, squared_l2, elastic_net, box };

std::string to_string(RegularizerKind kind);
/// Accepts "zero", "l1", "squared-l2", "elastic-net", "box".
RegularizerKind parse_regularizer_kind(const std::string& name);

/// h(x) for one of the supported kinds:
///   zero         0
///   l1           lambda1 ||x||_1
///   squared_l2   lambda2 ||x||_2^2
///   elastic_net  lambda1 ||x||_1 + lambda2 ||x||_2^2
///   box          indicator of [lo, hi]^n
class Regularizer {
 public:
  static Regularizer zero(int dim);
  static Regularizer l1(int dim, double lambda1);
  static Regularizer squared_l2(int dim, double lambda2);
  static Regularizer elastic_net(int dim, double lambda1, double lambda2);
  static Regularizer box(int dim, double lo, double hi);

  RegularizerKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  double lambda1() const noexcept { return lambda1_; }
  double lambda2() const noexcept { return lambda2_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  /// h(x); +infinity outside the box for the indicator.
  double value(const Vector& x) const;

  /// Scalar piece of a separable h.
  double coordinate_value(double x) const;

  /// Exact proximal point. Throws on alpha <= 0 or dimension mismatch.
  Vector prox(const Vector& v, double alpha) const;

  /// (1/2alpha)||x - v||^2 + h(x).
  double prox_objective(const Vector& x, const Vector& v, double alpha) const;

  /// Bound on ||z|| over subgradients z of h at points with ||x|| <= radius.
  /// Empty for the box indicator, whose subgradients are unbounded.
  std::optional<double> subgradient_bound(double radius) const;

  /// True when subgradient_bound depends on the radius.
  bool bound_needs_radius() const noexcept;

 private:
  Regularizer(RegularizerKind kind, int dim, double lambda1, double lambda2, double lo, double hi);

  void check_dim(const Vector& v, const char* where) const;

  RegularizerKind kind_;
  int dim_;
  double lambda1_ = 0.0;
  double lambda2_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

double soft_threshold(double v, double threshold);

struct InexactProxCheck {
  bool accepted = false;
  /// Objective gap above the exact minimum minus epsilon; positive iff rejected.
  double excess = 0.0;
  /// Objective gap above the exact minimum.
  double gap = 0.0;
};

/// Is candidate an epsilon-minimizer of the prox objective at v?
InexactProxCheck check_inexact_prox(const Regularizer& h, const Vector& candidate, const Vector& v, double alpha,
                                    double epsilon);

/// (1/alpha)(x_prev - x_next) - g_bar - e - (1/alpha) p: the element of the
/// epsilon-subdifferential of h at x_next certified by an inexact prox step.
Vector prox_residual_subgradient(const Vector& x_prev, const Vector& x_next, const Vector& g_bar, const Vector& e,
                                 const Vector& p, double alpha);

}  // namespace dpg
