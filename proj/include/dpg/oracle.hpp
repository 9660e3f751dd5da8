#pragma once

// Derivative-free reference computations used to cross-check closed forms.
// Nothing here calls the closed-form prox.

#include "dpg/prox.hpp"
#include "dpg/types.hpp"

#include <functional>

namespace dpg::oracle {

/// Golden-section search for the minimizer of a unimodal f on [lo, hi],
/// stopping once the bracket is narrower than width.
double golden_section(const std::function<double(double)>& f, double lo, double hi, double width = 1e-9);

/// Coordinatewise prox of a separable regularizer by golden-section search of
///   h_j(z) + (z - v_j)^2 / (2 alpha)
/// on [v_j - r, v_j + r], r = 10 alpha (lambda1 + 2 lambda2 |v_j| + 1),
/// intersected with [lo, hi] for the box.
Vector prox(const Regularizer& h, const Vector& v, double alpha);

struct ProxCheckResult {
  int trials = 0;
  double max_deviation = 0.0;
};

/// Random (v, alpha, lambda) triples for the given kind: v_j in [-10, 10],
/// alpha in [0.01, 2], lambdas in [0, 5], box bounds in [-5, 5].
ProxCheckResult compare_prox(RegularizerKind kind, int trials, unsigned long long seed, int dim = 3);

}  // namespace dpg::oracle
