#include "dpg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dpg::oracle {

double golden_section(const std::function<double(double)>& f, double lo, double hi, double width) {
  if (!(lo <= hi)) throw std::invalid_argument("golden_section: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 500 && (b - a) > width; ++iter) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  // The bracket may end on a kink; take the best of the probes and ends.
  double best = 0.5 * (a + b);
  double fbest = f(best);
  for (double x : {a, b, c, d}) {
    double fx = f(x);
    if (fx < fbest) {
      fbest = fx;
      best = x;
    }
  }
  return best;
}

Vector prox(const Regularizer& h, const Vector& v, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("oracle::prox: step size must be > 0");
  Vector z(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double vj = v[j];
    const double radius = 10.0 * alpha * (h.lambda1() + 2.0 * h.lambda2() * std::abs(vj) + 1.0);
    double lo = vj - radius;
    double hi = vj + radius;
    if (h.kind() == RegularizerKind::box) {
      lo = std::clamp(lo, h.lo(), h.hi());
      hi = std::clamp(hi, h.lo(), h.hi());
    }
    auto objective = [&](double x) { return h.coordinate_value(x) + (x - vj) * (x - vj) / (2.0 * alpha); };
    z[j] = golden_section(objective, lo, hi);
  }
  return z;
}

ProxCheckResult compare_prox(RegularizerKind kind, int trials, unsigned long long seed, int dim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> step(0.01, 2.0);
  std::uniform_real_distribution<double> weight(0.0, 5.0);
  std::uniform_real_distribution<double> bound(-5.0, 5.0);

  ProxCheckResult result;
  for (int t = 0; t < trials; ++t) {
    const double alpha = step(rng);
    const double l1 = weight(rng);
    const double l2 = weight(rng);
    double lo = bound(rng);
    double hi = bound(rng);
    if (lo > hi) std::swap(lo, hi);
    Regularizer h = [&] {
      switch (kind) {
        case RegularizerKind::zero:
          return Regularizer::zero(dim);
        case RegularizerKind::l1:
          return Regularizer::l1(dim, l1);
        case RegularizerKind::squared_l2:
          return Regularizer::squared_l2(dim, l2);
        case RegularizerKind::elastic_net:
          return Regularizer::elastic_net(dim, l1, l2);
        case RegularizerKind::box:
          return Regularizer::box(dim, lo, hi);
      }
      throw std::logic_error("compare_prox: unknown kind");
    }();
    Vector v(dim);
    for (int j = 0; j < dim; ++j) v[j] = coord(rng);
    const Vector closed = h.prox(v, alpha);
    const Vector numeric = prox(h, v, alpha);
    result.max_deviation = std::max(result.max_deviation, (closed - numeric).cwiseAbs().maxCoeff());
    ++result.trials;
  }
  return result;
}

}  // namespace dpg::oracle
