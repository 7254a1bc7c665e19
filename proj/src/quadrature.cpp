#include <cmath>
#include <limits>

#include "bvir/geometry.hpp"

namespace bvir {

namespace {

constexpr int kPanelOrder = 15;

struct PanelRule {
  double node[kPanelOrder];    // on [-1, 1]
  double weight[kPanelOrder];
};

// Gauss-Legendre nodes via Newton iteration on the Legendre recurrence;
// converges to machine precision in a handful of steps.
PanelRule build_rule() {
  PanelRule rule{};
  const int n = kPanelOrder;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pd = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pd = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pd;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    rule.node[i] = x;
    rule.weight[i] = 2.0 / ((1.0 - x * x) * pd * pd);
  }
  return rule;
}

const PanelRule& rule() {
  static const PanelRule r = build_rule();
  return r;
}

double gl15(const std::function<double(double)>& f, double a, double b) {
  const PanelRule& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kPanelOrder; ++i) sum += r.weight[i] * f(mid + half * r.node[i]);
  return sum * half;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double tol, int depth, int max_depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl15(f, a, mid);
  const double right = gl15(f, mid, b);
  const double err = std::fabs(whole - left - right);
  const double noise_floor =
      8.0 * std::numeric_limits<double>::epsilon() * (std::fabs(left) + std::fabs(right));
  if (err <= tol || err <= noise_floor) return left + right;
  if (depth >= max_depth)
    throw QuadratureError("quadrature did not converge on a panel", a, b, err);
  return adapt(f, a, mid, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, mid, b, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate_arc(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& q) {
  if (q.abs_tol <= 0.0) throw GeometryError("quadrature abs_tol must be positive");
  if (a == b) return 0.0;
  if (a > b) return -integrate_arc(f, b, a, q);
  return adapt(f, a, b, gl15(f, a, b), q.abs_tol, 0, q.max_depth);
}

}  // namespace bvir
