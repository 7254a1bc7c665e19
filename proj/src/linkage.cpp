#include "bvir/linkage.hpp"

#include <cmath>

namespace bvir {

namespace {

// RK4 on (phi, phi_x, phi_xx):
//   d/dt phi    = u(phi)
//   d/dt phi_x  = u_x(phi) phi_x
//   d/dt phi_xx = u_xx(phi) phi_x^2 + u_x(phi) phi_xx
// Integrating the joint system with shared stages makes the derivative
// components exactly the derivatives of the discrete value map.
struct FlowState {
  double y[3];
};

class FlowMap final : public ScalarMap {
 public:
  FlowMap(BrokenField u, double time, FlowSpec spec)
      : u_(std::move(u)), time_(time), spec_(spec) {}

  Jet jet(double x, int order, Side) const override {
    if (order > 2) throw GeometryError("flow maps provide jets up to order 2 only");
    FlowState s{{x, 1.0, 0.0}};
    integrate(s, order);
    Jet j(order);
    for (int k = 0; k <= order; ++k) j[k] = s.y[k];
    return j;
  }

  int max_order() const override { return 2; }

 private:
  void rhs(const FlowState& s, int order, FlowState& out) const {
    out.y[0] = u_.value(s.y[0]);
    if (order >= 1) out.y[1] = u_.deriv(s.y[0], 1) * s.y[1];
    if (order >= 2)
      out.y[2] = u_.deriv(s.y[0], 2) * s.y[1] * s.y[1] + u_.deriv(s.y[0], 1) * s.y[2];
  }

  void integrate(FlowState& s, int order) const {
    const int steps = std::max(1, static_cast<int>(std::ceil(
                                      spec_.steps_per_unit * std::fabs(time_))));
    const double dt = time_ / steps;
    FlowState k1, k2, k3, k4, tmp;
    for (int step = 0; step < steps; ++step) {
      rhs(s, order, k1);
      for (int i = 0; i <= order; ++i) tmp.y[i] = s.y[i] + 0.5 * dt * k1.y[i];
      rhs(tmp, order, k2);
      for (int i = 0; i <= order; ++i) tmp.y[i] = s.y[i] + 0.5 * dt * k2.y[i];
      rhs(tmp, order, k3);
      for (int i = 0; i <= order; ++i) tmp.y[i] = s.y[i] + dt * k3.y[i];
      rhs(tmp, order, k4);
      for (int i = 0; i <= order; ++i)
        s.y[i] += dt / 6.0 * (k1.y[i] + 2.0 * (k2.y[i] + k3.y[i]) + k4.y[i]);
    }
  }

  BrokenField u_;
  double time_;
  FlowSpec spec_;
};

}  // namespace

BrokenDiffeo flow(const BrokenField& u, double time, const FlowSpec& spec) {
  if (spec.steps_per_unit < 100)
    throw GeometryError("flow spec requires at least 100 steps per unit time");
  auto impl = std::make_shared<FlowMap>(u, time, spec);
  const std::vector<double> breaks = u.breaks().angles();
  PiecewiseJetMap map = PiecewiseJetMap::from_impl(breaks, impl, 2);

  // Step-size sanity: the sampled map must stay strictly monotone.
  const double base = breaks.front();
  double prev = map.value(base);
  for (int s = 1; s <= 128; ++s) {
    const double x = base + kTwoPi * s / 128.0;
    const double val = map.value(x);
    if (!(val > prev))
      throw GeometryError("flow lost monotonicity; refine the step size");
    prev = val;
  }
  return BrokenDiffeo(std::move(map), u.breaks(), false);
}

double derive_algebroid_cocycle(const BrokenField& u, const BrokenField& v,
                                const BreakConfig& p, int arc, double h,
                                const FlowSpec& spec, const QuadratureSpec& q,
                                bool* noise_warning) {
  if (!u.breaks().approx_equal(p) || !v.breaks().approx_equal(p))
    throw GeometryError("fields must be broken at the given base configuration");
  if (!u.vanishes_at_breaks() || !v.vanishes_at_breaks())
    throw GeometryError(
        "groupoid-to-algebroid differentiation requires isotropy fields");
  if (h <= 0.0) throw GeometryError("difference step must be positive");

  const BrokenDiffeo phi_plus = flow(u, h, spec);
  const BrokenDiffeo phi_minus = flow(u, -h, spec);
  const BrokenDiffeo psi_plus = flow(v, h, spec);
  const BrokenDiffeo psi_minus = flow(v, -h, spec);

  auto D = [&](const BrokenDiffeo& a, const BrokenDiffeo& b) {
    return chi_arc(a, b, arc, q) - chi_arc(b, a, arc, q);
  };
  const double dpp = D(phi_plus, psi_plus);
  const double dpm = D(phi_plus, psi_minus);
  const double dmp = D(phi_minus, psi_plus);
  const double dmm = D(phi_minus, psi_minus);
  if (noise_warning) {
    const double scale = std::max({std::fabs(dpp), std::fabs(dpm), std::fabs(dmp),
                                   std::fabs(dmm)});
    *noise_warning = scale < 1e-11;
  }
  return (dpp - dpm - dmp + dmm) / (4.0 * h * h);
}

}  // namespace bvir
