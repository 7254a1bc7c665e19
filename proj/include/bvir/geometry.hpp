#pragma once

// Circle geometry: break configurations, order-k jets, piecewise
// differentiable circle maps stored as degree-1 lifts, jet composition and
// inversion, and adaptive quadrature over lift arcs.

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "bvir/expr.hpp"

namespace bvir {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

namespace defaults {
inline constexpr double eps_sep = 1e-6;    // minimal gap between breaks
inline constexpr double tol_cont = 1e-9;   // continuity / matching tolerance
inline constexpr double delta_min = 1e-8;  // lower bound on diffeo derivatives
}  // namespace defaults

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// n cyclically ordered break angles, canonicalized to ascending order in
// [0, 2pi) with the smallest angle first.
class BreakConfig {
 public:
  explicit BreakConfig(std::vector<double> angles, double eps_sep = defaults::eps_sep);

  int size() const { return static_cast<int>(angles_.size()); }
  double angle(int i) const { return angles_[i]; }
  const std::vector<double>& angles() const { return angles_; }

  // Arc i (0-based) is [p_i, p_{i+1}] on the lift, with p_n = p_0 + 2pi.
  double arc_begin(int i) const { return angles_[i]; }
  double arc_end(int i) const {
    return i + 1 < size() ? angles_[i + 1] : angles_[0] + kTwoPi;
  }

  bool approx_equal(const BreakConfig& other, double tol = defaults::tol_cont) const;

 private:
  std::vector<double> angles_;
};

// Position value together with derivatives up to `order` (order <= 4).
class Jet {
 public:
  explicit Jet(int order) : order_(order) { v_.fill(0.0); }
  static Jet constant(double value, int order) {
    Jet j(order);
    j.v_[0] = value;
    return j;
  }

  int order() const { return order_; }
  double value() const { return v_[0]; }
  double d(int k) const { return v_[k]; }  // k-th derivative, k <= order
  double& operator[](int k) { return v_[k]; }
  double operator[](int k) const { return v_[k]; }

  static constexpr int kMaxOrder = 4;

 private:
  std::array<double, kMaxOrder + 1> v_;
  int order_;
};

enum class Side { Left, Right, Auto };

// A scalar map of the lift line exposing one-sided jets. Implementations:
// piecewise expressions, compositions, inverses, numeric flows.
class ScalarMap {
 public:
  virtual ~ScalarMap() = default;
  virtual Jet jet(double x, int order, Side side) const = 0;
  virtual int max_order() const = 0;
};

// Degree-1 circle map as a strictly increasing lift F with
// F(x + 2pi) = F(x) + 2pi, piecewise smooth between break angles.
class PiecewiseJetMap {
 public:
  // Smooth map from one lift expression in x (must itself be a lift).
  static PiecewiseJetMap from_lift(const Expression& lift);
  // Broken map: one expression per arc of `breaks`, matching continuously.
  static PiecewiseJetMap from_arcs(const BreakConfig& breaks, std::vector<Expression> arcs);
  static PiecewiseJetMap identity();
  static PiecewiseJetMap rotation(double a);
  // Wrap an existing implementation (used by flows).
  static PiecewiseJetMap from_impl(std::vector<double> breaks,
                                   std::shared_ptr<const ScalarMap> impl, int max_order);

  Jet jet(double x, int order, Side side = Side::Auto, bool strict = false) const;
  double value(double x) const { return jet(x, 0).value(); }

  // Break angles in [0, 2pi), ascending; empty for globally smooth maps.
  const std::vector<double>& breaks() const { return breaks_; }
  int max_order() const { return max_order_; }

  // Sampled diffeomorphism validation: continuity at breaks, one-sided
  // derivative >= delta_min on every closed arc, degree 1.
  void validate_diffeo(double delta_min = defaults::delta_min,
                       double tol_cont = defaults::tol_cont) const;

 private:
  std::vector<double> breaks_;
  std::shared_ptr<const ScalarMap> impl_;
  int max_order_ = 0;
};

Jet jet_of(const PiecewiseJetMap& m, double x, int order, Side side = Side::Auto,
           bool strict = false);

// Jets of f(g(x)) from jets of f and g (Faa di Bruno through order 3).
Jet compose_jets(const Jet& jf, const Jet& jg, int order);
// Jets of the inverse map at y = f(x), given the jet of f at x.
Jet invert_jet(const Jet& jf, int order);

// Composite f . g. Break set: g^{-1}(breaks f) union breaks g. In
// groupoid-strict mode the two must already match (src(f) = trg(g)).
PiecewiseJetMap compose_maps(const PiecewiseJetMap& f, const PiecewiseJetMap& g,
                             bool groupoid_strict = false,
                             double tol = defaults::tol_cont);

// Inverse of a monotone lift; values by safeguarded Newton/bisection
// (tolerance 1e-12), jets by the inverse-function formulas. Breaks map
// forward: breaks(f^{ -1}) = f(breaks f).
PiecewiseJetMap invert_map(const PiecewiseJetMap& f);

// Solve f(x) = y on the lift for a monotone degree-1 map.
double invert_lift_value(const PiecewiseJetMap& f, double y, double tol = 1e-12);

struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_depth = 40;
};

struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& msg, double a, double b, double estimate)
      : std::runtime_error(msg), worst_a(a), worst_b(b), error_estimate(estimate) {}
  double worst_a, worst_b, error_estimate;
};

// Adaptive Gauss-Legendre (15-point panels) over a lift arc [a, b].
double integrate_arc(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& q = {});

}  // namespace bvir
