#pragma once

// The Lie algebroid of broken vector fields on the circle: fiber elements
// (BrokenField) and sections over the space of break configurations, the
// bracket with its correction terms, the anchor, per-arc cocycles, the
// coboundary of sampling 1-forms, isotropy algebras, and the centrally
// extended bracket.

#include <functional>
#include <optional>
#include <vector>

#include "bvir/expr.hpp"
#include "bvir/geometry.hpp"

namespace bvir {

// Continuous vector field u(x) d/dx with breaks at a fixed configuration:
// one expression per closed arc, values matching at the breaks. Fields are
// 2pi-periodic functions of the lift coordinate.
class BrokenField {
 public:
  BrokenField(BreakConfig breaks, std::vector<Expression> arc_profiles,
              double tol_cont = defaults::tol_cont);
  BrokenField(BreakConfig breaks, const Expression& profile);  // smooth profile

  const BreakConfig& breaks() const { return breaks_; }
  int arcs() const { return breaks_.size(); }
  const Expression& arc_profile(int i) const { return profiles_[i][0]; }
  const Expression& arc_deriv_expr(int i, int k) const { return profiles_[i][k]; }

  double value(double x, Side side = Side::Auto) const { return deriv(x, 0, side); }
  double deriv(double x, int k, Side side = Side::Auto) const;

  bool vanishes_at_breaks(double tol = defaults::tol_cont) const;

 private:
  BreakConfig breaks_;
  // per arc: profile and x-derivatives up to order 4
  std::vector<std::array<Expression, Jet::kMaxOrder + 1>> profiles_;
};

// Family of broken fields u(x, p) d/dx over the base of break
// configurations, smooth in all arguments (expression-backed).
class Section {
 public:
  Section(int n, Expression profile);

  int n() const { return n_; }
  const Expression& profile() const { return xderivs_[0]; }
  const Expression& x_deriv(int k) const { return xderivs_[k]; }
  Expression p_deriv(int i) const;     // d/dp_i, i in 1..n
  Expression at_break(int i) const;    // u(p_i, p), an expression in p only

  BrokenField at(const BreakConfig& p) const;  // specialize the family
  double eval(double x, const BreakConfig& p) const;
  double eval_x_deriv(int k, double x, const BreakConfig& p) const;

 private:
  int n_;
  std::array<Expression, Jet::kMaxOrder + 1> xderivs_;
};

Binding bind_config(const BreakConfig& p);  // p_i slots bound to angles

// Anchor: values of the section at the break points.
std::vector<double> anchor(const Section& u, const BreakConfig& p);

// Algebroid bracket of sections:
//   (u v_x - v u_x) + sum_i (u(p_i,p) dv/dp_i - v(p_i,p) du/dp_i).
Section bracket_sections(const Section& u, const Section& v);

// Embedding into vector fields on S^1 x B tangent to the walls x = p_i:
// components ordered (x, p_1, ..., p_n).
struct EmbeddedField {
  int n = 0;
  std::vector<Expression> components;  // size n + 1
};
EmbeddedField embed_section(const Section& u);
EmbeddedField lie_bracket(const EmbeddedField& X, const EmbeddedField& Y);

// Per-arc cocycle: integral of u_x v_xx - u_xx v_x over arc i.
double omega_arc(const BrokenField& u, const BrokenField& v, int arc,
                 const QuadratureSpec& q = {});
double omega_arc(const Section& u, const Section& v, const BreakConfig& p, int arc,
                 const QuadratureSpec& q = {});

// A 2-form on sections, evaluated at a base point.
using TwoForm = std::function<double(const Section&, const Section&, const BreakConfig&)>;
TwoForm omega_two_form(int arc, const QuadratureSpec& q = {});

// Derivative of a base scalar along the anchor direction of u: central
// differences in p with one Richardson step.
double anchor_lie_derivative(const Section& u,
                             const std::function<double(const BreakConfig&)>& F,
                             const BreakConfig& p, double h = 1e-4,
                             bool richardson = true);

// L_{#u} Omega(v,w) - Omega([[u,v]], w) + cyclic; vanishes for cocycles.
double algebroid_cocycle_residual(const TwoForm& omega, const Section& u,
                                  const Section& v, const Section& w,
                                  const BreakConfig& p, double h = 1e-4);

// Sampling 1-form: finite sum of weight(p) * (d^k u/dx^k)(location(p), p).
struct OneFormTerm {
  Expression weight;    // in p
  Expression location;  // in p
  int deriv_order = 0;
};
class OneForm {
 public:
  OneForm() = default;
  explicit OneForm(std::vector<OneFormTerm> terms) : terms_(std::move(terms)) {}
  const std::vector<OneFormTerm>& terms() const { return terms_; }
  Expression apply(const Section& u) const;  // expression in p

 private:
  std::vector<OneFormTerm> terms_;
};

// dTheta(u,v) = L_{#u} Theta(v) - L_{#v} Theta(u) - Theta([[u,v]]),
// evaluated symbolically.
TwoForm coboundary(const OneForm& theta);

// Central directions carried by extended sections: symbolic base functions
// where possible, plain evaluators otherwise (iterated brackets produce
// quadrature-valued components).
class CentralComponent {
 public:
  CentralComponent() = default;  // zero
  CentralComponent(Expression symbolic);  // NOLINT: implicit by design
  explicit CentralComponent(std::function<double(const BreakConfig&)> fn);

  double eval(const BreakConfig& p) const;
  const std::optional<Expression>& symbolic() const { return sym_; }
  bool is_zero() const { return !sym_ && !fn_; }

 private:
  std::optional<Expression> sym_;
  std::function<double(const BreakConfig&)> fn_;
};

struct ExtendedSection {
  Section section;
  std::vector<CentralComponent> central;  // one per break
};

// Lie derivative of a central component along the anchor of u: exact when
// the component is symbolic, finite differences otherwise.
double lie_central(const Section& u, const CentralComponent& g, const BreakConfig& p,
                   double h = 1e-4);

// Extended bracket with arc coefficients c:
//   ([u,v], c_i Omega_i(u,v) + L_{#u} g_i - L_{#v} f_i).
ExtendedSection extended_bracket(const ExtendedSection& a, const ExtendedSection& b,
                                 const std::vector<double>& c,
                                 const QuadratureSpec& q = {}, double h = 1e-4);

// Bracket on the isotropy algebra at p (fields vanishing at every break).
BrokenField isotropy_bracket(const BrokenField& u, const BrokenField& v,
                             double tol = defaults::tol_cont);

// Restriction of the arc cocycle to the isotropy algebra at p.
std::function<double(const BrokenField&, const BrokenField&)>
restrict_cocycle_to_isotropy(int arc, const BreakConfig& p, const QuadratureSpec& q = {});

}  // namespace bvir
