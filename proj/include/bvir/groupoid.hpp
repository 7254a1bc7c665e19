#pragma once

// The groupoid of broken circle diffeomorphisms: arrows with matching break
// configurations, partial composition, per-arc Bott-type cocycles, the
// centrally extended multiplication, the boundary-corrected classical Bott
// relation, and the group of bisections.

#include <stdexcept>
#include <vector>

#include "bvir/algebroid.hpp"
#include "bvir/expr.hpp"
#include "bvir/geometry.hpp"

namespace bvir {

struct CompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arrow: a piecewise-smooth degree-1 circle map together with its source
// and target break configurations. The map may be smooth (empty break
// list); its genuine breaks must lie inside the source configuration.
class BrokenDiffeo {
 public:
  BrokenDiffeo(PiecewiseJetMap map, BreakConfig src, bool validate = true);

  static BrokenDiffeo identity(const BreakConfig& p);
  static BrokenDiffeo rotation(const BreakConfig& p, double angle);
  static BrokenDiffeo from_lift(const BreakConfig& p, const Expression& lift);
  static BrokenDiffeo from_arcs(const BreakConfig& p, std::vector<Expression> arcs);

  const PiecewiseJetMap& map() const { return map_; }
  const BreakConfig& src() const { return src_; }
  const BreakConfig& trg() const { return trg_; }

  // Index in trg's canonical order of the image of source break i. Arc i of
  // src corresponds to arc trg_arc_of(i) of trg under the arrow.
  int trg_arc_of(int i) const;

  BrokenDiffeo inverse() const;

 private:
  PiecewiseJetMap map_;
  BreakConfig src_, trg_;
};

// Composition phi . psi, defined when src(phi) = trg(psi); mismatch is a
// first-class error, never a silent merge.
BrokenDiffeo compose_diffeos(const BrokenDiffeo& phi, const BrokenDiffeo& psi,
                             double tol = defaults::tol_cont);

// chi_i(phi, psi) = integral over arc i of src(psi) of
// log(phi_x . psi) dlog(psi_x). Requires composability.
double chi_arc(const BrokenDiffeo& phi, const BrokenDiffeo& psi, int arc,
               const QuadratureSpec& q = {});
std::vector<double> chi(const BrokenDiffeo& phi, const BrokenDiffeo& psi,
                        const QuadratureSpec& q = {});

// chi(phi, psi eta) + chi(psi, eta) - chi(phi psi, eta) - chi(phi, psi),
// componentwise over the arcs of src(eta); the chi(phi, psi) components are
// transported through eta's arc correspondence.
std::vector<double> groupoid_cocycle_residual(const BrokenDiffeo& phi,
                                              const BrokenDiffeo& psi,
                                              const BrokenDiffeo& eta,
                                              const QuadratureSpec& q = {});

// Arrow of the extended groupoid: (arrow, charge in R^n), charge indexed by
// the arcs of the arrow's source configuration.
struct ExtendedDiffeo {
  BrokenDiffeo arrow;
  std::vector<double> charge;
};

// (phi, t) (psi, s) = (phi psi, t + s + chi(phi, psi)); the t components are
// carried through psi's arc correspondence.
ExtendedDiffeo extended_multiply(const ExtendedDiffeo& a, const ExtendedDiffeo& b,
                                 const QuadratureSpec& q = {});
// Inverse for the extended multiplication: (phi, t)^{-1} = (phi^{-1}, t')
// with (phi, t)(phi^{-1}, t') = (id, 0).
ExtendedDiffeo extended_inverse(const ExtendedDiffeo& a, const QuadratureSpec& q = {});

// Both sides of the boundary-corrected classical Bott relation:
//   sum_i chi_i = integral of log((phi.psi)_x) dlog(psi_x)
//                 + 1/2 sum_i (log^2 psi_x(p_i+) - log^2 psi_x(p_i-)).
struct BottComparison {
  double chi_sum;
  double classical_integral;
  double boundary_sum;
  double lhs() const { return chi_sum; }
  double rhs() const { return classical_integral + boundary_sum; }
};
BottComparison bott_boundary_relation(const BrokenDiffeo& phi, const BrokenDiffeo& psi,
                                      const QuadratureSpec& q = {});

// Bisection: an expression-backed family of arrows Phi(x, p) over the base,
// with base map f_i(p) = Phi(p_i, p).
class Bisection {
 public:
  Bisection(int n, Expression family);
  static Bisection identity(int n);

  int n() const { return n_; }
  const Expression& family() const { return family_; }
  Expression base_component(int i) const;  // f_i(p), i in 1..n
  BrokenDiffeo arrow_at(const BreakConfig& p) const;
  std::vector<double> base_map(const BreakConfig& p) const;

  // Jacobian determinant of the base map at p (sampled invertibility).
  double base_jacobian(const BreakConfig& p) const;

 private:
  int n_;
  Expression family_;
};

// Pointwise-in-p composition after base transport:
//   (Phi Psi)(x, p) = Phi(Psi(x, p), f_Psi(p)).
Bisection bisection_compose(const Bisection& Phi, const Bisection& Psi);

}  // namespace bvir
