#pragma once

// The interval avatars: the cocycle on vector fields vanishing at interval
// endpoints, its exact evaluation on the sin basis, the exact-arithmetic
// non-triviality certificate, the group/segment-groupoid cocycle, and the
// multi-break interval extension.

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "bvir/expr.hpp"
#include "bvir/geometry.hpp"
#include "bvir/rational.hpp"

namespace bvir {

// Smooth vector field u(x) d/dx on [a, b]; the cocycle domain additionally
// requires u(a) = u(b) = 0 (checked, recorded in vanishing()).
class IntervalField {
 public:
  IntervalField(double a, double b, Expression profile,
                double tol = defaults::tol_cont);

  double a() const { return a_; }
  double b() const { return b_; }
  const Expression& profile() const { return profile_; }
  bool vanishing() const { return vanishing_; }

  double deriv(double x, int k) const;  // k-th x-derivative, k <= 4

 private:
  double a_, b_;
  Expression profile_;
  std::array<Expression, Jet::kMaxOrder + 1> derivs_;
  bool vanishing_;
};

// e_m = sin(m x) d/dx on [0, pi].
IntervalField sin_basis_field(int m);

// Integral of u_x v_xx - u_xx v_x over [a, b]; both fields must vanish at
// the endpoints.
double omega_interval(const IntervalField& u, const IntervalField& v,
                      const QuadratureSpec& q = {});

// Bracket of sin-basis fields as exact coefficients on basis indices, with
// the normalization e_{-k} = -e_k and e_0 = 0.
struct SinBasisTerm {
  int index;       // >= 1
  Rational coeff;
};
std::vector<SinBasisTerm> sin_basis_bracket(int m, int n);

// Exact Omega(e_m, e_n): 2mn(m^2+n^2)/(m^2-n^2) for opposite parity, else 0.
// m = n is rejected (the closed form is singular; antisymmetry forces 0).
Rational sin_basis_omega(int m, int n);

struct CertificateRow {
  long long k, l;         // odd, 1 < l < k
  Rational lambda_k, lambda_l;
  Rational lhs;           // (k^4 - l^4) / (4 k l)
  Rational rhs;           // k lambda_l - l lambda_k
  Rational residual;      // lhs - rhs
};

struct Certificate {
  std::vector<CertificateRow> rows;
  bool valid = false;  // some residual is nonzero
  std::optional<std::pair<long long, long long>> smallest_violation;
};

// Exact obstruction to writing the cocycle as a coboundary: with
// lambda_1 = 0 the l = 1 rows force lambda_k = -(k^4 - 1)/(4k); the rows
// with l >= 3 then fail, certifying non-triviality. K must be odd, >= 5.
Certificate nontriviality_certificate(int K);

// Orientation-preserving diffeomorphism [a, b] -> [map(a), map(b)]; the
// arrow type of the segment groupoid. Fixed-endpoint arrows are the special
// case trg = src.
class IntervalDiffeo {
 public:
  IntervalDiffeo(double a, double b, const Expression& map,
                 double delta_min = defaults::delta_min);
  static IntervalDiffeo identity(double a, double b);

  double src_a() const { return a_; }
  double src_b() const { return b_; }
  double trg_a() const { return ta_; }
  double trg_b() const { return tb_; }
  bool fixes_endpoints(double tol = defaults::tol_cont) const;

  Jet jet(double x, int order) const;

 private:
  IntervalDiffeo(double a, double b, double ta, double tb,
                 std::shared_ptr<const ScalarMap> impl)
      : a_(a), b_(b), ta_(ta), tb_(tb), impl_(std::move(impl)) {}
  friend IntervalDiffeo compose_interval(const IntervalDiffeo&, const IntervalDiffeo&,
                                         double);
  double a_, b_, ta_, tb_;
  std::shared_ptr<const ScalarMap> impl_;
};

// Composition phi . psi, defined when src(phi) = trg(psi).
IntervalDiffeo compose_interval(const IntervalDiffeo& phi, const IntervalDiffeo& psi,
                                double tol = defaults::tol_cont);

// Group/groupoid cocycle: integral of log(phi_x . psi) dlog(psi_x) over the
// source interval of psi. Requires src(phi) = trg(psi).
double chi_interval(const IntervalDiffeo& phi, const IntervalDiffeo& psi,
                    const QuadratureSpec& q = {}, double tol = defaults::tol_cont);

// Continuous field on [a, b] = [q_0, q_n], smooth on each closed piece of
// the partition and vanishing at every q_j.
class MultibreakField {
 public:
  MultibreakField(std::vector<double> partition, std::vector<Expression> pieces,
                  double tol = defaults::tol_cont);

  int segments() const { return static_cast<int>(pieces_.size()); }
  const std::vector<double>& partition() const { return partition_; }
  IntervalField segment(int j) const;

 private:
  std::vector<double> partition_;
  std::vector<Expression> pieces_;
};

// Per-subinterval cocycle vector.
std::vector<double> multibreak_interval_cocycles(const MultibreakField& u,
                                                 const MultibreakField& v,
                                                 const QuadratureSpec& q = {});

}  // namespace bvir
