#include "bvir/interval.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace bvir;

namespace {

const double kPi = 3.14159265358979323846;

Expression X() { return Expression::variable(kVarX); }

// Fixed-endpoint diffeo of [0, 1]: x + sum of sin(k pi x) bumps.
IntervalDiffeo unit_interval_diffeo(const std::vector<double>& coeffs) {
  Expression e = X();
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    e = e + coeffs[k] * sin((static_cast<double>(k + 1) * kPi) * X());
  return IntervalDiffeo(0.0, 1.0, e);
}

double cocycle_residual(const IntervalDiffeo& phi, const IntervalDiffeo& psi,
                        const IntervalDiffeo& eta, const QuadratureSpec& q = {}) {
  return chi_interval(phi, compose_interval(psi, eta), q) + chi_interval(psi, eta, q) -
         chi_interval(compose_interval(phi, psi), eta, q) - chi_interval(phi, psi, q);
}

}  // namespace

TEST_SUITE_BEGIN("interval");

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(3, 4) * Rational(2, 9)) == Rational(1, 6));
  CHECK((Rational(1, 2) / Rational(3, 2)) == Rational(1, 3));
  CHECK(Rational(-20, 3).str() == "-20/3");
  CHECK(Rational(7).str() == "7");
  CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1, 3) / Rational(0), std::domain_error);
  const long long big = 4000000000LL;
  CHECK_THROWS_AS(Rational(big, 1) * Rational(big, 1) * Rational(big, 1),
                  RationalOverflow);
}

TEST_CASE("interval cocycle on the sin basis") {
  const IntervalField e1 = sin_basis_field(1);
  const IntervalField e2 = sin_basis_field(2);
  const IntervalField e4 = sin_basis_field(4);
  CHECK(std::abs(omega_interval(e1, e2) - (-20.0 / 3.0)) < 1e-9);
  CHECK(std::abs(omega_interval(e2, e4)) < 1e-9);
  CHECK(std::abs(omega_interval(e2, e2)) < 1e-12);

  // fields that do not vanish at the endpoints are rejected
  const IntervalField bad(0.0, kPi, cos(X()));
  CHECK(!bad.vanishing());
  CHECK_THROWS_AS(omega_interval(bad, e1), GeometryError);
}

TEST_CASE("sin basis bracket coefficients") {
  // [e_1, e_2] = 1/2 e_3 - 3/2 e_1
  const auto terms = sin_basis_bracket(1, 2);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].index == 3);
  CHECK(terms[0].coeff == Rational(1, 2));
  CHECK(terms[1].index == 1);
  CHECK(terms[1].coeff == Rational(-3, 2));

  CHECK(sin_basis_bracket(4, 4).empty());
}

TEST_CASE("sin basis bracket against symbolic expansion") {
  // Oracle: expand u v_x - u_x v symbolically and compare with the
  // coefficient form at sample points.
  std::mt19937_64 rng(101);
  for (int m = 1; m <= 8; ++m) {
    for (int n = 1; n <= 8; ++n) {
      const Expression u = sin(static_cast<double>(m) * X());
      const Expression v = sin(static_cast<double>(n) * X());
      const Expression direct = u * v.derivative(kVarX) - u.derivative(kVarX) * v;
      Expression series = Expression::constant(0.0);
      for (const SinBasisTerm& t : sin_basis_bracket(m, n))
        series = series + t.coeff.to_double() * sin(static_cast<double>(t.index) * X());
      for (int pt = 0; pt < 12; ++pt) {
        Binding b;
        b.set(kVarX, oracles::uniform(rng, 0.0, kPi));
        CHECK(std::abs(direct.eval(b) - series.eval(b)) < 1e-12);
      }
    }
  }
}

TEST_CASE("exact sin basis cocycle values") {
  CHECK(sin_basis_omega(1, 2) == Rational(-20, 3));
  CHECK(sin_basis_omega(2, 1) == Rational(20, 3));
  CHECK(sin_basis_omega(1, 3) == Rational(0));
  CHECK(sin_basis_omega(1, 4) == Rational(2 * 4 * 17, 1 - 16));
  CHECK_THROWS_AS(sin_basis_omega(3, 3), std::invalid_argument);
  // antisymmetry, exactly
  for (int m = 1; m <= 10; ++m)
    for (int n = 1; n <= 10; ++n)
      if (m != n) CHECK(sin_basis_omega(m, n) == -sin_basis_omega(n, m));
}

TEST_CASE("quadrature agrees with the exact sin basis table") {
  for (int m = 1; m <= 10; ++m) {
    for (int n = m + 1; n <= 10; ++n) {
      const double exact = sin_basis_omega(m, n).to_double();
      const double quad = omega_interval(sin_basis_field(m), sin_basis_field(n));
      CHECK(std::abs(quad - exact) < 1e-8);
    }
  }
}

TEST_CASE("non-triviality certificate") {
  const Certificate cert = nontriviality_certificate(7);
  CHECK(cert.valid);
  REQUIRE(cert.smallest_violation.has_value());
  CHECK(cert.smallest_violation->first == 5);
  CHECK(cert.smallest_violation->second == 3);

  bool found53 = false, found31 = false;
  for (const CertificateRow& row : cert.rows) {
    if (row.l == 1) CHECK(row.residual.is_zero());  // defining rows
    if (row.k == 3 && row.l == 1) {
      found31 = true;
      CHECK(row.lambda_k == Rational(-20, 3));
    }
    if (row.k == 5 && row.l == 3) {
      found53 = true;
      CHECK(row.lambda_l == Rational(-20, 3));
      CHECK(row.lambda_k == Rational(-156, 5));
      CHECK(row.lhs == Rational(136, 15));
      CHECK(row.rhs == Rational(904, 15));
      CHECK(row.residual == Rational(-768, 15));
    }
  }
  CHECK(found53);
  CHECK(found31);
  CHECK_THROWS_AS(nontriviality_certificate(4), std::invalid_argument);
  CHECK_THROWS_AS(nontriviality_certificate(3), std::invalid_argument);
}

TEST_CASE("coboundary ansatz matches the bracket pairing on defining rows only") {
  // lambda([e_m, e_n]) with lambda_k = lambda(e_k)/2 from the certificate
  // must reproduce Omega(e_m, e_n) when |m - n| = 1 or m + n... only the
  // l = 1 relations hold; (m, n) with k = m + n, l = m - n = +-1 are exact.
  auto lambda_k = [](int k) {
    if (k == 1) return Rational(0);
    const long long kk = k;
    return -Rational(kk * kk * kk * kk - 1, 4 * kk);
  };
  auto pair_with_lambda = [&](int m, int n) {
    Rational acc(0);
    for (const SinBasisTerm& t : sin_basis_bracket(m, n))
      acc = acc + t.coeff * Rational(2) * lambda_k(t.index);
    return acc;
  };
  // defining rows: (m, n) = (k+1)/2, (k-1)/2 i.e. adjacent indices
  for (int m = 1; m <= 6; ++m) {
    const int n = m + 1;
    CHECK(pair_with_lambda(m, n) == sin_basis_omega(m, n));
  }
  // and at least one non-defining pair must violate the ansatz
  CHECK(pair_with_lambda(1, 4) != sin_basis_omega(1, 4));
}

TEST_CASE("interval group cocycle: degenerate cases") {
  const IntervalDiffeo id = IntervalDiffeo::identity(0.0, 1.0);
  const IntervalDiffeo psi = unit_interval_diffeo({0.0, 0.1});
  CHECK(chi_interval(id, psi) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(chi_interval(psi, id) == 0.0);  // d log(1) integrand is identically zero
}

TEST_CASE("interval group cocycle identity, fixed endpoints") {
  const IntervalDiffeo phi = unit_interval_diffeo({0.2});
  const IntervalDiffeo psi = unit_interval_diffeo({0.0, 0.1});
  const IntervalDiffeo eta = unit_interval_diffeo({0.15});
  CHECK(std::abs(cocycle_residual(phi, psi, eta)) < 1e-8);
}

TEST_CASE("interval group cocycle identity, moving endpoints") {
  // eta: [0,1] -> [0,1], psi: [0,1] -> [0,2], phi: [0,2] -> its image
  const IntervalDiffeo eta = unit_interval_diffeo({0.12});
  const IntervalDiffeo psi(0.0, 1.0, 2.0 * X() + 0.1 * sin(kPi * X()));
  const IntervalDiffeo phi(0.0, 2.0, X() + 0.05 * X() * X() + 0.2 * sin((kPi / 2.0) * X()));
  CHECK(psi.trg_b() == doctest::Approx(2.0));
  CHECK(!psi.fixes_endpoints());
  CHECK(std::abs(cocycle_residual(phi, psi, eta)) < 1e-8);
  // chi itself is generically nonzero (guards against degenerate plumbing)
  CHECK(std::abs(chi_interval(phi, psi)) > 1e-4);
}

TEST_CASE("multibreak interval cocycles") {
  // single subinterval reduces to omega_interval
  const MultibreakField u1({0.0, kPi}, {sin(X())});
  const MultibreakField v1({0.0, kPi}, {sin(2.0 * X())});
  const auto single = multibreak_interval_cocycles(u1, v1);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == doctest::Approx(-20.0 / 3.0).epsilon(1e-9));

  // locality: u supported in the first subinterval only
  const std::vector<double> part = {0.0, 1.0, 2.0, 3.0};
  const MultibreakField u({0.0, 1.0, 2.0, 3.0},
                          {sin(kPi * X()), Expression::constant(0.0),
                           Expression::constant(0.0)});
  const MultibreakField v(part, {sin(2.0 * kPi * X()), sin(kPi * X()),
                                 sin(3.0 * kPi * X())});
  const auto comps = multibreak_interval_cocycles(u, v);
  REQUIRE(comps.size() == 3);
  CHECK(std::abs(comps[1]) < 1e-12);
  CHECK(std::abs(comps[2]) < 1e-12);

  // vanishing check failure
  CHECK_THROWS_AS(MultibreakField({0.0, 1.0}, {cos(kPi * X())}), GeometryError);
}

TEST_CASE("multibreak componentwise Lie algebra cocycle identity") {
  std::mt19937_64 rng(7);
  const std::vector<double> part = {0.0, 1.3, 2.2, 3.0};
  auto random_field = [&]() {
    std::vector<Expression> pieces;
    for (std::size_t j = 0; j + 1 < part.size(); ++j) {
      const double len = part[j + 1] - part[j];
      Expression e = Expression::constant(0.0);
      for (int k = 1; k <= 3; ++k)
        e = e + oracles::uniform(rng, -1.0, 1.0) *
                    sin((k * kPi / len) * (X() - part[j]));
      pieces.push_back(e);
    }
    return MultibreakField(part, pieces);
  };
  auto bracket = [&](const MultibreakField& a, const MultibreakField& b) {
    std::vector<Expression> pieces;
    for (int j = 0; j < a.segments(); ++j) {
      const Expression& ua = a.segment(j).profile();
      const Expression& ub = b.segment(j).profile();
      pieces.push_back(ua * ub.derivative(kVarX) - ua.derivative(kVarX) * ub);
    }
    return MultibreakField(part, pieces);
  };
  for (int trial = 0; trial < 5; ++trial) {
    const MultibreakField u = random_field();
    const MultibreakField v = random_field();
    const MultibreakField w = random_field();
    const auto a = multibreak_interval_cocycles(bracket(u, v), w);
    const auto b = multibreak_interval_cocycles(bracket(v, w), u);
    const auto c = multibreak_interval_cocycles(bracket(w, u), v);
    for (std::size_t j = 0; j < a.size(); ++j)
      CHECK(std::abs(a[j] + b[j] + c[j]) < 1e-6);
  }
}

TEST_SUITE_END();
