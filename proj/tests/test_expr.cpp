#include "bvir/expr.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace bvir;

namespace {
const double kPi = 3.14159265358979323846;
Expression X() { return Expression::variable(kVarX); }
Expression P1() { return Expression::variable(var_p(1)); }
}  // namespace

TEST_SUITE_BEGIN("expr");

TEST_CASE("parse grammar units") {
  CHECK(parse_expression("sin(x)").equals(sin(X())));
  CHECK(parse_expression("x*p1 + 2").equals(X() * P1() + 2.0));
  CHECK(parse_expression("x^3").equals(pow(X(), 3)));
  CHECK(parse_expression("2^-2").equals(Expression::constant(0.25)));
  CHECK(parse_expression("atan(t)").equals(atan(Expression::variable(kVarT))));
  CHECK(parse_expression("(x + 1)*(x - 1)").equals((X() + 1.0) * (X() - 1.0)));
  CHECK(parse_expression("-x").equals(-X()));
  CHECK(parse_expression("-2.5").equals(Expression::constant(-2.5)));
  CHECK(parse_expression("1e-3").equals(Expression::constant(1e-3)));
}

TEST_CASE("parse errors carry position") {
  CHECK_THROWS_AS(parse_expression("sin(x"), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(x)"), ParseError);
  CHECK_THROWS_AS(parse_expression("p0"), ParseError);
  CHECK_THROWS_AS(parse_expression("x +"), ParseError);
  CHECK_THROWS_AS(parse_expression("x^y"), ParseError);
  try {
    parse_expression("x + bar");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("print/parse round-trip on nested input") {
  const Expression e = parse_expression("sin(2*(x - p1))");
  CHECK(parse_expression(e.str()).equals(e));
}

TEST_CASE("print/parse round-trip property on random ASTs") {
  std::mt19937_64 rng(2024);
  const std::vector<int> slots = {kVarX, var_p(1), var_p(2), kVarT};
  for (int trial = 0; trial < 200; ++trial) {
    const Expression e = oracles::random_ast(rng, slots, oracles::uniform_int(rng, 0, 6));
    const Expression back = parse_expression(e.str());
    CHECK(back.equals(e));
  }
}

TEST_CASE("evaluate basics and domain errors") {
  Binding b;
  b.set("x", kPi / 2.0);
  CHECK(sin(X()).eval(b) == doctest::Approx(1.0).epsilon(1e-15));
  b.set("x", 1.0);
  CHECK(log(X()).eval(b) == doctest::Approx(0.0));
  b.set("x", -1.0);
  CHECK_THROWS_AS(log(X()).eval(b), EvalError);
  CHECK_THROWS_AS((X() / Expression::constant(0.0)).eval(b), EvalError);
  CHECK_THROWS_AS(sin(P1()).eval(b), EvalError);  // unbound variable
  try {
    log(X() - 1.0).eval(b);
    CHECK(false);
  } catch (const EvalError& e) {
    CHECK(e.subterm == "log(x - 1)");
  }
}

TEST_CASE("table-rule derivatives") {
  CHECK(sin(X()).derivative(kVarX).equals(cos(X())));
  CHECK((X() * P1()).derivative(var_p(1)).equals(X()));
  CHECK(pow(X(), 3).derivative(kVarX).equals(3.0 * pow(X(), 2)));
  CHECK(exp(X()).derivative(kVarX).equals(exp(X())));
  CHECK(log(X()).derivative(kVarX).equals(Expression::constant(1.0) / X()));
  // d/dx of a p1-only expression is zero
  CHECK(sin(P1()).derivative(kVarX).equals(Expression::constant(0.0)));
}

TEST_CASE("derivatives match finite differences on random ASTs") {
  std::mt19937_64 rng(77);
  const std::vector<int> slots = {kVarX, var_p(1)};
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Expression e = oracles::random_ast(rng, slots, oracles::uniform_int(rng, 1, 6));
    const Expression de = e.derivative(kVarX);
    for (int pt = 0; pt < 20; ++pt) {
      const double x0 = oracles::uniform(rng, -2.0, 2.0);
      const double p0 = oracles::uniform(rng, -2.0, 2.0);
      auto f = [&](double x) {
        Binding b;
        b.set(kVarX, x).set(var_p(1), p0);
        return e.eval(b);
      };
      double fd, exact;
      try {
        fd = oracles::fd_derivative(f, x0);
        Binding b;
        b.set(kVarX, x0).set(var_p(1), p0);
        exact = de.eval(b);
      } catch (const EvalError&) {
        continue;  // sampled onto a domain edge; skip this point
      }
      if (!std::isfinite(fd) || std::abs(fd) > 1e6) continue;  // FD blowup near poles
      ++checked;
      CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
  CHECK(checked > 500);  // the skip paths must not eat the suite
}

TEST_CASE("derivative linearity") {
  std::mt19937_64 rng(31337);
  const std::vector<int> slots = {kVarX};
  for (int trial = 0; trial < 40; ++trial) {
    const Expression e1 = oracles::random_ast(rng, slots, 4);
    const Expression e2 = oracles::random_ast(rng, slots, 4);
    const double a = oracles::uniform(rng, -2.0, 2.0);
    const double c = oracles::uniform(rng, -2.0, 2.0);
    const Expression lhs = (a * e1 + c * e2).derivative(kVarX);
    const Expression rhs = a * e1.derivative(kVarX) + c * e2.derivative(kVarX);
    for (int pt = 0; pt < 10; ++pt) {
      Binding b;
      b.set(kVarX, oracles::uniform(rng, -2.0, 2.0));
      double l, r;
      try {
        l = lhs.eval(b);
        r = rhs.eval(b);
      } catch (const EvalError&) {
        continue;
      }
      CHECK(std::abs(l - r) <= 1e-9 * std::max(1.0, std::abs(l)));
    }
  }
}

TEST_CASE("substitute composes symbolically") {
  // u(x) = sin(x), substitute x -> p1 + t
  const Expression u = sin(X());
  const Expression s = u.substitute(kVarX, P1() + Expression::variable(kVarT));
  Binding b;
  b.set(var_p(1), 0.25).set(kVarT, 0.5);
  CHECK(s.eval(b) == doctest::Approx(std::sin(0.75)).epsilon(1e-15));
  CHECK(!s.depends_on(kVarX));
  CHECK(s.depends_on(kVarT));
}

TEST_CASE("higher derivatives stay exact") {
  // (d/dx)^4 sin(2x) = 16 sin(2x)
  Expression e = sin(2.0 * X());
  for (int k = 0; k < 4; ++k) e = e.derivative(kVarX);
  Binding b;
  b.set(kVarX, 0.3);
  CHECK(e.eval(b) == doctest::Approx(16.0 * std::sin(0.6)).epsilon(1e-14));
}

TEST_SUITE_END();
