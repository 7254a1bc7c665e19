#include "bvir/algebroid.hpp"

#include <cmath>

namespace bvir {

namespace {

// Reduce x into [base, base + 2pi).
double reduce_into(double x, double base) {
  double r = x - kTwoPi * std::floor((x - base) / kTwoPi);
  if (r < base) r += kTwoPi;
  if (r >= base + kTwoPi) r -= kTwoPi;
  return r;
}

}  // namespace

BrokenField::BrokenField(BreakConfig breaks, std::vector<Expression> arc_profiles,
                         double tol_cont)
    : breaks_(std::move(breaks)) {
  const int n = breaks_.size();
  if (static_cast<int>(arc_profiles.size()) != n)
    throw GeometryError("arc profile count must equal the break count");
  profiles_.reserve(n);
  for (Expression& e : arc_profiles) {
    if (e.depends_on(kVarT)) throw GeometryError("field profiles may not depend on t");
    for (int i = 1; i <= 9; ++i)
      if (e.depends_on(var_p(i)))
        throw GeometryError("fiber fields may not depend on break variables");
    std::array<Expression, Jet::kMaxOrder + 1> table;
    table[0] = e;
    for (int k = 1; k <= Jet::kMaxOrder; ++k) table[k] = table[k - 1].derivative(kVarX);
    profiles_.push_back(std::move(table));
  }
  // Continuity across every break (the wrap arc ends at p_0 + 2pi).
  for (int i = 0; i < n; ++i) {
    Binding b;
    b.set(kVarX, breaks_.arc_end(i));
    const double end_value = profiles_[i][0].eval(b);
    const int next = (i + 1) % n;
    b.set(kVarX, breaks_.arc_end(i) - (next == 0 ? kTwoPi : 0.0));
    const double next_value = profiles_[next][0].eval(b);
    if (std::fabs(end_value - next_value) > tol_cont)
      throw GeometryError("broken field is discontinuous at a break point");
  }
}

BrokenField::BrokenField(BreakConfig breaks, const Expression& profile)
    : BrokenField(BreakConfig(breaks),
                  std::vector<Expression>(static_cast<std::size_t>(breaks.size()),
                                          profile)) {}

double BrokenField::deriv(double x, int k, Side side) const {
  const int n = breaks_.size();
  const double base = breaks_.angle(0);
  double r = reduce_into(x, base);
  int arc = n - 1;
  for (int i = 0; i < n; ++i) {
    if (std::fabs(r - breaks_.angle(i)) <= 1e-12) {
      if (side == Side::Left) {
        arc = i == 0 ? n - 1 : i - 1;
        if (i == 0) r = base + kTwoPi;
      } else {
        arc = i;
      }
      Binding b;
      b.set(kVarX, r);
      return profiles_[arc][k].eval(b);
    }
    if (r < breaks_.angle(i)) { arc = i - 1; break; }
  }
  if (arc < 0) arc = n - 1;
  Binding b;
  b.set(kVarX, r);
  return profiles_[arc][k].eval(b);
}

bool BrokenField::vanishes_at_breaks(double tol) const {
  for (int i = 0; i < breaks_.size(); ++i)
    if (std::fabs(deriv(breaks_.angle(i), 0, Side::Right)) > tol) return false;
  return true;
}

Section::Section(int n, Expression profile) : n_(n) {
  if (n < 1 || n > 9) throw GeometryError("section break count must lie in 1..9");
  for (int i = n + 1; i <= 9; ++i)
    if (profile.depends_on(var_p(i)))
      throw GeometryError("section profile references p" + std::to_string(i) +
                          " beyond its break count");
  if (profile.depends_on(kVarT))
    throw GeometryError("section profiles may not depend on t");
  xderivs_[0] = std::move(profile);
  for (int k = 1; k <= Jet::kMaxOrder; ++k)
    xderivs_[k] = xderivs_[k - 1].derivative(kVarX);
}

Expression Section::p_deriv(int i) const { return xderivs_[0].derivative(var_p(i)); }

Expression Section::at_break(int i) const {
  return xderivs_[0].substitute(kVarX, Expression::variable(var_p(i)));
}

BrokenField Section::at(const BreakConfig& p) const {
  if (p.size() != n_) throw GeometryError("break count mismatch in specialization");
  Expression e = xderivs_[0];
  for (int i = 1; i <= n_; ++i)
    e = e.substitute(var_p(i), Expression::constant(p.angle(i - 1)));
  return BrokenField(p, e);
}

Binding bind_config(const BreakConfig& p) {
  Binding b;
  for (int i = 0; i < p.size(); ++i) b.set(var_p(i + 1), p.angle(i));
  return b;
}

double Section::eval(double x, const BreakConfig& p) const {
  return eval_x_deriv(0, x, p);
}

double Section::eval_x_deriv(int k, double x, const BreakConfig& p) const {
  Binding b = bind_config(p);
  b.set(kVarX, x);
  return xderivs_[k].eval(b);
}

std::vector<double> anchor(const Section& u, const BreakConfig& p) {
  if (p.size() != u.n()) throw GeometryError("break count mismatch in anchor");
  std::vector<double> out(p.size());
  for (int i = 0; i < p.size(); ++i) out[i] = u.eval(p.angle(i), p);
  return out;
}

Section bracket_sections(const Section& u, const Section& v) {
  if (u.n() != v.n()) throw GeometryError("bracket requires matching break counts");
  const int n = u.n();
  Expression e = u.profile() * v.x_deriv(1) - v.profile() * u.x_deriv(1);
  for (int i = 1; i <= n; ++i) {
    e = e + u.at_break(i) * v.p_deriv(i) - v.at_break(i) * u.p_deriv(i);
  }
  Section result(n, e);
  // Specializations of expression-backed families are continuous by
  // construction; sampling a few base points still exercises evaluability.
  for (int s = 0; s < 10; ++s) {
    std::vector<double> angles(n);
    for (int i = 0; i < n; ++i)
      angles[i] = (kTwoPi * i) / n + 0.1 + 0.03 * s;
    (void)result.at(BreakConfig(angles));
  }
  return result;
}

EmbeddedField embed_section(const Section& u) {
  EmbeddedField X;
  X.n = u.n();
  X.components.push_back(u.profile());
  for (int i = 1; i <= u.n(); ++i) X.components.push_back(u.at_break(i));
  return X;
}

EmbeddedField lie_bracket(const EmbeddedField& X, const EmbeddedField& Y) {
  if (X.n != Y.n) throw GeometryError("embedded fields live on different bases");
  EmbeddedField Z;
  Z.n = X.n;
  auto slot_of = [](int comp) { return comp == 0 ? kVarX : var_p(comp); };
  for (int j = 0; j <= X.n; ++j) {
    Expression acc = Expression::constant(0.0);
    for (int k = 0; k <= X.n; ++k) {
      acc = acc + X.components[k] * Y.components[j].derivative(slot_of(k)) -
            Y.components[k] * X.components[j].derivative(slot_of(k));
    }
    Z.components.push_back(acc);
  }
  return Z;
}

double omega_arc(const BrokenField& u, const BrokenField& v, int arc,
                 const QuadratureSpec& q) {
  if (!u.breaks().approx_equal(v.breaks()))
    throw GeometryError("cocycle requires fields with matching breaks");
  if (arc < 0 || arc >= u.arcs()) throw GeometryError("arc index out of range");
  Binding b;
  const Expression& u1 = u.arc_deriv_expr(arc, 1);
  const Expression& u2 = u.arc_deriv_expr(arc, 2);
  const Expression& v1 = v.arc_deriv_expr(arc, 1);
  const Expression& v2 = v.arc_deriv_expr(arc, 2);
  auto integrand = [&](double x) {
    Binding bx = b;
    bx.set(kVarX, x);
    return u1.eval(bx) * v2.eval(bx) - u2.eval(bx) * v1.eval(bx);
  };
  return integrate_arc(integrand, u.breaks().arc_begin(arc), u.breaks().arc_end(arc), q);
}

double omega_arc(const Section& u, const Section& v, const BreakConfig& p, int arc,
                 const QuadratureSpec& q) {
  if (u.n() != v.n() || p.size() != u.n())
    throw GeometryError("cocycle requires matching break counts");
  if (arc < 0 || arc >= p.size()) throw GeometryError("arc index out of range");
  const Binding base = bind_config(p);
  auto integrand = [&](double x) {
    Binding b = base;
    b.set(kVarX, x);
    return u.x_deriv(1).eval(b) * v.x_deriv(2).eval(b) -
           u.x_deriv(2).eval(b) * v.x_deriv(1).eval(b);
  };
  return integrate_arc(integrand, p.arc_begin(arc), p.arc_end(arc), q);
}

TwoForm omega_two_form(int arc, const QuadratureSpec& q) {
  return [arc, q](const Section& u, const Section& v, const BreakConfig& p) {
    return omega_arc(u, v, p, arc, q);
  };
}

double anchor_lie_derivative(const Section& u,
                             const std::function<double(const BreakConfig&)>& F,
                             const BreakConfig& p, double h, bool richardson) {
  const std::vector<double> dir = anchor(u, p);
  auto shifted = [&](double eps) {
    std::vector<double> angles = p.angles();
    for (std::size_t i = 0; i < angles.size(); ++i) angles[i] += eps * dir[i];
    return BreakConfig(angles);
  };
  auto central = [&](double step) {
    return (F(shifted(step)) - F(shifted(-step))) / (2.0 * step);
  };
  if (!richardson) return central(h);
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

double algebroid_cocycle_residual(const TwoForm& omega, const Section& u,
                                  const Section& v, const Section& w,
                                  const BreakConfig& p, double h) {
  auto term = [&](const Section& a, const Section& b, const Section& c) {
    // L_{#a} Omega(b, c) - Omega([[a, b]], c)
    auto F = [&](const BreakConfig& pp) { return omega(b, c, pp); };
    return anchor_lie_derivative(a, F, p, h) - omega(bracket_sections(a, b), c, p);
  };
  return term(u, v, w) + term(v, w, u) + term(w, u, v);
}

Expression OneForm::apply(const Section& u) const {
  Expression acc = Expression::constant(0.0);
  for (const OneFormTerm& t : terms_) {
    Expression d = u.profile();
    for (int k = 0; k < t.deriv_order; ++k) d = d.derivative(kVarX);
    acc = acc + t.weight * d.substitute(kVarX, t.location);
  }
  return acc;
}

TwoForm coboundary(const OneForm& theta) {
  return [theta](const Section& u, const Section& v, const BreakConfig& p) {
    const Expression tv = theta.apply(v);
    const Expression tu = theta.apply(u);
    Expression e = -theta.apply(bracket_sections(u, v));
    for (int i = 1; i <= u.n(); ++i) {
      e = e + u.at_break(i) * tv.derivative(var_p(i)) -
          v.at_break(i) * tu.derivative(var_p(i));
    }
    return e.eval(bind_config(p));
  };
}

CentralComponent::CentralComponent(Expression symbolic) : sym_(std::move(symbolic)) {
  if (sym_->depends_on(kVarX) || sym_->depends_on(kVarT))
    throw GeometryError("central components must be functions of p only");
}

CentralComponent::CentralComponent(std::function<double(const BreakConfig&)> fn)
    : fn_(std::move(fn)) {}

double CentralComponent::eval(const BreakConfig& p) const {
  if (sym_) return sym_->eval(bind_config(p));
  if (fn_) return fn_(p);
  return 0.0;
}

double lie_central(const Section& u, const CentralComponent& g, const BreakConfig& p,
                   double h) {
  if (g.is_zero()) return 0.0;
  if (g.symbolic()) {
    Expression e = Expression::constant(0.0);
    for (int i = 1; i <= u.n(); ++i)
      e = e + u.at_break(i) * g.symbolic()->derivative(var_p(i));
    return e.eval(bind_config(p));
  }
  auto F = [&](const BreakConfig& pp) { return g.eval(pp); };
  return anchor_lie_derivative(u, F, p, h);
}

ExtendedSection extended_bracket(const ExtendedSection& a, const ExtendedSection& b,
                                 const std::vector<double>& c, const QuadratureSpec& q,
                                 double h) {
  const int n = a.section.n();
  if (b.section.n() != n) throw GeometryError("extended bracket break count mismatch");
  if (static_cast<int>(c.size()) != n ||
      static_cast<int>(a.central.size()) != n ||
      static_cast<int>(b.central.size()) != n)
    throw GeometryError("extended bracket component count mismatch");
  ExtendedSection out{bracket_sections(a.section, b.section), {}};
  out.central.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Section u = a.section;
    const Section v = b.section;
    const CentralComponent f = a.central[i];
    const CentralComponent g = b.central[i];
    const double ci = c[i];
    out.central.emplace_back(
        std::function<double(const BreakConfig&)>([=](const BreakConfig& p) {
          double val = ci * omega_arc(u, v, p, i, q);
          val += lie_central(u, g, p, h);
          val -= lie_central(v, f, p, h);
          return val;
        }));
  }
  return out;
}

BrokenField isotropy_bracket(const BrokenField& u, const BrokenField& v, double tol) {
  if (!u.breaks().approx_equal(v.breaks()))
    throw GeometryError("isotropy bracket requires matching breaks");
  if (!u.vanishes_at_breaks(tol) || !v.vanishes_at_breaks(tol))
    throw GeometryError("isotropy bracket requires fields vanishing at all breaks");
  std::vector<Expression> pieces;
  pieces.reserve(u.arcs());
  for (int i = 0; i < u.arcs(); ++i) {
    pieces.push_back(u.arc_profile(i) * v.arc_deriv_expr(i, 1) -
                     u.arc_deriv_expr(i, 1) * v.arc_profile(i));
  }
  return BrokenField(u.breaks(), std::move(pieces));
}

std::function<double(const BrokenField&, const BrokenField&)>
restrict_cocycle_to_isotropy(int arc, const BreakConfig& p, const QuadratureSpec& q) {
  return [arc, p, q](const BrokenField& u, const BrokenField& v) {
    if (!u.breaks().approx_equal(p) || !v.breaks().approx_equal(p))
      throw GeometryError("isotropy cocycle requires fields broken at the base point");
    return omega_arc(u, v, arc, q);
  };
}

}  // namespace bvir
