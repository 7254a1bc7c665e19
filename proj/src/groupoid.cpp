#include "bvir/groupoid.hpp"

#include <algorithm>
#include <cmath>

namespace bvir {

namespace {

double reduce_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double circle_distance(double a, double b) {
  double d = std::fabs(reduce_angle(a) - reduce_angle(b));
  return std::min(d, kTwoPi - d);
}

BreakConfig image_config(const PiecewiseJetMap& map, const BreakConfig& src) {
  std::vector<double> images;
  images.reserve(src.size());
  for (double a : src.angles()) images.push_back(map.value(a));
  return BreakConfig(images);
}

void require_composable(const BrokenDiffeo& phi, const BrokenDiffeo& psi, double tol) {
  if (!phi.src().approx_equal(psi.trg(), tol))
    throw CompositionError("arrows are not composable: src(phi) != trg(psi)");
}

}  // namespace

BrokenDiffeo::BrokenDiffeo(PiecewiseJetMap map, BreakConfig src, bool validate)
    : map_(std::move(map)), src_(std::move(src)), trg_(image_config(map_, src_)) {
  // Genuine breaks of the map must be among the declared source breaks.
  for (double b : map_.breaks()) {
    bool found = false;
    for (double a : src_.angles())
      if (circle_distance(a, b) <= defaults::tol_cont) { found = true; break; }
    if (!found)
      throw GeometryError("map has a break outside the declared source configuration");
  }
  if (validate) map_.validate_diffeo();
}

BrokenDiffeo BrokenDiffeo::identity(const BreakConfig& p) {
  return BrokenDiffeo(PiecewiseJetMap::identity(), p, false);
}

BrokenDiffeo BrokenDiffeo::rotation(const BreakConfig& p, double angle) {
  return BrokenDiffeo(PiecewiseJetMap::rotation(angle), p, false);
}

BrokenDiffeo BrokenDiffeo::from_lift(const BreakConfig& p, const Expression& lift) {
  return BrokenDiffeo(PiecewiseJetMap::from_lift(lift), p, false);
}

BrokenDiffeo BrokenDiffeo::from_arcs(const BreakConfig& p, std::vector<Expression> arcs) {
  return BrokenDiffeo(PiecewiseJetMap::from_arcs(p, std::move(arcs)), p, false);
}

int BrokenDiffeo::trg_arc_of(int i) const {
  const double image = reduce_angle(map_.value(src_.angle(i)));
  int best = 0;
  double best_dist = circle_distance(image, trg_.angle(0));
  for (int j = 1; j < trg_.size(); ++j) {
    const double d = circle_distance(image, trg_.angle(j));
    if (d < best_dist) { best = j; best_dist = d; }
  }
  return best;
}

BrokenDiffeo BrokenDiffeo::inverse() const {
  return BrokenDiffeo(invert_map(map_), trg_, false);
}

BrokenDiffeo compose_diffeos(const BrokenDiffeo& phi, const BrokenDiffeo& psi, double tol) {
  require_composable(phi, psi, tol);
  PiecewiseJetMap composite = compose_maps(phi.map(), psi.map(), false, tol);
  return BrokenDiffeo(std::move(composite), psi.src(), false);
}

double chi_arc(const BrokenDiffeo& phi, const BrokenDiffeo& psi, int arc,
               const QuadratureSpec& q) {
  require_composable(phi, psi, defaults::tol_cont);
  const BreakConfig& p = psi.src();
  if (arc < 0 || arc >= p.size()) throw GeometryError("arc index out of range");
  const PiecewiseJetMap& pm = psi.map();
  const PiecewiseJetMap& fm = phi.map();
  auto integrand = [&](double x) {
    const Jet jpsi = pm.jet(x, 2);
    if (jpsi.d(1) < defaults::delta_min)
      throw GeometryError("psi_x below delta_min inside chi integrand");
    const double phi_x = fm.jet(jpsi.value(), 1).d(1);
    if (phi_x < defaults::delta_min)
      throw GeometryError("phi_x below delta_min inside chi integrand");
    return std::log(phi_x) * jpsi.d(2) / jpsi.d(1);
  };
  return integrate_arc(integrand, p.arc_begin(arc), p.arc_end(arc), q);
}

std::vector<double> chi(const BrokenDiffeo& phi, const BrokenDiffeo& psi,
                        const QuadratureSpec& q) {
  std::vector<double> out(psi.src().size());
  for (int i = 0; i < psi.src().size(); ++i) out[i] = chi_arc(phi, psi, i, q);
  return out;
}

std::vector<double> groupoid_cocycle_residual(const BrokenDiffeo& phi,
                                              const BrokenDiffeo& psi,
                                              const BrokenDiffeo& eta,
                                              const QuadratureSpec& q) {
  require_composable(phi, psi, defaults::tol_cont);
  require_composable(psi, eta, defaults::tol_cont);
  const BrokenDiffeo psi_eta = compose_diffeos(psi, eta);
  const BrokenDiffeo phi_psi = compose_diffeos(phi, psi);
  const std::vector<double> a = chi(phi, psi_eta, q);
  const std::vector<double> b = chi(psi, eta, q);
  const std::vector<double> c = chi(phi_psi, eta, q);
  const std::vector<double> d = chi(phi, psi, q);
  std::vector<double> res(eta.src().size());
  for (int i = 0; i < eta.src().size(); ++i)
    res[i] = a[i] + b[i] - c[i] - d[eta.trg_arc_of(i)];
  return res;
}

ExtendedDiffeo extended_multiply(const ExtendedDiffeo& a, const ExtendedDiffeo& b,
                                 const QuadratureSpec& q) {
  const int n = b.arrow.src().size();
  if (static_cast<int>(a.charge.size()) != a.arrow.src().size() ||
      static_cast<int>(b.charge.size()) != n)
    throw GeometryError("charge length must equal the break count");
  ExtendedDiffeo out{compose_diffeos(a.arrow, b.arrow), std::vector<double>(n)};
  const std::vector<double> x = chi(a.arrow, b.arrow, q);
  for (int i = 0; i < n; ++i)
    out.charge[i] = b.charge[i] + a.charge[b.arrow.trg_arc_of(i)] + x[i];
  return out;
}

ExtendedDiffeo extended_inverse(const ExtendedDiffeo& a, const QuadratureSpec& q) {
  const BrokenDiffeo inv = a.arrow.inverse();
  const std::vector<double> x = chi(a.arrow, inv, q);
  std::vector<double> charge(inv.src().size());
  for (int i = 0; i < inv.src().size(); ++i)
    charge[i] = -a.charge[inv.trg_arc_of(i)] - x[i];
  return ExtendedDiffeo{inv, std::move(charge)};
}

BottComparison bott_boundary_relation(const BrokenDiffeo& phi, const BrokenDiffeo& psi,
                                      const QuadratureSpec& q) {
  require_composable(phi, psi, defaults::tol_cont);
  BottComparison out{0.0, 0.0, 0.0};
  for (int i = 0; i < psi.src().size(); ++i) out.chi_sum += chi_arc(phi, psi, i, q);

  const BrokenDiffeo composite = compose_diffeos(phi, psi);
  const PiecewiseJetMap& cm = composite.map();
  const PiecewiseJetMap& pm = psi.map();
  const BreakConfig& p = psi.src();
  auto integrand = [&](double x) {
    const Jet jpsi = pm.jet(x, 2);
    const double comp_x = cm.jet(x, 1).d(1);
    if (jpsi.d(1) < defaults::delta_min || comp_x < defaults::delta_min)
      throw GeometryError("derivative below delta_min inside the Bott integrand");
    return std::log(comp_x) * jpsi.d(2) / jpsi.d(1);
  };
  for (int i = 0; i < p.size(); ++i)
    out.classical_integral +=
        integrate_arc(integrand, p.arc_begin(i), p.arc_end(i), q);

  for (int i = 0; i < p.size(); ++i) {
    const double right = pm.jet(p.angle(i), 1, Side::Right).d(1);
    const double left = pm.jet(p.angle(i), 1, Side::Left).d(1);
    const double lr = std::log(right), ll = std::log(left);
    out.boundary_sum += 0.5 * (lr * lr - ll * ll);
  }
  return out;
}

Bisection::Bisection(int n, Expression family) : n_(n), family_(std::move(family)) {
  if (n < 1 || n > 9) throw GeometryError("bisection break count must lie in 1..9");
  for (int i = n + 1; i <= 9; ++i)
    if (family_.depends_on(var_p(i)))
      throw GeometryError("bisection family references p" + std::to_string(i) +
                          " beyond its break count");
  if (family_.depends_on(kVarT))
    throw GeometryError("bisection families may not depend on t");
}

Bisection Bisection::identity(int n) { return Bisection(n, Expression::variable(kVarX)); }

Expression Bisection::base_component(int i) const {
  return family_.substitute(kVarX, Expression::variable(var_p(i)));
}

BrokenDiffeo Bisection::arrow_at(const BreakConfig& p) const {
  if (p.size() != n_) throw GeometryError("break count mismatch in bisection arrow");
  Expression e = family_;
  for (int i = 1; i <= n_; ++i)
    e = e.substitute(var_p(i), Expression::constant(p.angle(i - 1)));
  return BrokenDiffeo::from_lift(p, e);
}

std::vector<double> Bisection::base_map(const BreakConfig& p) const {
  const Binding b = bind_config(p);
  std::vector<double> out(n_);
  for (int i = 1; i <= n_; ++i) out[i - 1] = base_component(i).eval(b);
  return out;
}

double Bisection::base_jacobian(const BreakConfig& p) const {
  const Binding b = bind_config(p);
  const int n = n_;
  std::vector<double> m(n * n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      m[(i - 1) * n + (j - 1)] = base_component(i).derivative(var_p(j)).eval(b);
  // Gaussian elimination with partial pivoting.
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row)
      if (std::fabs(m[row * n + col]) > std::fabs(m[pivot * n + col])) pivot = row;
    if (pivot != col) {
      for (int k = 0; k < n; ++k) std::swap(m[col * n + k], m[pivot * n + k]);
      det = -det;
    }
    const double diag = m[col * n + col];
    if (diag == 0.0) return 0.0;
    det *= diag;
    for (int row = col + 1; row < n; ++row) {
      const double factor = m[row * n + col] / diag;
      for (int k = col; k < n; ++k) m[row * n + k] -= factor * m[col * n + k];
    }
  }
  return det;
}

Bisection bisection_compose(const Bisection& Phi, const Bisection& Psi) {
  if (Phi.n() != Psi.n())
    throw GeometryError("bisections live over different base dimensions");
  const int n = Phi.n();
  // Simultaneous substitution x -> Psi(x,p), p_i -> f_Psi,i(p): rename Phi's
  // own p_i into unused upper slots first so Psi's p-variables survive.
  if (n > 4)
    throw GeometryError("bisection composition supports at most 4 break points");
  Expression e = Phi.family();
  for (int i = 1; i <= n; ++i)
    e = e.substitute(var_p(i), Expression::variable(var_p(i + 4)));
  e = e.substitute(kVarX, Psi.family());
  for (int i = 1; i <= n; ++i)
    e = e.substitute(var_p(i + 4), Psi.base_component(i));
  Bisection out(n, e);
  // sampled invertibility of the composed base map
  for (int s = 0; s < 5; ++s) {
    std::vector<double> angles(n);
    for (int i = 0; i < n; ++i) angles[i] = (kTwoPi * i) / n + 0.2 + 0.11 * s;
    if (std::fabs(out.base_jacobian(BreakConfig(angles))) < 1e-8)
      throw GeometryError("composed bisection base map is singular at a sampled point");
  }
  return out;
}

}  // namespace bvir
