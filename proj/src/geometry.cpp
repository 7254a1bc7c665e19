#include "bvir/geometry.hpp"

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

// Arc membership for a reduced coordinate r in [b0, b0 + 2pi) relative to
// ascending break angles. Returns the arc index and, via `at_break`, whether
// r sits on a break (to within matching tolerance).
int locate_arc(const std::vector<double>& breaks, double r, double match_tol,
               bool& at_break, int& break_index) {
  const int n = static_cast<int>(breaks.size());
  at_break = false;
  break_index = -1;
  int arc = n - 1;
  for (int i = 0; i < n; ++i) {
    if (std::fabs(r - breaks[i]) <= match_tol) {
      at_break = true;
      break_index = i;
      return i;  // by default the arc starting at the break (right side)
    }
    if (r < breaks[i]) {
      arc = i - 1;
      if (arc < 0) arc = n - 1;  // cannot happen after reduction, kept for safety
      return arc;
    }
  }
  return arc;
}

// Piecewise expression map in x: one expression per arc, with precomputed
// x-derivatives up to order 4. An empty break set means a single expression
// based at 0 covering the whole period.
class ExpressionArcsMap final : public ScalarMap {
 public:
  ExpressionArcsMap(std::vector<double> breaks, const std::vector<Expression>& arcs)
      : breaks_(std::move(breaks)) {
    pieces_.reserve(arcs.size());
    for (const Expression& e : arcs) {
      std::array<Expression, Jet::kMaxOrder + 1> table;
      table[0] = e;
      for (int k = 1; k <= Jet::kMaxOrder; ++k) table[k] = table[k - 1].derivative(kVarX);
      pieces_.push_back(std::move(table));
    }
  }

  Jet jet(double x, int order, Side side) const override {
    const double b0 = breaks_.empty() ? 0.0 : breaks_[0];
    double k = std::floor((x - b0) / kTwoPi);
    double r = x - k * kTwoPi;
    if (r < b0) { r += kTwoPi; k -= 1.0; }
    if (r >= b0 + kTwoPi) { r -= kTwoPi; k += 1.0; }

    int piece = 0;
    double xeval = r;
    double value_offset = 0.0;
    if (!breaks_.empty()) {
      bool at_break = false;
      int break_index = -1;
      piece = locate_arc(breaks_, r, 1e-12, at_break, break_index);
      if (at_break && side == Side::Left) {
        piece = break_index == 0 ? static_cast<int>(breaks_.size()) - 1 : break_index - 1;
        if (break_index == 0) {
          xeval = breaks_[0] + kTwoPi;  // left limit reached through the wrap arc
          value_offset = -kTwoPi;
        } else {
          xeval = breaks_[break_index];
        }
      }
    }

    Binding b;
    b.set(kVarX, xeval);
    Jet j(order);
    for (int d = 0; d <= order; ++d) j[d] = pieces_[piece][d].eval(b);
    j[0] += k * kTwoPi + value_offset;
    return j;
  }

  int max_order() const override { return Jet::kMaxOrder; }

 private:
  std::vector<double> breaks_;
  std::vector<std::array<Expression, Jet::kMaxOrder + 1>> pieces_;
};

class CompositeMap final : public ScalarMap {
 public:
  CompositeMap(PiecewiseJetMap f, PiecewiseJetMap g)
      : f_(std::move(f)), g_(std::move(g)) {}

  Jet jet(double x, int order, Side side) const override {
    const Jet jg = g_.jet(x, order, side);
    // g is orientation preserving, so one-sided limits keep their side.
    const Jet jf = f_.jet(jg.value(), order, side);
    return compose_jets(jf, jg, order);
  }

  int max_order() const override {
    return std::min({3, f_.max_order(), g_.max_order()});
  }

 private:
  PiecewiseJetMap f_, g_;
};

class InverseMap final : public ScalarMap {
 public:
  explicit InverseMap(PiecewiseJetMap f) : f_(std::move(f)) {}

  Jet jet(double y, int order, Side side) const override {
    const double x = invert_lift_value(f_, y);
    Jet g(order);
    g[0] = x;
    if (order >= 1) {
      const Jet inv = invert_jet(f_.jet(x, order, side), order);
      for (int k = 1; k <= order; ++k) g[k] = inv[k];
    }
    return g;
  }

  int max_order() const override { return std::min(3, f_.max_order()); }

 private:
  PiecewiseJetMap f_;
};

}  // namespace

BreakConfig::BreakConfig(std::vector<double> angles, double eps_sep) {
  if (angles.empty()) throw GeometryError("break config must contain at least one point");
  if (angles.size() > 9) throw GeometryError("at most 9 break points are supported");
  for (double& a : angles) {
    if (!std::isfinite(a)) throw GeometryError("non-finite break angle");
    a = reduce_angle(a);
  }
  std::sort(angles.begin(), angles.end());
  for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
    if (angles[i + 1] - angles[i] < eps_sep)
      throw GeometryError("break points closer than eps_sep");
  }
  if (angles.size() > 1 && (angles.front() + kTwoPi) - angles.back() < eps_sep)
    throw GeometryError("break points closer than eps_sep across the wrap");
  angles_ = std::move(angles);
}

bool BreakConfig::approx_equal(const BreakConfig& other, double tol) const {
  if (size() != other.size()) return false;
  const int n = size();
  for (int offset = 0; offset < n; ++offset) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      ok = circle_distance(angles_[i], other.angles_[(i + offset) % n]) <= tol;
    if (ok) return true;
  }
  return false;
}

PiecewiseJetMap PiecewiseJetMap::from_lift(const Expression& lift) {
  PiecewiseJetMap m;
  m.impl_ = std::make_shared<ExpressionArcsMap>(std::vector<double>{},
                                                std::vector<Expression>{lift});
  m.max_order_ = Jet::kMaxOrder;
  m.validate_diffeo();
  return m;
}

PiecewiseJetMap PiecewiseJetMap::from_arcs(const BreakConfig& breaks,
                                           std::vector<Expression> arcs) {
  if (static_cast<int>(arcs.size()) != breaks.size())
    throw GeometryError("arc expression count must equal the break count");
  PiecewiseJetMap m;
  m.breaks_ = breaks.angles();
  m.impl_ = std::make_shared<ExpressionArcsMap>(m.breaks_, arcs);
  m.max_order_ = Jet::kMaxOrder;
  m.validate_diffeo();
  return m;
}

PiecewiseJetMap PiecewiseJetMap::identity() {
  return from_lift(Expression::variable(kVarX));
}

PiecewiseJetMap PiecewiseJetMap::rotation(double a) {
  return from_lift(Expression::variable(kVarX) + Expression::constant(a));
}

PiecewiseJetMap PiecewiseJetMap::from_impl(std::vector<double> breaks,
                                           std::shared_ptr<const ScalarMap> impl,
                                           int max_order) {
  PiecewiseJetMap m;
  m.breaks_ = std::move(breaks);
  m.impl_ = std::move(impl);
  m.max_order_ = max_order;
  return m;
}

Jet PiecewiseJetMap::jet(double x, int order, Side side, bool strict) const {
  if (order < 0 || order > Jet::kMaxOrder)
    throw GeometryError("jet order must lie in [0, 4]");
  if (order > max_order_)
    throw GeometryError("jet order " + std::to_string(order) +
                        " exceeds what this map provides (" +
                        std::to_string(max_order_) + ")");
  if (strict && side == Side::Auto && !breaks_.empty()) {
    const double r = reduce_angle(x);
    for (double b : breaks_)
      if (circle_distance(r, b) <= 1e-12)
        throw GeometryError("jet requested at a break point without a side");
  }
  return impl_->jet(x, order, side);
}

void PiecewiseJetMap::validate_diffeo(double delta_min, double tol_cont) const {
  // Degree 1.
  const double probe = breaks_.empty() ? 0.7 : breaks_[0] + 0.3;
  if (std::fabs(jet(probe + kTwoPi, 0).value() - jet(probe, 0).value() - kTwoPi) >
      10.0 * tol_cont)
    throw GeometryError("map is not a degree-1 lift");

  // Continuity at breaks and one-sided slopes at arc ends.
  const int n = static_cast<int>(breaks_.size());
  for (int i = 0; i < n; ++i) {
    const Jet left = jet(breaks_[i], 1, Side::Left);
    const Jet right = jet(breaks_[i], 1, Side::Right);
    if (std::fabs(left.value() - right.value()) > tol_cont)
      throw GeometryError("map is discontinuous at a break point");
    if (left.d(1) < delta_min || right.d(1) < delta_min)
      throw GeometryError("one-sided derivative below delta_min at a break point");
  }

  // Interior monotonicity, sampled.
  const double a = breaks_.empty() ? 0.0 : breaks_[0];
  const int samples = 33 * std::max(1, n);
  for (int s = 0; s <= samples; ++s) {
    const double x = a + kTwoPi * (s + 0.5) / (samples + 1);
    if (jet(x, 1).d(1) < delta_min)
      throw GeometryError("derivative below delta_min in an arc interior");
  }
}

Jet jet_of(const PiecewiseJetMap& m, double x, int order, Side side, bool strict) {
  return m.jet(x, order, side, strict);
}

Jet compose_jets(const Jet& jf, const Jet& jg, int order) {
  if (order > 3) throw GeometryError("composition jets are available through order 3");
  Jet h(order);
  h[0] = jf.value();
  if (order >= 1) h[1] = jf.d(1) * jg.d(1);
  if (order >= 2) h[2] = jf.d(2) * jg.d(1) * jg.d(1) + jf.d(1) * jg.d(2);
  if (order >= 3)
    h[3] = jf.d(3) * jg.d(1) * jg.d(1) * jg.d(1) +
           3.0 * jf.d(2) * jg.d(1) * jg.d(2) + jf.d(1) * jg.d(3);
  return h;
}

Jet invert_jet(const Jet& jf, int order) {
  if (order > 3) throw GeometryError("inverse jets are available through order 3");
  const double f1 = jf.d(1);
  if (std::fabs(f1) < defaults::delta_min)
    throw GeometryError("cannot invert a jet with derivative below delta_min");
  Jet g(order);
  g[0] = jf.value();  // caller replaces with the preimage
  if (order >= 1) g[1] = 1.0 / f1;
  if (order >= 2) g[2] = -jf.d(2) / (f1 * f1 * f1);
  if (order >= 3) {
    const double f2 = jf.d(2), f3 = jf.d(3);
    g[3] = (3.0 * f2 * f2 - f1 * f3) / (f1 * f1 * f1 * f1 * f1);
  }
  return g;
}

double invert_lift_value(const PiecewiseJetMap& f, double y, double tol) {
  // Bracket the root of F(x) - y using the degree-1 structure.
  double lo = y - kTwoPi, hi = y + kTwoPi;
  double flo = f.value(lo) - y, fhi = f.value(hi) - y;
  for (int grow = 0; grow < 8 && flo > 0.0; ++grow) {
    lo -= kTwoPi;
    flo = f.value(lo) - y;
  }
  for (int grow = 0; grow < 8 && fhi < 0.0; ++grow) {
    hi += kTwoPi;
    fhi = f.value(hi) - y;
  }
  if (flo > 0.0 || fhi < 0.0) throw GeometryError("failed to bracket inverse value");

  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const Jet j = f.jet(x, 1);
    const double r = j.value() - y;
    if (std::fabs(r) <= tol) return x;
    if (r > 0.0) hi = x; else lo = x;
    double step = j.d(1) > defaults::delta_min ? r / j.d(1) : 0.0;
    double next = x - step;
    if (step == 0.0 || next <= lo || next >= hi) next = 0.5 * (lo + hi);  // bisect
    if (hi - lo < 1e-15 * std::max(1.0, std::fabs(x))) return next;
    x = next;
  }
  throw GeometryError("inverse iteration did not converge");
}

PiecewiseJetMap compose_maps(const PiecewiseJetMap& f, const PiecewiseJetMap& g,
                             bool groupoid_strict, double tol) {
  std::vector<double> merged = g.breaks();
  if (groupoid_strict) {
    // src(f) must equal trg(g): f's breaks must be the g-images of g's breaks.
    if (f.breaks().size() != g.breaks().size())
      throw GeometryError("break counts differ in strict composition");
    for (double b : g.breaks()) {
      const double image = reduce_angle(g.value(b));
      bool matched = false;
      for (double fb : f.breaks())
        if (circle_distance(image, fb) <= tol) { matched = true; break; }
      if (!matched)
        throw GeometryError("break sets do not match under strict composition");
    }
  } else {
    for (double fb : f.breaks()) {
      const double pullback = reduce_angle(invert_lift_value(g, fb));
      bool duplicate = false;
      for (double b : merged)
        if (circle_distance(pullback, b) <= tol) { duplicate = true; break; }
      if (!duplicate) merged.push_back(pullback);
    }
    std::sort(merged.begin(), merged.end());
  }
  const int order = std::min({3, f.max_order(), g.max_order()});
  return PiecewiseJetMap::from_impl(std::move(merged),
                                    std::make_shared<CompositeMap>(f, g), order);
}

PiecewiseJetMap invert_map(const PiecewiseJetMap& f) {
  std::vector<double> image;
  image.reserve(f.breaks().size());
  for (double b : f.breaks()) image.push_back(reduce_angle(f.value(b)));
  std::sort(image.begin(), image.end());
  const int order = std::min(3, f.max_order());
  return PiecewiseJetMap::from_impl(std::move(image),
                                    std::make_shared<InverseMap>(f), order);
}

}  // namespace bvir
