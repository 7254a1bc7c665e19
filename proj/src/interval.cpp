#include "bvir/interval.hpp"

#include <cmath>

namespace bvir {

namespace {

struct IntervalDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expression map on an interval, no periodic reduction.
class IntervalExpressionMap final : public ScalarMap {
 public:
  explicit IntervalExpressionMap(const Expression& e) {
    table_[0] = e;
    for (int k = 1; k <= Jet::kMaxOrder; ++k) table_[k] = table_[k - 1].derivative(kVarX);
  }

  Jet jet(double x, int order, Side) const override {
    Binding b;
    b.set(kVarX, x);
    Jet j(order);
    for (int k = 0; k <= order; ++k) j[k] = table_[k].eval(b);
    return j;
  }

  int max_order() const override { return Jet::kMaxOrder; }

 private:
  std::array<Expression, Jet::kMaxOrder + 1> table_;
};

class IntervalCompositeMap final : public ScalarMap {
 public:
  IntervalCompositeMap(std::shared_ptr<const ScalarMap> f,
                       std::shared_ptr<const ScalarMap> g)
      : f_(std::move(f)), g_(std::move(g)) {}

  Jet jet(double x, int order, Side side) const override {
    const Jet jg = g_->jet(x, order, side);
    const Jet jf = f_->jet(jg.value(), order, side);
    return compose_jets(jf, jg, order);
  }

  int max_order() const override { return std::min({3, f_->max_order(), g_->max_order()}); }

 private:
  std::shared_ptr<const ScalarMap> f_, g_;
};

}  // namespace

IntervalField::IntervalField(double a, double b, Expression profile, double tol)
    : a_(a), b_(b), profile_(std::move(profile)) {
  if (!(a < b)) throw GeometryError("interval endpoints must satisfy a < b");
  derivs_[0] = profile_;
  for (int k = 1; k <= Jet::kMaxOrder; ++k) derivs_[k] = derivs_[k - 1].derivative(kVarX);
  Binding bind;
  bind.set(kVarX, a_);
  const double ua = profile_.eval(bind);
  bind.set(kVarX, b_);
  const double ub = profile_.eval(bind);
  vanishing_ = std::fabs(ua) < tol && std::fabs(ub) < tol;
}

double IntervalField::deriv(double x, int k) const {
  Binding b;
  b.set(kVarX, x);
  return derivs_[k].eval(b);
}

IntervalField sin_basis_field(int m) {
  if (m < 1) throw std::invalid_argument("sin basis index must be >= 1");
  const double pi = kTwoPi / 2.0;
  return IntervalField(0.0, pi, sin(static_cast<double>(m) * Expression::variable(kVarX)));
}

double omega_interval(const IntervalField& u, const IntervalField& v,
                      const QuadratureSpec& q) {
  if (u.a() != v.a() || u.b() != v.b())
    throw GeometryError("cocycle requires fields on the same interval");
  if (!u.vanishing() || !v.vanishing())
    throw GeometryError("cocycle requires fields vanishing at the endpoints");
  auto integrand = [&](double x) {
    return u.deriv(x, 1) * v.deriv(x, 2) - u.deriv(x, 2) * v.deriv(x, 1);
  };
  return integrate_arc(integrand, u.a(), u.b(), q);
}

std::vector<SinBasisTerm> sin_basis_bracket(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("sin basis indices must be >= 1");
  // [e_m, e_n] = (n-m)/2 e_{n+m} + (m+n)/2 e_{m-n}, with e_{-k} = -e_k, e_0 = 0.
  std::vector<SinBasisTerm> terms;
  auto push = [&](int index, Rational coeff) {
    if (index == 0 || coeff.is_zero()) return;
    if (index < 0) { index = -index; coeff = -coeff; }
    for (SinBasisTerm& t : terms) {
      if (t.index == index) {
        t.coeff = t.coeff + coeff;
        return;
      }
    }
    terms.push_back({index, coeff});
  };
  push(n + m, Rational(n - m, 2));
  push(m - n, Rational(m + n, 2));
  std::erase_if(terms, [](const SinBasisTerm& t) { return t.coeff.is_zero(); });
  return terms;
}

Rational sin_basis_omega(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("sin basis indices must be >= 1");
  if (m == n)
    throw std::invalid_argument(
        "sin_basis_omega(m, m) is excluded: the closed form is singular and "
        "antisymmetry forces the value 0");
  if ((m + n) % 2 == 0) return Rational(0);
  const long long mm = m, nn = n;
  return Rational(2 * mm * nn * (mm * mm + nn * nn), mm * mm - nn * nn);
}

Certificate nontriviality_certificate(int K) {
  if (K < 5 || K % 2 == 0)
    throw std::invalid_argument("certificate bound must be odd and >= 5");
  auto lambda = [](long long k) {
    // lambda_1 = 0; the l = 1 rows force lambda_k = -(k^4 - 1)/(4k).
    if (k == 1) return Rational(0);
    return -Rational(k * k * k * k - 1, 4 * k);
  };
  Certificate cert;
  for (long long k = 3; k <= K; k += 2) {
    for (long long l = 1; l < k; l += 2) {
      CertificateRow row;
      row.k = k;
      row.l = l;
      row.lambda_k = lambda(k);
      row.lambda_l = lambda(l);
      row.lhs = Rational(k * k * k * k - l * l * l * l, 4 * k * l);
      row.rhs = Rational(k) * row.lambda_l - Rational(l) * row.lambda_k;
      row.residual = row.lhs - row.rhs;
      if (!row.residual.is_zero() && !cert.smallest_violation)
        cert.smallest_violation = std::make_pair(k, l);
      cert.rows.push_back(row);
    }
  }
  cert.valid = cert.smallest_violation.has_value();
  return cert;
}

IntervalDiffeo::IntervalDiffeo(double a, double b, const Expression& map,
                               double delta_min) {
  if (!(a < b)) throw GeometryError("interval endpoints must satisfy a < b");
  a_ = a;
  b_ = b;
  impl_ = std::make_shared<IntervalExpressionMap>(map);
  ta_ = impl_->jet(a, 0, Side::Auto).value();
  tb_ = impl_->jet(b, 0, Side::Auto).value();
  if (!(ta_ < tb_)) throw GeometryError("interval map must be orientation preserving");
  for (int s = 0; s <= 64; ++s) {
    const double x = a + (b - a) * s / 64.0;
    if (impl_->jet(x, 1, Side::Auto).d(1) < delta_min)
      throw GeometryError("interval map derivative below delta_min");
  }
}

IntervalDiffeo IntervalDiffeo::identity(double a, double b) {
  return IntervalDiffeo(a, b, Expression::variable(kVarX));
}

bool IntervalDiffeo::fixes_endpoints(double tol) const {
  return std::fabs(ta_ - a_) < tol && std::fabs(tb_ - b_) < tol;
}

Jet IntervalDiffeo::jet(double x, int order) const {
  return impl_->jet(x, order, Side::Auto);
}

IntervalDiffeo compose_interval(const IntervalDiffeo& phi, const IntervalDiffeo& psi,
                                double tol) {
  if (std::fabs(phi.src_a() - psi.trg_a()) > tol ||
      std::fabs(phi.src_b() - psi.trg_b()) > tol)
    throw GeometryError("interval maps are not composable: src(phi) != trg(psi)");

  class Composite final : public ScalarMap {
   public:
    Composite(IntervalDiffeo f, IntervalDiffeo g) : f_(std::move(f)), g_(std::move(g)) {}
    Jet jet(double x, int order, Side) const override {
      const Jet jg = g_.jet(x, order);
      const Jet jf = f_.jet(jg.value(), order);
      return compose_jets(jf, jg, order);
    }
    int max_order() const override { return 3; }

   private:
    IntervalDiffeo f_, g_;
  };

  auto impl = std::make_shared<Composite>(phi, psi);
  const double ta = impl->jet(psi.src_a(), 0, Side::Auto).value();
  const double tb = impl->jet(psi.src_b(), 0, Side::Auto).value();
  return IntervalDiffeo(psi.src_a(), psi.src_b(), ta, tb, std::move(impl));
}

double chi_interval(const IntervalDiffeo& phi, const IntervalDiffeo& psi,
                    const QuadratureSpec& q, double tol) {
  if (std::fabs(phi.src_a() - psi.trg_a()) > tol ||
      std::fabs(phi.src_b() - psi.trg_b()) > tol)
    throw GeometryError("chi requires composable maps: src(phi) != trg(psi)");
  auto integrand = [&](double x) {
    const Jet jpsi = psi.jet(x, 2);
    const double psi_x = jpsi.d(1);
    const double phi_x = phi.jet(jpsi.value(), 1).d(1);
    if (psi_x < defaults::delta_min || phi_x < defaults::delta_min)
      throw GeometryError("derivative below delta_min inside chi integrand");
    return std::log(phi_x) * jpsi.d(2) / psi_x;
  };
  return integrate_arc(integrand, psi.src_a(), psi.src_b(), q);
}

MultibreakField::MultibreakField(std::vector<double> partition,
                                 std::vector<Expression> pieces, double tol)
    : partition_(std::move(partition)), pieces_(std::move(pieces)) {
  if (partition_.size() < 2 || pieces_.size() + 1 != partition_.size())
    throw GeometryError("partition must have one more point than there are pieces");
  for (std::size_t j = 0; j + 1 < partition_.size(); ++j) {
    if (!(partition_[j] < partition_[j + 1]))
      throw GeometryError("partition points must be strictly increasing");
  }
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    Binding b;
    b.set(kVarX, partition_[j]);
    const double lo = pieces_[j].eval(b);
    b.set(kVarX, partition_[j + 1]);
    const double hi = pieces_[j].eval(b);
    if (std::fabs(lo) > tol || std::fabs(hi) > tol)
      throw GeometryError("multibreak field must vanish at every partition point");
  }
}

IntervalField MultibreakField::segment(int j) const {
  return IntervalField(partition_[j], partition_[j + 1], pieces_[j]);
}

std::vector<double> multibreak_interval_cocycles(const MultibreakField& u,
                                                 const MultibreakField& v,
                                                 const QuadratureSpec& q) {
  if (u.partition() != v.partition())
    throw GeometryError("multibreak fields must share the partition");
  std::vector<double> out;
  out.reserve(u.segments());
  for (int j = 0; j < u.segments(); ++j)
    out.push_back(omega_interval(u.segment(j), v.segment(j), q));
  return out;
}

}  // namespace bvir
