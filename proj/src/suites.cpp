#include "bvir/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "bvir/batch.hpp"
#include "bvir/interval.hpp"
#include "bvir/linkage.hpp"

namespace bvir {

namespace {

const double kPi = kTwoPi / 2.0;

Expression X() { return Expression::variable(kVarX); }
Expression P(int i) { return Expression::variable(var_p(i)); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

std::mt19937_64 case_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

BreakConfig random_config(std::mt19937_64& rng, int n, double min_arc = 0.4) {
  for (;;) {
    std::vector<double> angles(n);
    for (double& a : angles) a = uniform(rng, 0.0, kTwoPi);
    try {
      BreakConfig p(angles);
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        ok = p.arc_end(i) - p.arc_begin(i) > min_arc;
      if (ok) return p;
    } catch (const GeometryError&) {
    }
  }
}

// Trig-polynomial section (degree <= 5, |coeff| <= 1) with mild p-coupling.
Section random_section(std::mt19937_64& rng, int n, int degree = 2) {
  Expression e = Expression::constant(uniform(rng, -0.3, 0.3));
  for (int k = 1; k <= degree; ++k) {
    const int j = 1 + static_cast<int>(rng() % n);
    e = e + (uniform(rng, -1.0, 1.0) + uniform(rng, -0.4, 0.4) * cos(P(j))) *
                sin(static_cast<double>(k) * X());
    e = e + uniform(rng, -1.0, 1.0) * cos(static_cast<double>(k) * X());
  }
  return Section(n, e);
}

// Isotropy field: per-arc sin series vanishing at the arc ends.
BrokenField random_isotropy_field(std::mt19937_64& rng, const BreakConfig& p,
                                  int harmonics = 2, double amp = 0.6) {
  std::vector<Expression> arcs;
  for (int i = 0; i < p.size(); ++i) {
    const double len = p.arc_end(i) - p.arc_begin(i);
    Expression e = Expression::constant(0.0);
    for (int k = 1; k <= harmonics; ++k)
      e = e + uniform(rng, -amp, amp) / k *
                  sin((k * kPi / len) * (X() - p.arc_begin(i)));
    arcs.push_back(e);
  }
  return BrokenField(p, arcs);
}

// Break-preserving arrow with derivative jumps at the breaks.
BrokenDiffeo bump_arrow(std::mt19937_64& rng, const BreakConfig& p, double amp = 0.2) {
  std::vector<Expression> arcs;
  for (int i = 0; i < p.size(); ++i) {
    const double len = p.arc_end(i) - p.arc_begin(i);
    const double c = uniform(rng, -amp, amp) * len / kPi;
    arcs.push_back(X() + c * sin((kPi / len) * (X() - p.arc_begin(i))));
  }
  return BrokenDiffeo::from_arcs(p, arcs);
}

// Smooth degree-1 lift with small periodic perturbation.
BrokenDiffeo smooth_arrow(std::mt19937_64& rng, const BreakConfig& p) {
  const Expression e = X() + uniform(rng, -0.25, 0.25) * sin(X() + uniform(rng, 0.0, kTwoPi)) +
                       uniform(rng, -0.1, 0.1) * cos(2.0 * X() + uniform(rng, 0.0, kTwoPi));
  return BrokenDiffeo::from_lift(p, e);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
  }
};

CheckRecord make_record(std::string id, std::string inputs, double residual, double tol,
                        std::string details = {}) {
  CheckRecord rec;
  rec.id = std::move(id);
  rec.inputs_digest = digest(inputs);
  rec.residual = residual;
  rec.tolerance = tol;
  rec.pass = std::isfinite(residual) && std::fabs(residual) <= tol;
  rec.details = std::move(details);
  return rec;
}

CheckRecord error_record(std::string id, const std::string& what) {
  CheckRecord rec;
  rec.id = std::move(id);
  rec.inputs_digest = digest(what);
  rec.residual = std::numeric_limits<double>::quiet_NaN();
  rec.tolerance = 0.0;
  rec.pass = false;
  rec.details = "evaluation error: " + what;
  return rec;
}

template <class F>
std::vector<CheckRecord> run_cases(std::size_t count, bool parallel, F&& one_case) {
  auto guarded = [&](std::size_t i) -> std::vector<CheckRecord> {
    try {
      return one_case(i);
    } catch (const std::exception& e) {
      return {error_record("case" + std::to_string(i), e.what())};
    }
  };
  const auto nested = batch::map<std::vector<CheckRecord>>(count, guarded, parallel);
  std::vector<CheckRecord> flat;
  for (const auto& group : nested)
    flat.insert(flat.end(), group.begin(), group.end());
  return flat;
}

// ---------------------------------------------------------------------------

Report suite_algebroid(const Scenario& scn, const SuiteOptions& opt) {
  Report rep;
  rep.suite = "algebroid-cocycle";
  rep.seed = opt.seed;
  const int per_n = opt.count > 0 ? opt.count : 50;
  const double tol = opt.tol > 0 ? opt.tol : 1e-5;
  QuadratureSpec q;
  q.abs_tol = std::min(scn.quadrature().abs_tol, 1e-12);
  rep.quad_abs_tol = q.abs_tol;
  rep.h_step = 1e-4;

  struct Case {
    int n, trial;
  };
  std::vector<Case> cases;
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < per_n; ++t) cases.push_back({n, t});

  rep.checks = run_cases(cases.size(), opt.parallel, [&](std::size_t idx) {
    const Case c = cases[idx];
    std::mt19937_64 rng = case_rng(opt.seed, idx);
    const Section u = random_section(rng, c.n);
    const Section v = random_section(rng, c.n);
    const Section w = random_section(rng, c.n);
    const BreakConfig p = random_config(rng, c.n);
    std::vector<CheckRecord> out;
    for (int arc = 0; arc < c.n; ++arc) {
      const double res =
          algebroid_cocycle_residual(omega_two_form(arc, q), u, v, w, p, 1e-4);
      std::ostringstream id;
      id << "n" << c.n << "/triple" << c.trial << "/arc" << arc;
      out.push_back(make_record(id.str(),
                                u.profile().str() + "|" + v.profile().str() + "|" +
                                    w.profile().str() + "|" + fmt(p.angle(0)),
                                res, tol));
    }
    return out;
  });

  // scenario-pinned triple, when the document provides three sections
  const auto names = scn.section_names();
  if (names.size() >= 3) {
    try {
      for (int arc = 0; arc < scn.breaks().size(); ++arc) {
        const double res = algebroid_cocycle_residual(
            omega_two_form(arc, q), scn.section(names[0]), scn.section(names[1]),
            scn.section(names[2]), scn.breaks(), 1e-4);
        rep.checks.push_back(make_record("pinned/arc" + std::to_string(arc),
                                         names[0] + "|" + names[1] + "|" + names[2], res,
                                         tol));
      }
    } catch (const std::exception& e) {
      rep.checks.push_back(error_record("pinned", e.what()));
    }
  }
  return rep;
}

Report suite_groupoid(const Scenario& scn, const SuiteOptions& opt) {
  Report rep;
  rep.suite = "groupoid-cocycle";
  rep.seed = opt.seed;
  const int count = opt.count > 0 ? opt.count : 30;
  const double tol = opt.tol > 0 ? opt.tol : 1e-8;
  const QuadratureSpec q = scn.quadrature();
  rep.quad_abs_tol = q.abs_tol;
  rep.flow_steps_per_unit = opt.flow_steps;
  FlowSpec fs;
  fs.steps_per_unit = opt.flow_steps;

  rep.checks = run_cases(count, opt.parallel, [&](std::size_t idx) {
    std::mt19937_64 rng = case_rng(opt.seed, idx);
    const int n = 1 + static_cast<int>(idx % 3);
    const BreakConfig p = random_config(rng, n);
    const int pattern = static_cast<int>(idx / 3) % 3;

    BrokenDiffeo eta = [&]() {
      switch (pattern) {
        case 0: return bump_arrow(rng, p);
        case 1: return BrokenDiffeo::rotation(p, uniform(rng, 0.3, kTwoPi - 0.3));
        default: return flow(random_isotropy_field(rng, p), uniform(rng, 0.1, 0.3), fs);
      }
    }();
    const BreakConfig mid = eta.trg();
    BrokenDiffeo psi = flow(random_isotropy_field(rng, mid), uniform(rng, 0.1, 0.3), fs);
    const BreakConfig top = psi.trg();
    BrokenDiffeo phi = [&]() {
      switch (pattern) {
        case 0: return flow(random_isotropy_field(rng, top), uniform(rng, 0.1, 0.3), fs);
        case 1: return bump_arrow(rng, top);
        default: return smooth_arrow(rng, top);
      }
    }();

    const auto res = groupoid_cocycle_residual(phi, psi, eta, q);
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, std::fabs(r));
    std::ostringstream id;
    id << "triple" << idx << "/n" << n << "/pattern" << pattern;
    return std::vector<CheckRecord>{make_record(
        id.str(), fmt(p.angle(0)) + "#" + std::to_string(idx), worst, tol)};
  });

  if (scn.has_diffeo("phi") && scn.has_diffeo("psi") && scn.has_diffeo("eta")) {
    try {
      const auto res =
          groupoid_cocycle_residual(scn.diffeo("phi"), scn.diffeo("psi"),
                                    scn.diffeo("eta"), q);
      double worst = 0.0;
      for (double r : res) worst = std::max(worst, std::fabs(r));
      rep.checks.push_back(make_record("pinned/phi-psi-eta", "phi|psi|eta", worst, tol));
    } catch (const std::exception& e) {
      rep.checks.push_back(error_record("pinned/phi-psi-eta", e.what()));
    }
  }
  return rep;
}

Report suite_jacobi(const Scenario& scn, const SuiteOptions& opt) {
  Report rep;
  rep.suite = "jacobi";
  rep.seed = opt.seed;
  const int count = opt.count > 0 ? opt.count : 5;
  const double tol = opt.tol > 0 ? opt.tol : 1e-8;
  const QuadratureSpec q = scn.quadrature();
  rep.quad_abs_tol = q.abs_tol;
  rep.flow_steps_per_unit = opt.flow_steps;
  FlowSpec fs;
  fs.steps_per_unit = opt.flow_steps;

  rep.checks = run_cases(count, opt.parallel, [&](std::size_t idx) {
    std::mt19937_64 rng = case_rng(opt.seed, idx);
    const int n = 1 + static_cast<int>(idx % 3);
    const BreakConfig p = random_config(rng, n);
    const Section u = random_section(rng, n);
    const Section v = random_section(rng, n);
    const Section w = random_section(rng, n);
    std::vector<CheckRecord> out;
    const std::string tag = "case" + std::to_string(idx) + "/n" + std::to_string(n);
    const std::string inputs = u.profile().str() + "|" + v.profile().str();

    // Leibniz rule
    {
      Expression f = 0.7 * sin(P(1)) + 0.4;
      Expression lie_f = Expression::constant(0.0);
      for (int i = 1; i <= n; ++i) lie_f = lie_f + u.at_break(i) * f.derivative(var_p(i));
      const Expression resid = bracket_sections(u, Section(n, f * v.profile())).profile() -
                               f * bracket_sections(u, v).profile() - lie_f * v.profile();
      double worst = 0.0;
      for (int s = 0; s < 100; ++s) {
        Binding b = bind_config(random_config(rng, n));
        b.set(kVarX, uniform(rng, 0.0, kTwoPi));
        worst = std::max(worst, std::fabs(resid.eval(b)));
      }
      out.push_back(make_record(tag + "/leibniz", inputs, worst, tol));
    }

    // antisymmetry of the bracket
    {
      const Section ab = bracket_sections(u, v);
      const Section ba = bracket_sections(v, u);
      double worst = 0.0;
      for (int s = 0; s < 50; ++s) {
        const BreakConfig pp = random_config(rng, n);
        const double x = uniform(rng, 0.0, kTwoPi);
        worst = std::max(worst, std::fabs(ab.eval(x, pp) + ba.eval(x, pp)));
      }
      out.push_back(make_record(tag + "/antisymmetry", inputs, worst, tol));
    }

    // Jacobi through the S^1 x B embedding
    {
      const EmbeddedField Xu = embed_section(u), Xv = embed_section(v),
                          Xw = embed_section(w);
      const EmbeddedField j1 = lie_bracket(lie_bracket(Xu, Xv), Xw);
      const EmbeddedField j2 = lie_bracket(lie_bracket(Xv, Xw), Xu);
      const EmbeddedField j3 = lie_bracket(lie_bracket(Xw, Xu), Xv);
      const EmbeddedField iterated =
          embed_section(bracket_sections(bracket_sections(u, v), w));
      double worst = 0.0;
      for (int s = 0; s < 25; ++s) {
        Binding b = bind_config(random_config(rng, n));
        b.set(kVarX, uniform(rng, 0.0, kTwoPi));
        for (std::size_t c = 0; c < j1.components.size(); ++c)
          worst = std::max(worst, std::fabs(j1.components[c].eval(b) +
                                            j2.components[c].eval(b) +
                                            j3.components[c].eval(b)));
        worst = std::max(worst, std::fabs(j1.components[0].eval(b) -
                                          iterated.components[0].eval(b)));
      }
      out.push_back(make_record(tag + "/jacobi-embedding", inputs, worst, tol));
    }

    // anchor morphism
    {
      const Section bs = bracket_sections(u, v);
      double worst = 0.0;
      for (int i = 1; i <= n; ++i) {
        Expression rhs = Expression::constant(0.0);
        for (int k = 1; k <= n; ++k)
          rhs = rhs + u.at_break(k) * v.at_break(i).derivative(var_p(k)) -
                v.at_break(k) * u.at_break(i).derivative(var_p(k));
        const Expression diff = bs.at_break(i) - rhs;
        for (int s = 0; s < 20; ++s)
          worst = std::max(worst,
                           std::fabs(diff.eval(bind_config(random_config(rng, n)))));
      }
      out.push_back(make_record(tag + "/anchor-morphism", inputs, worst, tol));
    }

    // groupoid unit and inverse laws on generated arrows
    {
      const BrokenDiffeo arrow = (idx % 2 == 0)
                                     ? flow(random_isotropy_field(rng, p),
                                            uniform(rng, 0.1, 0.3), fs)
                                     : bump_arrow(rng, p);
      const BrokenDiffeo id = BrokenDiffeo::identity(p);
      const BrokenDiffeo right_unit = compose_diffeos(arrow, id);
      const BrokenDiffeo left_unit = compose_diffeos(BrokenDiffeo::identity(arrow.trg()), arrow);
      const BrokenDiffeo round = compose_diffeos(arrow.inverse(), arrow);
      double worst = 0.0;
      for (int s = 0; s < 30; ++s) {
        const double x = uniform(rng, 0.0, kTwoPi);
        worst = std::max(worst,
                         std::fabs(right_unit.map().value(x) - arrow.map().value(x)));
        worst = std::max(worst,
                         std::fabs(left_unit.map().value(x) - arrow.map().value(x)));
        worst = std::max(worst, std::fabs(round.map().value(x) - x));
      }
      out.push_back(make_record(tag + "/groupoid-laws", inputs, worst, tol));
    }

    // extended multiplication associativity, and its exact agreement with
    // the cocycle residual
    {
      const BrokenDiffeo eta = bump_arrow(rng, p);
      const BrokenDiffeo psi = flow(random_isotropy_field(rng, p),
                                    uniform(rng, 0.1, 0.25), fs);
      const BrokenDiffeo phi = smooth_arrow(rng, p);
      std::vector<double> t0(n), s0(n), r0(n);
      for (int i = 0; i < n; ++i) {
        t0[i] = uniform(rng, -1.0, 1.0);
        s0[i] = uniform(rng, -1.0, 1.0);
        r0[i] = uniform(rng, -1.0, 1.0);
      }
      const ExtendedDiffeo A{phi, t0}, B{psi, s0}, C{eta, r0};
      const ExtendedDiffeo left = extended_multiply(extended_multiply(A, B, q), C, q);
      const ExtendedDiffeo right = extended_multiply(A, extended_multiply(B, C, q), q);
      const auto res = groupoid_cocycle_residual(phi, psi, eta, q);
      double assoc = 0.0, match = 0.0;
      for (int i = 0; i < n; ++i) {
        assoc = std::max(assoc, std::fabs(left.charge[i] - right.charge[i]));
        match = std::max(match,
                         std::fabs((right.charge[i] - left.charge[i]) - res[i]));
      }
      out.push_back(make_record(tag + "/extended-associativity", inputs, assoc, tol));
      out.push_back(make_record(tag + "/associativity-equals-cocycle", inputs, match,
                                1e-12));
    }
    return out;
  });
  return rep;
}

Report suite_bott(const Scenario& scn, const SuiteOptions& opt) {
  Report rep;
  rep.suite = "bott-boundary";
  rep.seed = opt.seed;
  const int count = opt.count > 0 ? opt.count : 20;
  const double tol = opt.tol > 0 ? opt.tol : 1e-7;
  const QuadratureSpec q = scn.quadrature();
  rep.quad_abs_tol = q.abs_tol;

  rep.checks = run_cases(count, opt.parallel, [&](std::size_t idx) {
    std::mt19937_64 rng = case_rng(opt.seed, idx);
    const int n = 1 + static_cast<int>(idx % 3);
    const BreakConfig p = random_config(rng, n);
    const bool smooth = idx % 2 == 1;
    const BrokenDiffeo psi = smooth ? smooth_arrow(rng, p) : bump_arrow(rng, p, 0.3);
    const BrokenDiffeo phi = smooth ? smooth_arrow(rng, psi.trg())
                                    : bump_arrow(rng, psi.trg(), 0.25);
    const BottComparison cmp = bott_boundary_relation(phi, psi, q);
    std::vector<CheckRecord> out;
    const std::string tag = "pair" + std::to_string(idx) + (smooth ? "/smooth" : "/jump");
    out.push_back(make_record(tag + "/relation", fmt(cmp.chi_sum),
                              cmp.lhs() - cmp.rhs(), tol,
                              "chi_sum=" + fmt(cmp.chi_sum) +
                                  " classical=" + fmt(cmp.classical_integral) +
                                  " boundary=" + fmt(cmp.boundary_sum)));
    if (smooth)
      out.push_back(
          make_record(tag + "/boundary-zero", fmt(cmp.boundary_sum), cmp.boundary_sum, 1e-9));
    return out;
  });

  if (scn.has_diffeo("phi") && scn.has_diffeo("psi")) {
    try {
      const BottComparison cmp =
          bott_boundary_relation(scn.diffeo("phi"), scn.diffeo("psi"), q);
      rep.checks.push_back(make_record("pinned/phi-psi", "phi|psi",
                                       cmp.lhs() - cmp.rhs(), tol,
                                       "chi_sum=" + fmt(cmp.chi_sum) +
                                           " boundary=" + fmt(cmp.boundary_sum)));
    } catch (const std::exception& e) {
      rep.checks.push_back(error_record("pinned/phi-psi", e.what()));
    }
  }
  return rep;
}

Report suite_linkage(const Scenario& scn, const SuiteOptions& opt) {
  Report rep;
  rep.suite = "linkage";
  rep.seed = opt.seed;
  const int count = opt.count > 0 ? opt.count : 20;
  const double h = opt.h;
  rep.h_step = h;
  QuadratureSpec q;
  q.abs_tol = std::min(scn.quadrature().abs_tol, 1e-13);
  rep.quad_abs_tol = q.abs_tol;
  FlowSpec fs;  // full default resolution; flow times here are tiny
  rep.flow_steps_per_unit = fs.steps_per_unit;

  // pinned sin-basis pair: target the exact arc cocycle value
  {
    const BreakConfig p({0.0, kPi});
    const BrokenField e1(p, sin(X()));
    const BrokenField e2(p, sin(2.0 * X()));
    const double derived = derive_algebroid_cocycle(e1, e2, p, 0, h, fs, q);
    rep.checks.push_back(make_record("pinned/e1-e2", "sin(x)|sin(2x)",
                                     derived - (-20.0 / 3.0), 1e-3,
                                     "derived=" + fmt(derived) + " target=-20/3"));
  }

  auto pair_checks = run_cases(count, opt.parallel, [&](std::size_t idx) {
    std::mt19937_64 rng = case_rng(opt.seed, idx + 1000);
    const int n = 1 + static_cast<int>(idx % 3);
    const BreakConfig p = random_config(rng, n);
    const BrokenField u = random_isotropy_field(rng, p, 3, 0.9);
    const BrokenField v = random_isotropy_field(rng, p, 3, 0.9);
    const int arc = static_cast<int>(idx) % n;
    const double reference = omega_arc(u, v, arc, q);

    std::vector<CheckRecord> out;
    const std::string tag = "pair" + std::to_string(idx) + "/n" + std::to_string(n);
    const std::string inputs = fmt(reference) + "#" + std::to_string(idx);

    const double value = derive_algebroid_cocycle(u, v, p, arc, h, fs, q);
    const double scale = std::max(1.0, std::fabs(reference));
    const double value_tol = std::max(1e-3, 5.0 * h * h * scale);
    out.push_back(make_record(tag + "/value", inputs, value - reference, value_tol,
                              "derived=" + fmt(value) + " omega=" + fmt(reference)));

    // convergence order on a coarser Richardson pair, where the truncation
    // dominates the quadrature noise
    const double h0 = 1e-2;
    const double e1 = std::fabs(
        derive_algebroid_cocycle(u, v, p, arc, h0, fs, q) - reference);
    const double e2 = std::fabs(
        derive_algebroid_cocycle(u, v, p, arc, h0 / 2, fs, q) - reference);
    if (e1 > 2.5e-7 && e2 > 7e-8) {
      // thresholds keep the quadrature-noise contribution to the measured
      // order below ~0.15
      const double order = std::log2(e1 / e2);
      out.push_back(make_record(tag + "/order", inputs, order - 2.0, 0.3,
                                "order=" + fmt(order)));
    } else {
      // signal below the measurable floor: the value itself must be tight
      out.push_back(make_record(tag + "/order", inputs, value - reference, 1e-4,
                                "order unmeasurable (errors " + fmt(e1) + ", " +
                                    fmt(e2) + " at h0=" + fmt(h0) + ")"));
    }
    return out;
  });
  rep.checks.insert(rep.checks.end(), pair_checks.begin(), pair_checks.end());
  return rep;
}

Report suite_interval(const Scenario& scn, const SuiteOptions& opt) {
  Report rep;
  rep.suite = "interval-cocycle";
  rep.seed = opt.seed;
  const int fixed_count = opt.count > 0 ? opt.count : 20;
  const int moving_count = opt.count > 0 ? std::max(1, opt.count / 2) : 10;
  const double tol = opt.tol > 0 ? opt.tol : 1e-8;
  const QuadratureSpec q = scn.quadrature();
  rep.quad_abs_tol = q.abs_tol;

  auto residual = [&](const IntervalDiffeo& phi, const IntervalDiffeo& psi,
                      const IntervalDiffeo& eta) {
    return chi_interval(phi, compose_interval(psi, eta), q) + chi_interval(psi, eta, q) -
           chi_interval(compose_interval(phi, psi), eta, q) - chi_interval(phi, psi, q);
  };

  auto fixed_checks = run_cases(fixed_count, opt.parallel, [&](std::size_t idx) {
    std::mt19937_64 rng = case_rng(opt.seed, idx);
    auto draw = [&]() {
      Expression e = X();
      for (int k = 1; k <= 3; ++k)
        e = e + uniform(rng, -0.03, 0.03) * sin((k * kPi) * X());
      return IntervalDiffeo(0.0, 1.0, e);
    };
    const IntervalDiffeo phi = draw(), psi = draw(), eta = draw();
    return std::vector<CheckRecord>{
        make_record("fixed" + std::to_string(idx), "triple#" + std::to_string(idx),
                    residual(phi, psi, eta), tol)};
  });
  rep.checks = fixed_checks;

  auto moving_checks = run_cases(moving_count, opt.parallel, [&](std::size_t idx) {
    std::mt19937_64 rng = case_rng(opt.seed, idx + 5000);
    // chain of intervals I0 -> I1 -> I2 -> I3
    double a[4], b[4];
    a[0] = 0.0;
    b[0] = 1.0;
    for (int j = 1; j < 4; ++j) {
      a[j] = uniform(rng, -0.5, 0.5);
      b[j] = a[j] + uniform(rng, 0.8, 1.6);
    }
    auto segment_map = [&](int j) {
      // [a_j, b_j] -> [a_{j+1}, b_{j+1}] affine plus an interior bump
      const double len = b[j] - a[j];
      const double slope = (b[j + 1] - a[j + 1]) / len;
      const double c = uniform(rng, -0.08, 0.08) * slope * len / kPi;
      const Expression e = a[j + 1] + slope * (X() - a[j]) +
                           c * sin((kPi / len) * (X() - a[j]));
      return IntervalDiffeo(a[j], b[j], e);
    };
    const IntervalDiffeo eta = segment_map(0);
    const IntervalDiffeo psi = segment_map(1);
    const IntervalDiffeo phi = segment_map(2);
    return std::vector<CheckRecord>{
        make_record("moving" + std::to_string(idx), "chain#" + std::to_string(idx),
                    residual(phi, psi, eta), tol)};
  });
  rep.checks.insert(rep.checks.end(), moving_checks.begin(), moving_checks.end());
  return rep;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"algebroid-cocycle", "groupoid-cocycle", "jacobi",
          "bott-boundary",     "linkage",          "interval-cocycle"};
}

Report run_suite(const std::string& suite, const Scenario& scenario,
                 const SuiteOptions& opt) {
  Timer timer;
  Report rep;
  if (suite == "algebroid-cocycle") rep = suite_algebroid(scenario, opt);
  else if (suite == "groupoid-cocycle") rep = suite_groupoid(scenario, opt);
  else if (suite == "jacobi") rep = suite_jacobi(scenario, opt);
  else if (suite == "bott-boundary") rep = suite_bott(scenario, opt);
  else if (suite == "linkage") rep = suite_linkage(scenario, opt);
  else if (suite == "interval-cocycle") rep = suite_interval(scenario, opt);
  else throw SchemaError("unknown suite \"" + suite + "\"");
  rep.threads = opt.parallel ? batch::max_threads() : 1;
  rep.wall_ms = timer.ms();
  return rep;
}

}  // namespace bvir
