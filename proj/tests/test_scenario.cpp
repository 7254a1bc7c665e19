#include "bvir/scenario.hpp"

#include <cmath>

#include "bvir/suites.hpp"
#include "doctest.h"

using namespace bvir;

namespace {

const char* kMinimal = R"json({
  "breaks": [0.0, 3.141592653589793],
  "fields": {"e1": "sin(x)", "kink": {"arcs": ["sin(x)", "-2*sin(x)"]}},
  "sections": {"s": "sin(x - p1)"},
  "diffeos": {"rot": "x + 0.5", "fl": {"flow": "e1", "time": 0.2, "steps_per_unit": 200}}
})json";

std::string strip_wall(std::string text) {
  const auto pos = text.find("\"wall_ms\"");
  if (pos == std::string::npos) return text;
  const auto end = text.find('\n', pos);
  return text.erase(pos, end - pos);
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("loads a valid document and realizes objects") {
  const Scenario s = Scenario::from_json_text(kMinimal);
  CHECK(s.breaks().size() == 2);
  CHECK(s.field("e1").vanishes_at_breaks());
  CHECK(s.field("kink").deriv(0.0, 1, Side::Right) == doctest::Approx(1.0));
  CHECK(s.field("kink").deriv(0.0, 1, Side::Left) == doctest::Approx(-2.0));
  CHECK(s.section("s").n() == 2);

  const BrokenDiffeo rot = s.diffeo("rot");
  CHECK(rot.map().value(1.0) == doctest::Approx(1.5));
  const BrokenDiffeo fl = s.diffeo("fl");
  CHECK(fl.src().approx_equal(s.breaks()));
  // the built-in identity arrow
  CHECK(s.diffeo("id").map().value(0.25) == 0.25);
}

TEST_CASE("schema violations are reported") {
  CHECK_THROWS_AS(Scenario::from_json_text("not json"), SchemaError);
  CHECK_THROWS_AS(Scenario::from_json_text("{}"), SchemaError);
  CHECK_THROWS_AS(Scenario::from_json_text(R"json({"breaks": [0.0], "bogus": 1})json"),
                  SchemaError);
  CHECK_THROWS_AS(Scenario::from_json_text(R"json({"breaks": [0.0, 0.0]})json"), SchemaError);
  // an expression that does not parse
  CHECK_THROWS_AS(
      Scenario::from_json_text(R"json({"breaks": [0.0], "fields": {"u": "sin(y)"}})json"),
      SchemaError);
  // an intentionally discontinuous per-arc field
  CHECK_THROWS_AS(Scenario::from_json_text(R"json({
    "breaks": [0.0, 3.141592653589793],
    "fields": {"bad": {"arcs": ["sin(x)", "cos(x)"]}}
  })json"),
                  SchemaError);
  // flow referencing an undefined field
  CHECK_THROWS_AS(Scenario::from_json_text(R"json({
    "breaks": [0.0],
    "diffeos": {"f": {"flow": "nope", "time": 0.1}}
  })json"),
                  SchemaError);
  const Scenario s = Scenario::from_json_text(kMinimal);
  CHECK_THROWS_AS(s.field("missing"), SchemaError);
  CHECK_THROWS_AS(run_suite("no-such-suite", s), SchemaError);
}

TEST_CASE("reports are deterministic given scenario and seed") {
  const Scenario s = Scenario::basic(2);
  SuiteOptions opt;
  opt.seed = 1234;
  opt.count = 4;
  const Report a = run_suite("interval-cocycle", s, opt);
  const Report b = run_suite("interval-cocycle", s, opt);
  CHECK(strip_wall(a.to_json_text()) == strip_wall(b.to_json_text()));

  // parallel and serial evaluation produce the same records
  SuiteOptions serial = opt;
  serial.parallel = false;
  Report c = run_suite("interval-cocycle", s, serial);
  c.threads = a.threads;  // the only intended difference
  CHECK(strip_wall(a.to_json_text()) == strip_wall(c.to_json_text()));

  // csv round also carries every check with its tolerance
  const std::string csv = a.to_csv();
  CHECK(csv.find("id,inputs_digest,residual,tolerance,pass") == 0);
}

TEST_CASE("every suite runs on the built-in scenarios") {
  for (int n = 1; n <= 3; ++n) {
    const Scenario s = Scenario::basic(n);
    SuiteOptions opt;
    opt.seed = 7;
    opt.count = 2;
    for (const std::string& name : suite_names()) {
      const Report rep = run_suite(name, s, opt);
      CHECK(rep.passed());
    }
  }
}

TEST_SUITE_END();
