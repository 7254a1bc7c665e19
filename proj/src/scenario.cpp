#include "bvir/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bvir {

namespace {

using nlohmann::json;

Expression parse_or_schema_error(const std::string& text, const std::string& where) {
  try {
    return parse_expression(text);
  } catch (const ParseError& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

std::vector<Expression> parse_arcs(const json& j, const std::string& where, int n) {
  if (!j.is_array())
    throw SchemaError(where + ": \"arcs\" must be an array of expressions");
  if (static_cast<int>(j.size()) != n)
    throw SchemaError(where + ": expected " + std::to_string(n) + " arc expressions");
  std::vector<Expression> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw SchemaError(where + ": arc entries must be strings");
    out.push_back(parse_or_schema_error(item.get<std::string>(), where));
  }
  return out;
}

}  // namespace

Scenario Scenario::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("scenario document must be a JSON object");

  static const std::vector<std::string> known = {"breaks", "quadrature", "fields",
                                                 "sections", "diffeos"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) throw SchemaError("unknown scenario key \"" + key + "\"");
  }

  Scenario s;
  if (!j.contains("breaks") || !j["breaks"].is_array() || j["breaks"].empty())
    throw SchemaError("scenario requires a non-empty \"breaks\" array");
  std::vector<double> angles;
  for (const auto& a : j["breaks"]) {
    if (!a.is_number()) throw SchemaError("break angles must be numbers");
    angles.push_back(a.get<double>());
  }
  try {
    s.breaks_.emplace(angles);
  } catch (const GeometryError& e) {
    throw SchemaError(std::string("invalid break configuration: ") + e.what());
  }
  const int n = s.breaks_->size();

  if (j.contains("quadrature")) {
    const auto& q = j["quadrature"];
    if (!q.is_object()) throw SchemaError("\"quadrature\" must be an object");
    if (q.contains("abs_tol")) s.quad_.abs_tol = q["abs_tol"].get<double>();
    if (q.contains("max_depth")) s.quad_.max_depth = q["max_depth"].get<int>();
    if (s.quad_.abs_tol <= 0.0) throw SchemaError("quadrature abs_tol must be positive");
  }

  if (j.contains("fields")) {
    for (const auto& [name, spec] : j["fields"].items()) {
      const std::string where = "field \"" + name + "\"";
      try {
        if (spec.is_string()) {
          s.fields_.emplace(name,
                            BrokenField(*s.breaks_, parse_or_schema_error(
                                                        spec.get<std::string>(), where)));
        } else if (spec.is_object() && spec.contains("arcs")) {
          s.fields_.emplace(name,
                            BrokenField(*s.breaks_, parse_arcs(spec["arcs"], where, n)));
        } else {
          throw SchemaError(where + ": expected an expression or {\"arcs\": [...]}");
        }
      } catch (const GeometryError& e) {
        throw SchemaError(where + ": " + e.what());
      }
    }
  }

  if (j.contains("sections")) {
    for (const auto& [name, spec] : j["sections"].items()) {
      const std::string where = "section \"" + name + "\"";
      if (!spec.is_string()) throw SchemaError(where + ": expected an expression string");
      try {
        s.sections_.emplace(name,
                            Section(n, parse_or_schema_error(spec.get<std::string>(), where)));
      } catch (const GeometryError& e) {
        throw SchemaError(where + ": " + e.what());
      }
    }
  }

  if (j.contains("diffeos")) {
    for (const auto& [name, spec] : j["diffeos"].items()) {
      const std::string where = "diffeo \"" + name + "\"";
      DiffeoSpec d;
      if (spec.is_string()) {
        d.lift = parse_or_schema_error(spec.get<std::string>(), where);
      } else if (spec.is_object() && spec.contains("arcs")) {
        d.arcs = parse_arcs(spec["arcs"], where, n);
      } else if (spec.is_object() && spec.contains("flow")) {
        if (!spec["flow"].is_string())
          throw SchemaError(where + ": \"flow\" must name a field");
        d.flow_field = spec["flow"].get<std::string>();
        if (!spec.contains("time") || !spec["time"].is_number())
          throw SchemaError(where + ": flow diffeos require a numeric \"time\"");
        d.flow_time = spec["time"].get<double>();
        if (spec.contains("steps_per_unit"))
          d.flow_steps = spec["steps_per_unit"].get<int>();
        if (s.fields_.count(d.flow_field) == 0)
          throw SchemaError(where + ": flow references undefined field \"" +
                            d.flow_field + "\"");
      } else {
        throw SchemaError(where +
                          ": expected a lift expression, {\"arcs\": [...]} or "
                          "{\"flow\": <field>, \"time\": <t>}");
      }
      s.diffeos_.emplace(name, std::move(d));
    }
  }
  return s;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

Scenario Scenario::basic(int n) {
  const double pi = kTwoPi / 2.0;
  std::ostringstream doc;
  doc.precision(17);
  doc << "{ \"breaks\": [";
  for (int i = 0; i < n; ++i) doc << (i ? ", " : "") << (i * kTwoPi / n);
  doc << "], \"fields\": {";
  // isotropy sin bumps per arc: vanish at every break
  for (int m = 1; m <= 3; ++m) {
    if (m > 1) doc << ", ";
    doc << "\"e" << m << "\": {\"arcs\": [";
    for (int i = 0; i < n; ++i) {
      const double a = i * kTwoPi / n;
      const double len = kTwoPi / n;
      doc << (i ? ", " : "") << "\"sin(" << (m * pi / len) << "*(x - " << a << "))\"";
    }
    doc << "]}";
  }
  doc << "}, \"sections\": {\"s1\": \"sin(x)\", \"s2\": \"sin(2*x)\", \"s3\": "
         "\"sin(3*x) + 0.2*cos(p1)*sin(x)\"}, "
         "\"diffeos\": {\"phi\": \"x + 0.2*sin(x)\", "
         "\"psi\": {\"flow\": \"e1\", \"time\": 0.3, \"steps_per_unit\": 400}, "
         "\"rot\": \"x + 0.5\"} }";
  return from_json_text(doc.str());
}

std::vector<std::string> Scenario::field_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : fields_) { (void)v; out.push_back(k); }
  return out;
}

std::vector<std::string> Scenario::section_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : sections_) { (void)v; out.push_back(k); }
  return out;
}

std::vector<std::string> Scenario::diffeo_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : diffeos_) { (void)v; out.push_back(k); }
  return out;
}

const BrokenField& Scenario::field(const std::string& name) const {
  auto it = fields_.find(name);
  if (it == fields_.end()) throw SchemaError("undefined field \"" + name + "\"");
  return it->second;
}

const Section& Scenario::section(const std::string& name) const {
  auto it = sections_.find(name);
  if (it == sections_.end()) throw SchemaError("undefined section \"" + name + "\"");
  return it->second;
}

BrokenDiffeo Scenario::diffeo(const std::string& name) const {
  if (name == "id") return BrokenDiffeo::identity(*breaks_);
  auto it = diffeos_.find(name);
  if (it == diffeos_.end()) throw SchemaError("undefined diffeo \"" + name + "\"");
  const DiffeoSpec& d = it->second;
  if (d.lift) return BrokenDiffeo::from_lift(*breaks_, *d.lift);
  if (!d.arcs.empty()) return BrokenDiffeo::from_arcs(*breaks_, d.arcs);
  FlowSpec spec;
  spec.steps_per_unit = d.flow_steps;
  return flow(field(d.flow_field), d.flow_time, spec);
}

}  // namespace bvir
