#pragma once

// Declarative scenario documents: a break configuration plus named fields,
// sections and diffeomorphisms (lift expressions, per-arc expressions, or
// flow specifications), with quadrature overrides.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bvir/algebroid.hpp"
#include "bvir/groupoid.hpp"
#include "bvir/linkage.hpp"

namespace bvir {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Scenario {
 public:
  // Parses and validates a JSON document; unknown keys, undefined names and
  // non-parsing expressions are schema errors.
  static Scenario from_json_text(const std::string& text);
  static Scenario load(const std::string& path);
  static Scenario basic(int n);  // built-in fallback scenario

  const BreakConfig& breaks() const { return *breaks_; }
  const QuadratureSpec& quadrature() const { return quad_; }

  std::vector<std::string> field_names() const;
  std::vector<std::string> section_names() const;
  std::vector<std::string> diffeo_names() const;

  bool has_field(const std::string& name) const { return fields_.count(name) != 0; }
  bool has_section(const std::string& name) const { return sections_.count(name) != 0; }
  bool has_diffeo(const std::string& name) const { return diffeos_.count(name) != 0; }

  const BrokenField& field(const std::string& name) const;
  const Section& section(const std::string& name) const;
  BrokenDiffeo diffeo(const std::string& name) const;  // realized on demand

 private:
  struct DiffeoSpec {
    std::optional<Expression> lift;
    std::vector<Expression> arcs;
    std::string flow_field;  // non-empty for flow-built arrows
    double flow_time = 0.0;
    int flow_steps = 2000;
  };

  std::optional<BreakConfig> breaks_;
  QuadratureSpec quad_;
  std::map<std::string, BrokenField> fields_;
  std::map<std::string, Section> sections_;
  std::map<std::string, DiffeoSpec> diffeos_;
};

}  // namespace bvir
