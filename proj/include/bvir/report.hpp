#pragma once

// Machine-readable verification reports: one record per check, each carrying
// its tolerance and measured residual. Deterministic given (scenario, seed)
// apart from the wall time.

#include <cstdint>
#include <string>
#include <vector>

namespace bvir {

struct CheckRecord {
  std::string id;
  std::string inputs_digest;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string details;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  double h_step = 0.0;
  int flow_steps_per_unit = 0;
  double quad_abs_tol = 0.0;
  int threads = 1;
  std::vector<CheckRecord> checks;
  double wall_ms = 0.0;

  bool passed() const;
  std::string to_json_text() const;  // pretty-printed document
  std::string to_csv() const;
};

// FNV-1a over a printable description of check inputs.
std::string digest(const std::string& text);

}  // namespace bvir
