#pragma once

// Randomized verification suites behind `verify` and the acceptance gate.
// Inputs are drawn deterministically from the seed; checks evaluate through
// the batch layer (order-preserving), so reports are reproducible.

#include <cstdint>
#include <string>
#include <vector>

#include "bvir/report.hpp"
#include "bvir/scenario.hpp"

namespace bvir {

struct SuiteOptions {
  std::uint64_t seed = 1;
  double tol = 0.0;     // 0 = suite default
  int count = 0;        // 0 = suite default
  double h = 1e-3;      // linkage difference step
  int flow_steps = 300; // steps per unit time for suite-generated flows
  bool parallel = true;
};

// algebroid-cocycle | groupoid-cocycle | jacobi | bott-boundary | linkage |
// interval-cocycle
std::vector<std::string> suite_names();

Report run_suite(const std::string& suite, const Scenario& scenario,
                 const SuiteOptions& opt = {});

}  // namespace bvir
