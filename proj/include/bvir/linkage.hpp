#pragma once

// Flows of broken vector fields (producing groupoid arrows) and the mixed
// finite-difference derivation of the arc cocycle from the groupoid cocycle.

#include "bvir/algebroid.hpp"
#include "bvir/groupoid.hpp"

namespace bvir {

struct FlowSpec {
  int steps_per_unit = 2000;  // fixed-step RK4 resolution; >= 100
};

// Time-t flow of a continuous broken field. Value and derivative jets (to
// order 2) integrate the variational equations with the same RK4 steps, so
// the returned jets are the exact derivatives of the discrete flow map. If
// u vanishes at every break the breaks stay fixed; otherwise the break
// images are integrated alongside and become the target configuration.
BrokenDiffeo flow(const BrokenField& u, double time, const FlowSpec& spec = {});

// Mixed central difference over t, s in {-h, +h} of
//   chi_arc(flow(u,t), flow(v,s)) - chi_arc(flow(v,s), flow(u,t)),
// divided by 4 h^2; converges to omega_arc(u, v) at rate O(h^2). Requires
// isotropy fields (vanishing at all breaks), which keeps the flows
// break-preserving. If every corner difference sits below the 1e-11 noise
// floor, *noise_warning is set.
double derive_algebroid_cocycle(const BrokenField& u, const BrokenField& v,
                                const BreakConfig& p, int arc, double h,
                                const FlowSpec& spec = {}, const QuadratureSpec& q = {},
                                bool* noise_warning = nullptr);

}  // namespace bvir
