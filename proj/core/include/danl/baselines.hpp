#pragma once

#include <vector>

#include "danl/objective.hpp"
#include "danl/vec.hpp"

namespace danl {

/// Warm start ω⁰: from the zero vector, each round every worker takes one
/// full gradient step from the broadcast model and the server averages the
/// results. Throws NumericalError if ‖ω‖ ever exceeds 1e6.
ModelVector fedavg_warmstart(const std::vector<const Objective*>& workers,
                             int rounds, double lr);

struct NewtonReference {
  ModelVector w_star;
  double f_star = 0.0;
  int step_halvings = 0;  // safeguard activations (reported, normally 0)
};

/// Standard Newton on the given objective from the zero vector, recomputing
/// and factoring the exact Hessian each iteration. Defines F(ω*). If an
/// iterate would raise the loss by more than 1e-12, the step is halved once.
NewtonReference newton_reference(const Objective& objective, int iters);

/// Straight-line reference for the full-coverage reduction: Π at w0 once,
/// projected and factored, then ω ← ω − [Π]_μ⁻¹ ∇F(ω) for `steps` steps.
/// Returns all iterates ω⁰ … ω^steps.
std::vector<ModelVector> fixed_hessian_newton(const Objective& global,
                                              const ModelVector& w0, double mu,
                                              int steps);

}  // namespace danl
