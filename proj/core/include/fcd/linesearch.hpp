#pragma once

#include "fcd/problem.hpp"

namespace fcd {

struct LineSearchConfig {
  double theta = 1e-3;      // sufficient-decrease fraction, in (0, 1/2]
  int max_backtracks = 200;
};

struct LineSearchResult {
  double alpha = 1.0;
  int backtracks = 0;
  double actual_decrease = 0.0;  // F(x) - F(x + alpha U_S t)
  double model_decrease = 0.0;   // ell(x;0) - ell(x; alpha U_S t)
};

// First-order surrogate gap at step length alpha, where
// ell(x; h) = f(x) + <grad f(x), h> + Psi(x + h):
//   ell(x;0) - ell(x; alpha U_S t)
//     = Psi_S(x^S) - Psi_S(x^S + alpha t) - alpha <grad_S f(x), t>.
double surrogate_decrease(const CompositeProblem& p, const StepContext& ctx, double alpha);

// Halve alpha from 1 until F(x) - F(x + alpha U_S t) >= theta * surrogate
// decrease. Does not modify the iterate; throws if the budget is exhausted.
LineSearchResult backtrack(const Evaluator& ev, const StepContext& ctx,
                           const LineSearchConfig& cfg);

}  // namespace fcd
