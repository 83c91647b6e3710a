#include "fcd/linesearch.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fcd {

double surrogate_decrease(const CompositeProblem& p, const StepContext& ctx, double alpha) {
  const auto& reg = p.regularizer();
  double psi_new = 0.0;
  for (std::size_t j = 0; j < ctx.t.size(); ++j)
    psi_new += reg.value_coordinate(ctx.xs[j] + alpha * ctx.t[j]);
  return ctx.psi_xs - psi_new - alpha * ctx.grad_dot_t;
}

LineSearchResult backtrack(const Evaluator& ev, const StepContext& ctx,
                           const LineSearchConfig& cfg) {
  if (cfg.theta <= 0.0 || cfg.theta > 0.5)
    throw std::invalid_argument("line search: theta must lie in (0, 1/2]");
  LineSearchResult res;
  double alpha = 1.0;
  for (int k = 0; k <= cfg.max_backtracks; ++k) {
    double decrease = ev.delta_F(ctx, alpha);
    double surrogate = surrogate_decrease(ev.problem(), ctx, alpha);
    // Both sides are differences of quantities evaluated at x and x + alpha t,
    // so they carry cancellation noise on this absolute scale. Without the
    // slack the comparison is a coin flip once the true decrease drops below
    // it, which both stalls nearly-converged runs and drives alpha below its
    // theoretical floor.
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                         (1.0 + std::abs(ctx.psi_xs) + std::abs(ctx.grad_dot_t) +
                          std::abs(decrease));
    if (decrease >= cfg.theta * surrogate - slack) {
      res.alpha = alpha;
      res.backtracks = k;
      res.actual_decrease = decrease;
      res.model_decrease = surrogate;
      return res;
    }
    alpha *= 0.5;
  }
  throw std::runtime_error("line search: backtracking budget exhausted");
}

}  // namespace fcd
