#include "fcd/driver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fcd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kSkipTol = 1e-14;

// ||g_S(x;0)||, computed from the partial gradient alone.
double baseline_norm(const SeparableRegularizer& reg, const Vec& xs, const Vec& grad) {
  double sq = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double g = grad[j] + reg.conjugate_prox_coordinate(xs[j] - grad[j]);
    sq += g * g;
  }
  return std::sqrt(sq);
}

bool stationary(const Evaluator& ev, double tol) {
  return full_stationarity_norm(ev) <= tol * std::max(1.0, norm_inf(ev.x()));
}

}  // namespace

double full_stationarity_norm(const Evaluator& ev) {
  Vec grad = ev.full_gradient();
  const auto& reg = ev.problem().regularizer();
  const Vec& x = ev.x();
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double g = grad[i] + reg.conjugate_prox_coordinate(x[i] - grad[i]);
    m = std::max(m, std::abs(g));
  }
  return m;
}

RunTrace fcd_run(const CompositeProblem& p, Vec x0, const FcdConfig& cfg) {
  const int n = p.dimension();
  if (cfg.tau < 1 || cfg.tau > n) throw std::invalid_argument("fcd_run: invalid tau");

  Evaluator ev(p, std::move(x0));
  TauNiceSampler sampler(n, cfg.tau, cfg.seed);
  LbfgsHistory history(cfg.curvature.memory > 0 ? cfg.curvature.memory : 1);
  const bool track_pairs = cfg.curvature.kind == CurvatureKind::LimitedMemoryQN;

  RunTrace trace;
  trace.algorithm = "fcd";
  trace.dim = n;
  trace.tau = cfg.tau;
  trace.seed = cfg.seed;

  const auto t0 = Clock::now();
  const long check_interval = std::max<long>(1, n / cfg.tau);

  IterationRecord rec0;
  rec0.F = ev.objective();
  rec0.res_norm = full_stationarity_norm(ev);
  trace.records.push_back(rec0);
  if (stationary(ev, cfg.tol)) {
    trace.converged = true;
    trace.F_final = rec0.F;
    trace.x_final = ev.x();
    trace.total_time_s = seconds_since(t0);
    return trace;
  }

  long k = 0, skips = 0;
  long attempts = 0;
  const long attempt_cap = cfg.max_iters + 100 * check_interval + 100;
  while (k < cfg.max_iters && attempts < attempt_cap) {
    ++attempts;
    CoordinateSubset S = sampler.sample();
    Vec grad = ev.partial_gradient(S);
    Vec xs = S.gather(ev.x());
    double g0 = baseline_norm(p.regularizer(), xs, grad);
    if (g0 <= kSkipTol * std::max(1.0, norm_inf(xs))) {
      if (++skips >= check_interval) {
        skips = 0;
        if (stationary(ev, cfg.tol)) {
          trace.converged = true;
          break;
        }
      }
      continue;
    }

    SubproblemModel model =
        build_model(ev, S, cfg.curvature, track_pairs ? &history : nullptr, &grad);
    SubsolverResult dir = solve_subproblem(model, cfg.inner);
    if (!(dir.cert.q_delta < 0.0)) {
      // No strict model decrease is obtainable on this subset: the quadratic
      // model rounds to flat at the numerical floor. Treat it like a
      // vanishing residual rather than searching along a non-descent step.
      if (++skips >= check_interval) {
        skips = 0;
        if (stationary(ev, cfg.tol)) {
          trace.converged = true;
          break;
        }
      }
      continue;
    }

    StepContext ctx = ev.prepare_step(S, dir.t, dot(grad, dir.t));
    const auto ls_t0 = Clock::now();
    LineSearchResult ls;
    try {
      ls = backtrack(ev, ctx, cfg.linesearch);
    } catch (const std::runtime_error&) {
      trace.linesearch_time_s += seconds_since(ls_t0);
      // Strict model decrease guarantees a positive first-order surrogate,
      // so an exhausted backtracking budget means the objective decrease has
      // fallen below the resolution of double arithmetic: stop.
      break;
    }
    trace.linesearch_time_s += seconds_since(ls_t0);

    Vec grad_before;
    if (track_pairs) grad_before = ev.full_gradient();
    ev.commit(ctx, ls.alpha);
    if (track_pairs) {
      Vec s(static_cast<std::size_t>(n), 0.0);
      S.scatter_add(s, ctx.t, ls.alpha);
      Vec y = ev.full_gradient();
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= grad_before[i];
      history.push(std::move(s), std::move(y));
    }

    ++k;
    skips = 0;
    IterationRecord rec;
    rec.k = k;
    rec.F = ev.objective();
    rec.alpha = ls.alpha;
    rec.backtracks = ls.backtracks;
    rec.inner_iters = dir.cert.inner_iters;
    rec.res_norm = g0;
    rec.time_s = seconds_since(t0);
    rec.t_norm = norm2(ctx.t);
    rec.lambda = model.lambda();
    rec.Lambda = model.Lambda();
    rec.subset_lipschitz = model.subset_lipschitz();
    trace.records.push_back(rec);

    if (k % check_interval == 0 && stationary(ev, cfg.tol)) {
      trace.converged = true;
      break;
    }
  }

  trace.iterations = k;
  trace.F_final = ev.objective();
  trace.x_final = ev.x();
  trace.total_time_s = seconds_since(t0);
  return trace;
}

RunTrace ucdc_run(const CompositeProblem& p, Vec x0, const UcdcConfig& cfg) {
  const int n = p.dimension();
  const int tau = cfg.version == 1 ? 1 : cfg.tau;
  if (tau < 1 || tau > n) throw std::invalid_argument("ucdc_run: invalid tau");
  if (cfg.version != 1 && cfg.version != 2)
    throw std::invalid_argument("ucdc_run: version must be 1 or 2");

  RunTrace trace;
  trace.algorithm = cfg.version == 1 ? "ucdc1" : "ucdc2";
  trace.dim = n;
  trace.tau = tau;
  trace.seed = cfg.seed;

  const auto t0 = Clock::now();
  // The per-coordinate Lipschitz pass is part of this method's cost, so it
  // is timed here even though the problem may carry precomputed values.
  Vec lip = compute_coordinate_lipschitz(p.loss());
  trace.setup_time_s = seconds_since(t0);

  Evaluator ev(p, std::move(x0));
  TauNiceSampler sampler(n, tau, cfg.seed);
  const auto& reg = p.regularizer();
  const long check_interval = std::max<long>(1, n / tau);

  IterationRecord rec0;
  rec0.F = ev.objective();
  rec0.res_norm = full_stationarity_norm(ev);
  trace.records.push_back(rec0);
  if (stationary(ev, cfg.tol)) {
    trace.converged = true;
    trace.F_final = rec0.F;
    trace.x_final = ev.x();
    trace.total_time_s = seconds_since(t0);
    return trace;
  }

  long k = 0, skips = 0;
  long attempts = 0;
  const long attempt_cap = cfg.max_iters + 100 * check_interval + 100;
  while (k < cfg.max_iters && attempts < attempt_cap) {
    ++attempts;
    CoordinateSubset S = sampler.sample();
    Vec grad = ev.partial_gradient(S);
    Vec xs = S.gather(ev.x());
    double g0 = baseline_norm(reg, xs, grad);
    if (g0 <= kSkipTol * std::max(1.0, norm_inf(xs))) {
      if (++skips >= check_interval) {
        skips = 0;
        if (stationary(ev, cfg.tol)) {
          trace.converged = true;
          break;
        }
      }
      continue;
    }
    skips = 0;

    double h = 0.0;
    if (cfg.version == 2) {
      for (int j = 0; j < S.size(); ++j) h += lip[static_cast<std::size_t>(S[j])];
      h = std::max(h, 1e-12);
    }
    Vec t(xs.size());
    for (int j = 0; j < S.size(); ++j) {
      const auto uj = static_cast<std::size_t>(j);
      double hj = cfg.version == 1 ? std::max(lip[static_cast<std::size_t>(S[j])], 1e-12) : h;
      t[uj] = reg.prox_coordinate(xs[uj] - grad[uj] / hj, hj) - xs[uj];
    }

    double grad_dot = dot(grad, t);
    StepContext ctx = ev.prepare_step(S, std::move(t), grad_dot);
    ev.commit(ctx, 1.0);

    ++k;
    IterationRecord rec;
    rec.k = k;
    rec.F = ev.objective();
    rec.alpha = 1.0;
    rec.inner_iters = 1;
    rec.res_norm = g0;
    rec.time_s = seconds_since(t0);
    rec.t_norm = norm2(ctx.t);
    trace.records.push_back(rec);

    if (k % check_interval == 0 && stationary(ev, cfg.tol)) {
      trace.converged = true;
      break;
    }
  }

  trace.iterations = k;
  trace.F_final = ev.objective();
  trace.x_final = ev.x();
  trace.total_time_s = seconds_since(t0);
  return trace;
}

}  // namespace fcd
