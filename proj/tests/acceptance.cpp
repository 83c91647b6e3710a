// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fcd/analysis.hpp"
#include "fcd/driver.hpp"
#include "fcd/synthetic.hpp"

using namespace fcd;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  (%s)\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CompositeProblem lasso_instance(int n, int m, double condition, double sparsity,
                                std::uint64_t seed, double c,
                                std::optional<double> mu_f = std::nullopt) {
  QuadraticRecipe r;
  r.n = n;
  r.m = m;
  r.condition = condition;
  r.sparsity = sparsity;
  r.seed = seed;
  auto q = generate_quadratic(r);
  return CompositeProblem(SmoothLoss::quadratic(q.A, q.b),
                          SeparableRegularizer::l1(c), mu_f);
}

CompositeProblem logistic_instance(int n, int m, double sparsity,
                                   std::uint64_t seed, double c) {
  LogisticRecipe r;
  r.n = n;
  r.m = m;
  r.margin = 0.1;
  r.sparsity = sparsity;
  r.seed = seed;
  auto lg = generate_logistic(r);
  return CompositeProblem(SmoothLoss::logistic(lg.A, lg.labels),
                          SeparableRegularizer::l1(c));
}

long monotone_violations(const RunTrace& tr) {
  long bad = 0;
  for (std::size_t i = 1; i < tr.records.size(); ++i)
    if (tr.records[i].F > tr.records[i - 1].F + 1e-12) ++bad;
  return bad;
}

// Strongly convex reference instance shared by criteria 6 and 7:
// planted quadratic (mu_f = sigma_min^2) plus an elastic net.
struct StrongInstance {
  CompositeProblem p;
  Vec x0;
  double f_star;
  double gap0;
};

StrongInstance strong_instance() {
  QuadraticRecipe r;
  r.n = 50;
  r.m = 60;
  r.condition = 4.0;
  r.sparsity = 1.0;
  r.seed = 901;
  auto q = generate_quadratic(r);
  CompositeProblem p(SmoothLoss::quadratic(q.A, q.b),
                     SeparableRegularizer::elastic_net(0.05, 0.25), q.mu_f);
  Vec x0(50, 0.0);

  FcdConfig ref;
  ref.tau = 5;
  ref.seed = 77;
  ref.curvature = CurvatureStrategy::principal_minor(1e-8);
  ref.inner.method = InnerMethod::ProximalSweep;
  ref.inner.eta = 1e-6;
  ref.inner.max_inner = 5000;
  ref.max_iters = 200000;
  ref.tol = 1e-13;
  auto tr = fcd_run(p, x0, ref);
  double gap0 = eval_F(p, x0) - tr.F_final;
  return {std::move(p), std::move(x0), tr.F_final, gap0};
}

}  // namespace

// 1. Monotone decrease on 20 instances x 4 variants.
static void criterion_1() {
  const auto t0 = Clock::now();
  long violations = 0, runs = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const bool logistic = inst % 2 == 1;
    const int n = 50 + 45 * inst;  // up to 500 coordinates
    const int m = n + n / 2;
    CompositeProblem p =
        logistic ? logistic_instance(n, m, 0.2, 1000 + inst, 0.05)
                 : lasso_instance(n, m, 100.0, 0.2, 1000 + inst, 0.1);
    Vec x0(static_cast<std::size_t>(n), 0.0);

    FcdConfig f1;
    f1.tau = 1;
    f1.seed = inst;
    f1.curvature = CurvatureStrategy::diagonal(logistic ? 1e-8 : 0.0);
    f1.max_iters = 300;
    f1.tol = 0.0;
    violations += monotone_violations(fcd_run(p, x0, f1));

    FcdConfig f2;
    f2.tau = 8;
    f2.seed = inst;
    f2.curvature = CurvatureStrategy::principal_minor(1e-6);
    f2.inner.method = InnerMethod::ProximalSweep;
    f2.max_iters = 300;
    f2.tol = 0.0;
    violations += monotone_violations(fcd_run(p, x0, f2));

    UcdcConfig u1;
    u1.version = 1;
    u1.seed = inst;
    u1.max_iters = 300;
    u1.tol = 0.0;
    violations += monotone_violations(ucdc_run(p, x0, u1));

    UcdcConfig u2;
    u2.version = 2;
    u2.tau = 8;
    u2.seed = inst;
    u2.max_iters = 300;
    u2.tol = 0.0;
    violations += monotone_violations(ucdc_run(p, x0, u2));
    runs += 4;
  }
  const double dt = elapsed_s(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%ld violations over %ld runs, %.1fs", violations,
                runs, dt);
  report(1, violations == 0 && dt < 60.0, buf);
}

// 2 and 3. Step-size floor and direction-norm bound, checked on every
// committed iteration of instrumented runs.
static void criteria_2_3() {
  long iters = 0, alpha_bad = 0, tnorm_bad = 0;
  for (int inst = 0; inst < 10; ++inst) {
    // Ill conditioned and short enough that every run stays far from the
    // optimum; the floors are exact-arithmetic statements and stop meaning
    // anything once F-deltas reach rounding noise.
    CompositeProblem p = lasso_instance(300, 380, 1e4, 0.2, 2000 + inst, 0.05);
    Vec x0(300, 0.0);
    FcdConfig cfg;
    cfg.tau = 4;
    cfg.seed = 50 + inst;
    cfg.curvature = inst % 2 == 0 ? CurvatureStrategy::diagonal(1e-8)
                                  : CurvatureStrategy::principal_minor(1e-6);
    cfg.inner.method = inst % 2 == 0 ? InnerMethod::ClosedForm : InnerMethod::ProximalSweep;
    cfg.inner.eta = 0.9;
    cfg.inner.max_inner = 2000;
    cfg.max_iters = 1050;
    cfg.tol = 0.0;
    auto tr = fcd_run(p, x0, cfg);
    for (std::size_t i = 1; i < tr.records.size(); ++i) {
      const auto& r = tr.records[i];
      ++iters;
      const double floor =
          (1.0 - cfg.linesearch.theta) * r.lambda / (2.0 * r.subset_lipschitz);
      if (r.alpha < floor * (1.0 - 1e-12)) ++alpha_bad;
      const double tmin = (1.0 - cfg.inner.eta) * r.res_norm / (1.0 + 2.0 * r.Lambda);
      if (r.t_norm < tmin * (1.0 - 1e-10)) ++tnorm_bad;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%ld alpha violations over %ld iterations", alpha_bad,
                iters);
  report(2, alpha_bad == 0 && iters >= 10000, buf);
  std::snprintf(buf, sizeof(buf), "%ld norm violations over %ld directions", tnorm_bad,
                iters);
  report(3, tnorm_bad == 0 && iters >= 10000, buf);
}

// 4. Truncated conjugate gradients satisfies t'Ht = -t'grad at every stop.
static void criterion_4() {
  long bad = 0, count = 0;
  Rng rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 12 + static_cast<int>(rng.bounded(30));
    QuadraticRecipe r;
    r.n = n;
    r.m = n + 5;
    r.condition = 50.0;
    r.sparsity = 0.6;
    r.seed = 4000 + static_cast<std::uint64_t>(trial);
    auto q = generate_quadratic(r);
    CompositeProblem smooth(SmoothLoss::quadratic(q.A, q.b),
                            SeparableRegularizer::zero());
    Vec x(static_cast<std::size_t>(n));
    for (auto& v : x) v = 0.5 * rng.normal();
    Evaluator ev(smooth, x);

    const int tau = 2 + static_cast<int>(rng.bounded(6));
    TauNiceSampler sampler(n, tau, 4000 + trial);
    auto S = sampler.sample();
    auto m = build_model(ev, S, CurvatureStrategy::principal_minor(1e-6));
    const int cap = 1 + static_cast<int>(rng.bounded(tau));  // force truncation too
    auto res = solve_cg_smooth(m, trial % 2 == 0 ? 0.5 : 0.0, cap);
    double tn = norm2(res.t);
    if (tn == 0.0) continue;
    ++count;
    double lhs = std::abs(dot(res.t, m.apply_H(res.t)) + dot(res.t, m.gradient()));
    if (lhs > 1e-10 * tn * norm2(m.gradient())) ++bad;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%ld violations over %ld truncation points", bad, count);
  report(4, bad == 0 && count >= 900, buf);
}

// 5. FCD with tau = 1 and H = L_i recovers the classical baseline exactly.
static void criterion_5() {
  CompositeProblem p = lasso_instance(80, 100, 200.0, 0.4, 5001, 0.1);
  Vec x0(80, 0.0);

  FcdConfig fc;
  fc.tau = 1;
  fc.seed = 55;
  fc.curvature = CurvatureStrategy::scaled_identity();  // nu = L_i
  fc.inner.method = InnerMethod::ClosedForm;
  fc.max_iters = 100;
  fc.tol = 0.0;
  UcdcConfig uc;
  uc.version = 1;
  uc.seed = 55;
  uc.max_iters = 100;
  uc.tol = 0.0;

  auto ta = fcd_run(p, x0, fc);
  auto tb = ucdc_run(p, x0, uc);
  double dx = 0.0;
  for (std::size_t i = 0; i < ta.x_final.size(); ++i)
    dx = std::max(dx, std::abs(ta.x_final[i] - tb.x_final[i]));
  double dF = 0.0;
  for (std::size_t i = 0; i < ta.records.size() && i < tb.records.size(); ++i)
    dF = std::max(dF, std::abs(ta.records[i].F - tb.records[i].F));
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max |dx| = %.2e, max |dF| = %.2e over 100 iterations",
                dx, dF);
  report(5, dx <= 1e-12 && ta.records.size() == tb.records.size(), buf);
}

// 6. High-probability iteration bound for the strongly convex nonsmooth case.
static void criterion_6(const StrongInstance& si) {
  const auto t0 = Clock::now();
  FcdConfig base;
  base.tau = 5;
  base.seed = 600;
  base.curvature = CurvatureStrategy::identity();
  base.inner.method = InnerMethod::ClosedForm;
  base.inner.eta = 0.0;
  base.linesearch.theta = 0.4;

  auto c = conservative_constants(si.p, base.curvature, base.tau,
                                  base.linesearch.theta, base.inner.eta);
  const double eps = 1e-3 * si.gap0;
  const double rho = 0.1;
  long K = iteration_bound(BoundTheorem::SCN, c, 50, base.tau, eps, rho, si.gap0, 0.0);
  auto rep = validate_bound(si.p, si.x0, base, BoundTheorem::SCN, si.f_star, eps, rho,
                            K, 200);
  const double dt = elapsed_s(t0);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "K = %ld, %d/%d successes, freq %.3f >= %.3f required, %.1fs", K,
                rep.successes, rep.trials, rep.frequency, rep.required_frequency, dt);
  report(6, rep.pass && dt < 300.0, buf);
}

// 7. Mean one-step gap contraction beats 1 - tau chi delta / N (+3 SE).
static void criterion_7(const StrongInstance& si) {
  FcdConfig cfg;
  cfg.tau = 5;
  cfg.curvature = CurvatureStrategy::identity();
  cfg.inner.method = InnerMethod::ClosedForm;
  cfg.inner.eta = 0.0;
  cfg.linesearch.theta = 0.4;
  cfg.max_iters = 250;  // stay well above the floating-point gap floor
  cfg.tol = 0.0;

  auto c = conservative_constants(si.p, cfg.curvature, cfg.tau, cfg.linesearch.theta,
                                  cfg.inner.eta);
  const double bound = 1.0 - cfg.tau * c.chi * c.delta / 50.0;

  std::vector<double> ratios;
  for (std::uint64_t seed = 700; ratios.size() < 2000; ++seed) {
    cfg.seed = seed;
    auto tr = fcd_run(si.p, si.x0, cfg);
    for (std::size_t i = 1; i < tr.records.size() && ratios.size() < 2000; ++i) {
      const double prev = tr.records[i - 1].F - si.f_star;
      const double cur = tr.records[i].F - si.f_star;
      if (prev <= 1e-10 * std::max(1.0, std::abs(si.f_star))) break;
      ratios.push_back(cur / prev);
    }
    if (seed > 760) break;  // safety cap
  }
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= static_cast<double>(ratios.size() - 1);
  const double se = std::sqrt(var / static_cast<double>(ratios.size()));

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "mean ratio %.6f vs bound %.6f + 3se (%.2e), %zu steps", mean, bound,
                3.0 * se, ratios.size());
  report(7, ratios.size() >= 2000 && mean <= bound + 3.0 * se, buf);
}

// 8. Unit steps dominate and the line search stays cheap on a large logistic.
static void criterion_8() {
  const auto t0 = Clock::now();
  CompositeProblem p = logistic_instance(2000, 5000, 0.005, 800, 0.1);
  FcdConfig cfg;
  cfg.tau = 16;
  cfg.seed = 80;
  cfg.curvature = CurvatureStrategy::diagonal(1e-8);
  cfg.inner.method = InnerMethod::ClosedForm;
  cfg.inner.eta = 0.9;
  cfg.linesearch.theta = 1e-3;
  cfg.max_iters = 5000;
  cfg.tol = 0.0;
  auto tr = fcd_run(p, Vec(2000, 0.0), cfg);

  long unit = 0, total = 0;
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    ++total;
    if (tr.records[i].alpha == 1.0) ++unit;
  }
  const double unit_frac = total > 0 ? static_cast<double>(unit) / total : 0.0;
  const double ls_frac =
      tr.total_time_s > 0.0 ? tr.linesearch_time_s / tr.total_time_s : 1.0;
  const double dt = elapsed_s(t0);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "alpha=1 on %.1f%% of %ld iterations, line search %.1f%% of wall, %.1fs",
                100.0 * unit_frac, total, 100.0 * ls_frac, dt);
  report(8, total >= 5000 && unit_frac >= 0.95 && ls_frac <= 0.20 && dt < 120.0, buf);
}

// 9. Dense subset curvature beats the classical baseline on an
// ill-conditioned lasso under an equal iteration budget.
static void criterion_9() {
  const auto t0 = Clock::now();
  CompositeProblem p = lasso_instance(1000, 1100, 1e4, 0.05, 900, 0.05);
  Vec x0(1000, 0.0);

  FcdConfig fc;
  fc.tau = 25;
  fc.seed = 90;
  fc.curvature = CurvatureStrategy::principal_minor(1e-6);
  fc.inner.method = InnerMethod::ProximalSweep;
  fc.inner.eta = 0.9;
  fc.max_iters = 60000;  // 3x the budget; the first 20000 iterations are the run
  fc.tol = 0.0;
  auto ref = fcd_run(p, x0, fc);
  const double f_star = ref.F_final;
  const double f_fcd = ref.records.size() > 20000 ? ref.records[20000].F : ref.F_final;

  UcdcConfig uc;
  uc.version = 1;
  uc.seed = 90;
  uc.max_iters = 20000;
  uc.tol = 0.0;
  auto ub = ucdc_run(p, x0, uc);

  const double gap_fcd = f_fcd - f_star;
  const double gap_ucdc = ub.F_final - f_star;
  const double dt = elapsed_s(t0);
  char buf[200];
  std::snprintf(buf, sizeof(buf), "gap %.3e vs baseline %.3e (ratio %.1fx), %.1fs",
                gap_fcd, gap_ucdc, gap_ucdc / std::max(gap_fcd, 1e-300), dt);
  report(9, gap_fcd * 10.0 <= gap_ucdc && dt < 120.0, buf);
}

// 10. Final gap <= 1e-8 against analytic optima.
static void criterion_10() {
  bool pass = true;
  double worst = 0.0;

  {  // 1-D lasso: x* = 2, F* = 2.5.
    CompositeProblem p(
        SmoothLoss::quadratic(SparseDesignMatrix::from_dense({1.0}, 1, 1), {3.0}),
        SeparableRegularizer::l1(1.0));
    FcdConfig cfg;
    cfg.max_iters = 100;
    cfg.tol = 1e-12;
    auto tr = fcd_run(p, Vec{0.0}, cfg);
    double gap = tr.F_final - 2.5;
    worst = std::max(worst, gap);
    pass = pass && gap <= 1e-8;
  }

  {  // Separable lasso with identity design.
    const int n = 30;
    std::vector<double> eye(static_cast<std::size_t>(n) * n, 0.0);
    Vec b(static_cast<std::size_t>(n));
    Rng rng(101);
    double f_star = 0.0;
    const double c = 0.3;
    for (int i = 0; i < n; ++i) {
      eye[static_cast<std::size_t>(i) * n + i] = 1.0;
      b[static_cast<std::size_t>(i)] = 2.0 * rng.normal();
      double xi = soft_threshold(b[static_cast<std::size_t>(i)], c);
      f_star += 0.5 * (xi - b[static_cast<std::size_t>(i)]) * (xi - b[static_cast<std::size_t>(i)]) +
                c * std::abs(xi);
    }
    CompositeProblem p(
        SmoothLoss::quadratic(SparseDesignMatrix::from_dense(eye, n, n), b),
        SeparableRegularizer::l1(c));
    FcdConfig cfg;
    cfg.tau = 5;
    cfg.seed = 10;
    cfg.max_iters = 5000;
    cfg.tol = 1e-12;
    auto tr = fcd_run(p, Vec(static_cast<std::size_t>(n), 0.0), cfg);
    double gap = tr.F_final - f_star;
    worst = std::max(worst, gap);
    pass = pass && gap <= 1e-8;
  }

  {  // Planted quadratic: F* = 0 at x*.
    QuadraticRecipe r;
    r.n = 40;
    r.m = 50;
    r.condition = 100.0;
    r.seed = 103;
    auto q = generate_quadratic(r);
    CompositeProblem p(SmoothLoss::quadratic(q.A, q.b), SeparableRegularizer::zero());
    FcdConfig cfg;
    cfg.tau = 8;
    cfg.seed = 11;
    cfg.curvature = CurvatureStrategy::principal_minor(1e-8);
    cfg.inner.method = InnerMethod::ConjugateGradient;
    cfg.inner.eta = 0.1;
    cfg.max_iters = 50000;
    cfg.tol = 1e-11;
    auto tr = fcd_run(p, Vec(40, 0.0), cfg);
    worst = std::max(worst, tr.F_final);
    pass = pass && tr.F_final <= 1e-8;
  }

  char buf[120];
  std::snprintf(buf, sizeof(buf), "worst gap %.3e across analytic instances", worst);
  report(10, pass, buf);
}

int main() {
  criterion_1();
  criteria_2_3();
  criterion_4();
  criterion_5();
  auto si = strong_instance();
  criterion_6(si);
  criterion_7(si);
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s\n", g_failures == 0 ? "all criteria passed"
                                      : "some criteria failed");
  return g_failures == 0 ? 0 : 1;
}
