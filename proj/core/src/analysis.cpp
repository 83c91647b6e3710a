#include "fcd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "fcd/rng.hpp"

namespace fcd {

double compute_chi(double lambda_min, double Lambda_max, double L_max,
                   double eta_tilde, double theta) {
  if (lambda_min <= 0.0 || lambda_min > L_max)
    throw std::invalid_argument("chi: need 0 < lambda <= L");
  if (Lambda_max < lambda_min) throw std::invalid_argument("chi: Lambda < lambda");
  if (theta <= 0.0 || theta >= 1.0) throw std::invalid_argument("chi: theta outside (0,1)");
  if (eta_tilde < 0.0 || eta_tilde >= 1.0)
    throw std::invalid_argument("chi: eta_tilde outside [0,1)");
  double gamma = (1.0 - eta_tilde) / (1.0 + 2.0 * Lambda_max);
  double g2 = gamma * gamma;
  double num = theta * (1.0 - theta) * lambda_min * lambda_min * lambda_min * g2;
  double den = 2.0 * L_max *
               (eta_tilde * eta_tilde +
                lambda_min * g2 * (L_max - (1.0 - theta) * lambda_min));
  if (den <= 0.0) throw std::invalid_argument("chi: degenerate denominator");
  return num / den;
}

double compute_vartheta(double lambda_min, double Lambda_max, double L_max,
                        double eta_tilde, double theta) {
  if (lambda_min <= 0.0 || lambda_min > L_max)
    throw std::invalid_argument("vartheta: need 0 < lambda <= L");
  if (Lambda_max < lambda_min) throw std::invalid_argument("vartheta: Lambda < lambda");
  if (theta <= 0.0 || theta >= 0.5)
    throw std::invalid_argument("vartheta: theta outside (0,1/2)");
  if (eta_tilde < 0.0 || eta_tilde >= 1.0)
    throw std::invalid_argument("vartheta: eta_tilde outside [0,1)");
  double r = 1.0 - eta_tilde;
  return theta * lambda_min * lambda_min * r * r / (L_max * Lambda_max * Lambda_max);
}

double compute_delta(double mu_f, double mu_F, double Lambda_max) {
  if (mu_f <= 0.0 || mu_f > mu_F) throw std::invalid_argument("delta: need 0 < mu_f <= mu_F");
  if (Lambda_max < mu_f) throw std::invalid_argument("delta: need Lambda_max >= mu_f");
  if (mu_F + mu_f < 2.0 * Lambda_max)
    return (mu_f + mu_F) / (4.0 * Lambda_max) * (1.0 + mu_f / mu_F);
  return 1.0 - (Lambda_max - mu_f) / mu_F;
}

double full_hessian_top_eig(const CompositeProblem& p) {
  const auto& A = p.loss().A;
  const int n = A.cols();
  const double scale = p.loss().kind == LossKind::Logistic ? 0.25 : 1.0;
  Vec v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)] = 1.0 + 1e-3 * static_cast<double>(i % 7);
  double nv = norm2(v);
  for (auto& e : v) e /= nv;
  double est = 0.0;
  for (int it = 0; it < 30; ++it) {
    Vec av = A.multiply(v);
    Vec w(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < A.rows(); ++j) {
      double rv = av[static_cast<std::size_t>(j)];
      if (rv == 0.0) continue;
      for (const auto& e : A.row(j)) w[static_cast<std::size_t>(e.index)] += e.value * rv;
    }
    double nw = norm2(w);
    if (nw <= 0.0) return 0.0;
    est = nw;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nw;
  }
  return scale * est * 1.1;
}

ComplexityConstants conservative_constants(const CompositeProblem& p,
                                           const CurvatureStrategy& strategy,
                                           int tau, double theta, double eta_tilde) {
  const int n = p.dimension();
  if (tau < 1 || tau > n) throw std::invalid_argument("constants: invalid tau");
  ComplexityConstants c;
  c.theta = theta;
  c.eta_tilde = eta_tilde;

  Vec lip = p.coordinate_lipschitz_all();
  Vec sorted = lip;
  std::sort(sorted.begin(), sorted.end());
  double l_small = std::accumulate(sorted.begin(), sorted.begin() + tau, 0.0);
  double l_big = std::accumulate(sorted.end() - tau, sorted.end(), 0.0);
  c.L_max = l_big;

  switch (strategy.kind) {
    case CurvatureKind::Identity:
      c.lambda_min = c.Lambda_max = 1.0;
      break;
    case CurvatureKind::ScaledIdentity:
      if (strategy.nu > 0.0) {
        c.lambda_min = c.Lambda_max = strategy.nu;
      } else {
        c.lambda_min = l_small;
        c.Lambda_max = l_big;
      }
      break;
    case CurvatureKind::DiagonalHessian: {
      // Logistic curvature varies with x; 1/4 ||a_i||^2 dominates it and 0
      // is the infimum, so the ridge is the only usable lower bound there.
      double dmin = 0.0, dmax = 0.0;
      if (p.loss().kind == LossKind::Quadratic) {
        dmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
          double d = p.loss().A.col_sq_norm(i);
          dmin = std::min(dmin, d);
          dmax = std::max(dmax, d);
        }
      } else {
        for (int i = 0; i < n; ++i)
          dmax = std::max(dmax, 0.25 * p.loss().A.col_sq_norm(i));
        dmin = 0.0;
      }
      c.lambda_min = std::max(dmin + strategy.ridge, 1e-12);
      c.Lambda_max = dmax + strategy.ridge;
      break;
    }
    case CurvatureKind::PrincipalMinor:
      // Eigenvalues of any principal minor interlace those of the full
      // Hessian, so the full-space top eigenvalue bounds Lambda_S.
      c.lambda_min = strategy.ridge;
      c.Lambda_max = full_hessian_top_eig(p) + strategy.ridge;
      break;
    case CurvatureKind::LimitedMemoryQN:
      throw std::invalid_argument(
          "constants: no a priori spectral bound for the quasi-Newton operator");
  }
  if (c.lambda_min <= 0.0) throw std::invalid_argument("constants: lambda_min <= 0");
  c.Lambda_max = std::max(c.Lambda_max, c.lambda_min);
  // chi and alpha_min require lambda <= L.
  c.lambda_min = std::min(c.lambda_min, c.L_max);

  c.gamma_min = (1.0 - eta_tilde) / (1.0 + 2.0 * c.Lambda_max);
  c.alpha_min = (1.0 - theta) * c.lambda_min / (2.0 * c.L_max);
  c.chi = compute_chi(c.lambda_min, c.Lambda_max, c.L_max, eta_tilde, theta);
  if (theta < 0.5)
    c.vartheta = compute_vartheta(c.lambda_min, c.Lambda_max, c.L_max, eta_tilde, theta);

  if (p.mu_f() && *p.mu_f() > 0.0) {
    c.mu_f = *p.mu_f();
    c.mu_F = c.mu_f + p.regularizer().strong_convexity();
    double lam = std::max(c.Lambda_max, c.mu_f);  // delta needs Lambda_max >= mu_f
    c.Lambda_max = lam;
    c.delta = compute_delta(c.mu_f, c.mu_F, lam);
  }
  return c;
}

long iteration_bound(BoundTheorem theorem, const ComplexityConstants& c, int N,
                     int tau, double epsilon, double rho, double initial_gap,
                     double radius) {
  if (N < 1 || tau < 1 || tau > N) throw std::invalid_argument("bound: invalid N, tau");
  if (epsilon <= 0.0) throw std::invalid_argument("bound: epsilon <= 0");
  if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("bound: rho outside (0,1)");
  if (initial_gap <= 0.0) throw std::invalid_argument("bound: initial gap <= 0");

  const double Nt = static_cast<double>(N) / static_cast<double>(tau);
  const double r2 = radius * radius;
  double k = 0.0;
  switch (theorem) {
    case BoundTheorem::CNi: {
      if (c.chi <= 0.0) throw std::invalid_argument("bound: chi <= 0");
      if (epsilon >= initial_gap)
        throw std::invalid_argument("bound: C-N(i) needs epsilon < initial gap");
      double m1 = std::max(r2, initial_gap);
      k = 2.0 * Nt / c.chi * (m1 / epsilon) * (1.0 + std::log(1.0 / rho)) + 2.0 -
          2.0 * Nt / c.chi * (m1 / initial_gap);
      break;
    }
    case BoundTheorem::CNii:
      if (c.chi <= 0.0) throw std::invalid_argument("bound: chi <= 0");
      if (epsilon >= std::min(r2, initial_gap))
        throw std::invalid_argument("bound: C-N(ii) needs epsilon < min(R^2, gap)");
      k = 2.0 * Nt / c.chi * (r2 / epsilon) * std::log(initial_gap / (epsilon * rho));
      break;
    case BoundTheorem::SCN:
      if (c.chi <= 0.0 || c.delta <= 0.0)
        throw std::invalid_argument("bound: SC-N needs chi > 0 and delta > 0");
      k = Nt / (c.chi * c.delta) * std::log(initial_gap / (epsilon * rho));
      break;
    case BoundTheorem::CS:
      if (c.vartheta <= 0.0) throw std::invalid_argument("bound: vartheta <= 0");
      if (epsilon >= std::max(r2, initial_gap))
        throw std::invalid_argument("bound: C-S needs epsilon < max(R^2, gap)");
      k = 2.0 * Nt * r2 / (c.vartheta * epsilon) * (1.0 + std::log(1.0 / rho)) + 2.0 -
          2.0 * Nt * r2 / (c.vartheta * initial_gap);
      break;
    case BoundTheorem::SCS:
      if (c.vartheta <= 0.0 || c.mu_f <= 0.0)
        throw std::invalid_argument("bound: SC-S needs vartheta > 0 and mu_f > 0");
      k = Nt / (c.vartheta * c.mu_f) * std::log(initial_gap / (epsilon * rho));
      break;
  }
  if (!std::isfinite(k)) throw std::invalid_argument("bound: nonfinite K");
  return static_cast<long>(std::ceil(std::max(k, 1.0)));
}

double levelset_radius(double initial_gap, double mu_F) {
  if (mu_F <= 0.0)
    throw std::invalid_argument("level set radius: needs strong convexity");
  if (initial_gap < 0.0) throw std::invalid_argument("level set radius: negative gap");
  return std::sqrt(2.0 * initial_gap / mu_F);
}

double levelset_radius_sampled(const CompositeProblem& p, const Vec& x0,
                               const Vec& x_star, std::uint64_t seed,
                               int directions) {
  const double level = eval_F(p, x0);
  const double f_star = eval_F(p, x_star);
  if (level < f_star) throw std::invalid_argument("level set radius: x* not optimal");
  Rng rng(seed);
  const auto n = x_star.size();
  double radius = 0.0;
  for (int d = 0; d < directions; ++d) {
    Vec dir(n);
    for (auto& e : dir) e = rng.normal();
    double nd = norm2(dir);
    if (nd == 0.0) continue;
    for (auto& e : dir) e /= nd;
    // Expand until the ray exits the level set, then bisect the boundary.
    double hi = 1.0;
    Vec y(n);
    auto value_at = [&](double r) {
      for (std::size_t i = 0; i < n; ++i) y[i] = x_star[i] + r * dir[i];
      return eval_F(p, y);
    };
    int expand = 0;
    while (value_at(hi) <= level) {
      hi *= 2.0;
      if (++expand > 60)
        throw std::runtime_error("level set radius: unbounded level set along a ray");
    }
    double lo = hi / 2.0 < 1.0 ? 0.0 : hi / 2.0;
    for (int it = 0; it < 50; ++it) {
      double mid = 0.5 * (lo + hi);
      (value_at(mid) <= level ? lo : hi) = mid;
    }
    radius = std::max(radius, hi);
  }
  return 1.2 * radius;
}

BoundReport validate_bound(const CompositeProblem& p, const Vec& x0,
                           const FcdConfig& base, BoundTheorem theorem,
                           double f_star, double epsilon, double rho, long K,
                           int trials, int threads) {
  if (trials < 1) throw std::invalid_argument("validate: trials < 1");
  BoundReport report;
  report.theorem = theorem;
  report.epsilon = epsilon;
  report.rho = rho;
  report.K = K;
  report.trials = trials;

  if (threads <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  threads = std::min(threads, trials);

  std::vector<int> successes(static_cast<std::size_t>(threads), 0);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      int local = 0;
      for (int trial = w; trial < trials; trial += threads) {
        FcdConfig cfg = base;
        cfg.seed = base.seed + static_cast<std::uint64_t>(trial) + 1;
        cfg.max_iters = K;
        cfg.tol = 0.0;  // run the full K iterations unless exactly stationary
        RunTrace trace = fcd_run(p, x0, cfg);
        if (trace.F_final - f_star <= epsilon) ++local;
      }
      successes[static_cast<std::size_t>(w)] = local;
    });
  }
  for (auto& th : pool) th.join();

  report.successes = std::accumulate(successes.begin(), successes.end(), 0);
  report.frequency = static_cast<double>(report.successes) / static_cast<double>(trials);
  report.required_frequency =
      (1.0 - rho) - 2.0 * std::sqrt(rho * (1.0 - rho) / static_cast<double>(trials));
  report.pass = report.frequency >= report.required_frequency;
  return report;
}

std::string theorem_name(BoundTheorem t) {
  switch (t) {
    case BoundTheorem::CNi: return "C-N-i";
    case BoundTheorem::CNii: return "C-N-ii";
    case BoundTheorem::SCN: return "SC-N";
    case BoundTheorem::CS: return "C-S";
    case BoundTheorem::SCS: return "SC-S";
  }
  return "unknown";
}

}  // namespace fcd
