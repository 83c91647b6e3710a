#include "fcd/subsolver.hpp"

#include <cmath>
#include <stdexcept>

namespace fcd {

namespace {

// Floating-point slack so that eta = 0 (exact closed-form solves) still
// certifies; scaled by the baseline residual.
double certificate_slack_sq(double baseline_norm) {
  double s = 1e-12 * std::max(1.0, baseline_norm);
  return s * s;
}

}  // namespace

DirectionCertificate check_certificates(const SubproblemModel& m, const Vec& t,
                                        double eta, int inner_iters) {
  DirectionCertificate cert;
  cert.inner_iters = inner_iters;
  cert.q_delta = model_value_delta(m, t);
  cert.model_decrease = cert.q_delta < 0.0;

  Vec g0 = baseline_residual(m);
  cert.baseline_norm = norm2(g0);

  Vec ht = m.apply_H(t);
  double g_sq = 0.0, dist_sq = 0.0;
  const auto& reg = m.regularizer();
  for (int j = 0; j < m.size(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    double gh = m.gradient()[uj] + ht[uj];
    double p = reg.conjugate_prox_coordinate(m.x_subset()[uj] + t[uj] - gh);
    double g = gh + p;
    g_sq += g * g;
    double proj = reg.subdifferential_project(m.x_subset()[uj] + t[uj], p);
    dist_sq += (proj - p) * (proj - p);
  }
  cert.residual_norm = std::sqrt(g_sq);
  cert.projection_gap_sq = dist_sq;

  double rhs = eta * cert.baseline_norm;
  cert.residual_bound =
      dist_sq + g_sq <= rhs * rhs + certificate_slack_sq(cert.baseline_norm);
  return cert;
}

SubsolverResult solve_closed_form_diagonal(const SubproblemModel& m, double eta) {
  if (!m.is_diagonal())
    throw std::invalid_argument("closed-form inner solve needs a diagonal operator");
  const auto& reg = m.regularizer();
  Vec t(static_cast<std::size_t>(m.size()));
  for (int j = 0; j < m.size(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    double h = m.diag()[uj];
    double z = m.x_subset()[uj] - m.gradient()[uj] / h;
    t[uj] = reg.prox_coordinate(z, h) - m.x_subset()[uj];
  }
  SubsolverResult res;
  res.cert = check_certificates(m, t, eta, 1);
  res.t = std::move(t);
  return res;
}

SubsolverResult solve_cg_smooth(const SubproblemModel& m, double eta, int max_inner) {
  if (m.regularizer().kind() != RegKind::Zero)
    throw std::invalid_argument("conjugate-gradient inner solve needs Psi = 0");
  const auto n = static_cast<std::size_t>(m.size());
  Vec t(n, 0.0);
  Vec r(m.gradient());
  for (auto& v : r) v = -v;  // r = -grad - H t, t = 0
  Vec p = r;
  double rs = dot(r, r);
  double base = std::sqrt(rs);
  double tol = std::max(eta * base, 1e-14 * std::max(1.0, base));
  int it = 0;
  while (std::sqrt(rs) > tol && it < max_inner) {
    Vec hp = m.apply_H(p);
    double curv = dot(p, hp);
    if (curv <= 0.0) break;
    double a = rs / curv;
    for (std::size_t i = 0; i < n; ++i) {
      t[i] += a * p[i];
      r[i] -= a * hp[i];
    }
    double rs_new = dot(r, r);
    double beta = rs_new / rs;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rs = rs_new;
    ++it;
  }
  SubsolverResult res;
  res.cert = check_certificates(m, t, eta, it);
  res.t = std::move(t);
  return res;
}

SubsolverResult solve_proximal_inner(const SubproblemModel& m, double eta, int max_inner) {
  const int tau = m.size();
  const auto n = static_cast<std::size_t>(tau);
  const auto& reg = m.regularizer();

  // Columns of H, materialized once so each sweep is O(tau^2).
  std::vector<Vec> cols;
  cols.reserve(n);
  for (int j = 0; j < tau; ++j) cols.push_back(m.column(j));

  Vec t(n, 0.0), ht(n, 0.0);
  SubsolverResult res;
  for (int sweep = 1; sweep <= max_inner; ++sweep) {
    for (int j = 0; j < tau; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      double h = cols[uj][uj];
      if (h <= 0.0) continue;
      double point = m.x_subset()[uj] + t[uj];
      double z = point - (m.gradient()[uj] + ht[uj]) / h;
      double step = reg.prox_coordinate(z, h) - point;
      if (step == 0.0) continue;
      t[uj] += step;
      for (std::size_t i = 0; i < n; ++i) ht[i] += step * cols[uj][i];
    }
    res.cert = check_certificates(m, t, eta, sweep);
    if (res.cert.ok()) break;
  }
  res.t = std::move(t);
  return res;
}

SubsolverResult solve_subproblem(const SubproblemModel& m, const InexactnessPolicy& policy) {
  SubsolverResult res;
  switch (policy.method) {
    case InnerMethod::ClosedForm:
      res = solve_closed_form_diagonal(m, policy.eta);
      break;
    case InnerMethod::ConjugateGradient:
      res = solve_cg_smooth(m, policy.eta, policy.max_inner);
      break;
    case InnerMethod::ProximalSweep:
      res = solve_proximal_inner(m, policy.eta, policy.max_inner);
      break;
  }
  if (policy.strict && !res.cert.ok())
    throw std::runtime_error("inner solve failed to certify the direction");
  return res;
}

}  // namespace fcd
