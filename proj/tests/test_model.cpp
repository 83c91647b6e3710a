#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fcd/model.hpp"
#include "fcd/rng.hpp"
#include "helpers.hpp"

using namespace fcd;
using testutil::Dense;

namespace {

struct Setup {
  CompositeProblem p;
  Dense d;
};

Setup make_quadratic(int m, int n, std::uint64_t seed, SeparableRegularizer reg) {
  Rng rng(seed);
  Dense d = testutil::random_dense(m, n, rng);
  Vec b(static_cast<std::size_t>(m));
  for (auto& v : b) v = rng.normal();
  CompositeProblem p(
      SmoothLoss::quadratic(SparseDesignMatrix::from_dense(d.a, m, n), b), reg);
  return {std::move(p), std::move(d)};
}

Vec random_vec(std::size_t n, Rng& rng, double scale = 1.0) {
  Vec x(n);
  for (auto& v : x) v = scale * rng.normal();
  return x;
}

// A^T A block restricted to the subset, plus a ridge.
Dense gram_block(const Dense& d, const CoordinateSubset& S, double ridge) {
  const int tau = S.size();
  Dense g{tau, tau, std::vector<double>(static_cast<std::size_t>(tau) * tau, 0.0)};
  for (int i = 0; i < tau; ++i)
    for (int j = 0; j < tau; ++j) {
      double v = 0.0;
      for (int r = 0; r < d.rows; ++r) v += d.at(r, S[i]) * d.at(r, S[j]);
      g.at(i, j) = v + (i == j ? ridge : 0.0);
    }
  return g;
}

}  // namespace

TEST_CASE("identity curvature") {
  auto su = make_quadratic(8, 6, 3, SeparableRegularizer::l1(0.3));
  Rng rng(4);
  Evaluator ev(su.p, random_vec(6, rng));
  CoordinateSubset S({0, 2, 5}, 6);
  auto m = build_model(ev, S, CurvatureStrategy::identity());
  CHECK(m.lambda() == 1.0);
  CHECK(m.Lambda() == 1.0);
  Vec v = random_vec(3, rng);
  CHECK(m.apply_H(v) == v);
}

TEST_CASE("scaled identity defaults to the subset Lipschitz constant") {
  auto su = make_quadratic(8, 6, 5, SeparableRegularizer::zero());
  Evaluator ev(su.p, Vec(6, 0.0));
  CoordinateSubset S({1, 4}, 6);
  auto m = build_model(ev, S, CurvatureStrategy::scaled_identity());
  const double ls = su.p.subset_lipschitz(S);
  CHECK(m.lambda() == doctest::Approx(ls).epsilon(1e-14));
  CHECK(m.Lambda() == doctest::Approx(ls).epsilon(1e-14));
  CHECK(m.subset_lipschitz() == doctest::Approx(ls).epsilon(1e-14));

  auto mf = build_model(ev, S, CurvatureStrategy::scaled_identity(2.5));
  Vec v{1.0, -3.0};
  Vec hv = mf.apply_H(v);
  CHECK(hv[0] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(hv[1] == doctest::Approx(-7.5).epsilon(1e-14));
}

TEST_CASE("diagonal curvature matches the Hessian diagonal plus ridge") {
  auto su = make_quadratic(9, 7, 6, SeparableRegularizer::zero());
  Rng rng(7);
  Evaluator ev(su.p, random_vec(7, rng, 0.4));
  CoordinateSubset S({0, 3, 6}, 7);
  const double rho = 0.25;
  auto m = build_model(ev, S, CurvatureStrategy::diagonal(rho));
  REQUIRE(m.is_diagonal());
  for (int j = 0; j < 3; ++j) {
    double want = ev.hessian_diag(S[j]) + rho;
    CHECK(m.diag()[static_cast<std::size_t>(j)] == doctest::Approx(want).epsilon(1e-14));
    Vec e(3, 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    CHECK(m.apply_H(e)[static_cast<std::size_t>(j)] == doctest::Approx(want).epsilon(1e-14));
  }
  CHECK(m.lambda() == doctest::Approx(*std::min_element(m.diag().begin(), m.diag().end())));
  CHECK(m.Lambda() == doctest::Approx(*std::max_element(m.diag().begin(), m.diag().end())));
}

TEST_CASE("principal minor matches the dense Gram block and brackets its spectrum") {
  auto su = make_quadratic(10, 6, 8, SeparableRegularizer::l1(0.1));
  Rng rng(9);
  Evaluator ev(su.p, random_vec(6, rng, 0.3));
  CoordinateSubset S({1, 2, 4, 5}, 6);
  const double rho = 1e-3;
  auto m = build_model(ev, S, CurvatureStrategy::principal_minor(rho));
  REQUIRE(m.has_dense());

  Dense block = gram_block(su.d, S, rho);
  for (int j = 0; j < 4; ++j) {
    Vec col = m.column(j);
    for (int i = 0; i < 4; ++i)
      CHECK(col[static_cast<std::size_t>(i)] == doctest::Approx(block.at(i, j)).epsilon(1e-12));
  }
  Vec v = random_vec(4, rng);
  Vec hv = m.apply_H(v);
  for (int i = 0; i < 4; ++i) {
    double want = 0.0;
    for (int j = 0; j < 4; ++j) want += block.at(i, j) * v[static_cast<std::size_t>(j)];
    CHECK(hv[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-12));
  }

  auto eig = testutil::jacobi_eigenvalues(block);
  const double top = *std::max_element(eig.begin(), eig.end());
  const double bottom = *std::min_element(eig.begin(), eig.end());
  CHECK(m.Lambda() >= top * (1.0 - 1e-10));
  CHECK(m.lambda() <= bottom * (1.0 + 1e-10));
  CHECK(m.lambda() > 0.0);
}

TEST_CASE("model value delta matches a naive evaluation") {
  auto su = make_quadratic(9, 6, 10, SeparableRegularizer::elastic_net(0.2, 0.5));
  Rng rng(11);
  Vec x = random_vec(6, rng, 0.5);
  Evaluator ev(su.p, x);
  CoordinateSubset S({0, 1, 3}, 6);
  const auto& reg = su.p.regularizer();

  for (auto strategy : {CurvatureStrategy::diagonal(0.1), CurvatureStrategy::principal_minor(0.1)}) {
    auto m = build_model(ev, S, strategy);
    Vec t = random_vec(3, rng, 0.7);
    Vec ht = m.apply_H(t);
    Vec xs = S.gather(x);
    Vec xt(xs);
    for (std::size_t i = 0; i < xt.size(); ++i) xt[i] += t[i];
    double want = dot(m.gradient(), t) + 0.5 * dot(t, ht) +
                  reg.value_subset(xt) - reg.value_subset(xs);
    CHECK(model_value_delta(m, t) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("stationarity residual reduces to grad + H t when Psi is zero") {
  auto su = make_quadratic(8, 5, 12, SeparableRegularizer::zero());
  Rng rng(13);
  Evaluator ev(su.p, random_vec(5, rng, 0.4));
  CoordinateSubset S({0, 2, 4}, 5);
  auto m = build_model(ev, S, CurvatureStrategy::diagonal(0.05));
  Vec t = random_vec(3, rng);
  Vec g = stationarity_residual(m, t);
  Vec ht = m.apply_H(t);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(g[i] == doctest::Approx(m.gradient()[i] + ht[i]).epsilon(1e-12));

  Vec g0 = baseline_residual(m);
  Vec g0_ref = stationarity_residual(m, Vec(3, 0.0));
  for (std::size_t i = 0; i < g0.size(); ++i)
    CHECK(g0[i] == doctest::Approx(g0_ref[i]).epsilon(1e-14));
}

TEST_CASE("stationarity residual uses the clamped conjugate prox for l1") {
  // For Psi_i = c|u|, prox of the conjugate is the clamp onto [-c, c].
  const double c = 0.4;
  auto su = make_quadratic(8, 5, 14, SeparableRegularizer::l1(c));
  Rng rng(15);
  Vec x = random_vec(5, rng, 0.6);
  Evaluator ev(su.p, x);
  CoordinateSubset S({1, 3}, 5);
  auto m = build_model(ev, S, CurvatureStrategy::diagonal());
  Vec t = random_vec(2, rng);
  Vec ht = m.apply_H(t);
  Vec g = stationarity_residual(m, t);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double z = m.x_subset()[i] + t[i] - m.gradient()[i] - ht[i];
    double clamped = std::clamp(z, -c, c);
    CHECK(g[i] == doctest::Approx(m.gradient()[i] + ht[i] + clamped).epsilon(1e-12));
  }
}

TEST_CASE("limited memory operator satisfies the secant equation and stays positive") {
  auto su = make_quadratic(12, 8, 16, SeparableRegularizer::zero());
  Rng rng(17);
  Vec x = random_vec(8, rng, 0.3);
  Evaluator ev(su.p, x);

  LbfgsHistory hist(6);
  Vec prev_x = x, prev_g = ev.full_gradient();
  Evaluator walker(su.p, x);
  for (int k = 0; k < 5; ++k) {
    Vec step = random_vec(8, rng, 0.2);
    CoordinateSubset full_set([] {
      std::vector<int> all(8);
      for (int i = 0; i < 8; ++i) all[static_cast<std::size_t>(i)] = i;
      return all;
    }(), 8);
    auto ctx = walker.prepare_step(full_set, step);
    walker.commit(ctx, 1.0);
    Vec g = walker.full_gradient();
    Vec s(8), y(8);
    for (std::size_t i = 0; i < 8; ++i) {
      s[i] = walker.x()[i] - prev_x[i];
      y[i] = g[i] - prev_g[i];
    }
    hist.push(std::move(s), std::move(y));
    prev_x = walker.x();
    prev_g = std::move(g);
  }
  REQUIRE(hist.size() == 5);

  CoordinateSubset S([] {
    std::vector<int> all(8);
    for (int i = 0; i < 8; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }(), 8);
  const double rho = 1e-4;
  auto m = build_model(walker, S, CurvatureStrategy::lbfgs(6, rho), &hist);

  // Secant equation on the most recent admitted pair: B s = y, so the full
  // operator (with ridge) maps s to y + rho s.
  const auto& [s_last, y_last] = hist.pair(hist.size() - 1);
  if (dot(s_last, y_last) > 1e-10 * norm2(s_last) * norm2(y_last)) {
    Vec bs = m.apply_H(s_last);
    for (std::size_t i = 0; i < bs.size(); ++i)
      CHECK(bs[i] == doctest::Approx(y_last[i] + rho * s_last[i]).epsilon(1e-8));
  }

  for (int trial = 0; trial < 20; ++trial) {
    Vec v = random_vec(8, rng);
    double quad = dot(v, m.apply_H(v));
    CHECK(quad >= rho * dot(v, v) * (1.0 - 1e-10));
  }
  CHECK(m.lambda() > 0.0);
  CHECK(m.Lambda() >= m.lambda());
}
