#include "fcd/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fcd {

namespace {

constexpr int kDenseCap = 512;        // cache H as a dense block up to this size
constexpr double kEigFloor = 1e-12;
constexpr int kPowerIters = 20;
constexpr double kPowerSafety = 1.1;  // headroom on the power iteration estimate
constexpr double kPairGuard = 1e-10;  // curvature pair admission threshold

double power_iteration_bound(const SubproblemModel& m) {
  const int tau = m.size();
  Vec v(static_cast<std::size_t>(tau));
  for (int j = 0; j < tau; ++j)
    v[static_cast<std::size_t>(j)] = 1.0 + 1e-3 * static_cast<double>(j % 7);
  double nv = norm2(v);
  for (auto& e : v) e /= nv;
  double est = 0.0;
  for (int it = 0; it < kPowerIters; ++it) {
    Vec w = m.apply_H(v);
    double nw = norm2(w);
    if (nw <= 0.0) return kEigFloor;
    est = nw;
    for (int j = 0; j < tau; ++j) v[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] / nw;
  }
  return est * kPowerSafety;
}

}  // namespace

void LbfgsHistory::push(Vec s, Vec y) {
  pairs_.emplace_back(std::move(s), std::move(y));
  while (static_cast<int>(pairs_.size()) > memory_) pairs_.pop_front();
}

Vec SubproblemModel::LbfgsOperator::apply(const Vec& v) const {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (gamma + ridge) * v[i];
  for (std::size_t j = 0; j < y.size(); ++j) {
    double a = dot(y[j], v) / y_dot_s[j];
    double b = dot(bs[j], v) / s_dot_bs[j];
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += a * y[j][i] - b * bs[j][i];
  }
  return out;
}

Vec SubproblemModel::apply_H(const Vec& v) const {
  const int tau = size();
  if (static_cast<int>(v.size()) != tau)
    throw std::invalid_argument("apply_H: dimension mismatch");
  if (!diag_.empty()) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = diag_[i] * v[i];
    return out;
  }
  if (!dense_.empty()) {
    Vec out(v.size(), 0.0);
    for (int r = 0; r < tau; ++r) {
      const double* row = dense_.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(tau);
      double acc = 0.0;
      for (int c = 0; c < tau; ++c) acc += row[c] * v[static_cast<std::size_t>(c)];
      out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
  }
  if (lbfgs_) return lbfgs_->apply(v);
  Vec out = ev_->hessian_subset_product(S_, v);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += ridge_ * v[i];
  return out;
}

Vec SubproblemModel::column(int j) const {
  const int tau = size();
  if (!diag_.empty()) {
    Vec out(static_cast<std::size_t>(tau), 0.0);
    out[static_cast<std::size_t>(j)] = diag_[static_cast<std::size_t>(j)];
    return out;
  }
  if (!dense_.empty()) {
    Vec out(static_cast<std::size_t>(tau));
    for (int r = 0; r < tau; ++r)
      out[static_cast<std::size_t>(r)] =
          dense_[static_cast<std::size_t>(r) * static_cast<std::size_t>(tau) + static_cast<std::size_t>(j)];
    return out;
  }
  Vec e(static_cast<std::size_t>(tau), 0.0);
  e[static_cast<std::size_t>(j)] = 1.0;
  return apply_H(e);
}

SubproblemModel build_model(const Evaluator& ev, const CoordinateSubset& S,
                            const CurvatureStrategy& strategy,
                            const LbfgsHistory* history, const Vec* grad_hint) {
  SubproblemModel m;
  m.S_ = S;
  m.grad_ = grad_hint != nullptr ? *grad_hint : ev.partial_gradient(S);
  m.xs_ = S.gather(ev.x());
  m.reg_ = &ev.problem().regularizer();
  m.ev_ = &ev;
  m.ridge_ = strategy.ridge;
  m.subset_lipschitz_ = ev.problem().subset_lipschitz(S);
  const int tau = S.size();
  const auto utau = static_cast<std::size_t>(tau);

  switch (strategy.kind) {
    case CurvatureKind::Identity:
      m.diag_.assign(utau, 1.0);
      m.lambda_ = m.Lambda_ = 1.0;
      break;
    case CurvatureKind::ScaledIdentity: {
      double nu = strategy.nu > 0.0 ? strategy.nu : m.subset_lipschitz_;
      if (nu <= 0.0) throw std::invalid_argument("ScaledIdentity: nonpositive multiplier");
      m.diag_.assign(utau, nu);
      m.lambda_ = m.Lambda_ = nu;
      break;
    }
    case CurvatureKind::DiagonalHessian: {
      if (strategy.ridge < 0.0) throw std::invalid_argument("negative ridge");
      m.diag_.resize(utau);
      for (int j = 0; j < tau; ++j)
        m.diag_[static_cast<std::size_t>(j)] =
            std::max(ev.hessian_diag(S[j]) + strategy.ridge, kEigFloor);
      m.lambda_ = *std::min_element(m.diag_.begin(), m.diag_.end());
      m.Lambda_ = *std::max_element(m.diag_.begin(), m.diag_.end());
      break;
    }
    case CurvatureKind::PrincipalMinor: {
      if (strategy.ridge <= 0.0)
        throw std::invalid_argument("PrincipalMinor needs a positive ridge");
      if (tau <= kDenseCap) {
        m.dense_.assign(utau * utau, 0.0);
        Vec e(utau, 0.0);
        for (int j = 0; j < tau; ++j) {
          e[static_cast<std::size_t>(j)] = 1.0;
          Vec col = ev.hessian_subset_product(S, e);
          e[static_cast<std::size_t>(j)] = 0.0;
          for (int r = 0; r < tau; ++r)
            m.dense_[static_cast<std::size_t>(r) * utau + static_cast<std::size_t>(j)] =
                col[static_cast<std::size_t>(r)] + (r == j ? strategy.ridge : 0.0);
        }
      }
      m.lambda_ = strategy.ridge;
      m.Lambda_ = std::max(power_iteration_bound(m), m.lambda_);
      break;
    }
    case CurvatureKind::LimitedMemoryQN: {
      if (strategy.ridge <= 0.0)
        throw std::invalid_argument("LimitedMemoryQN needs a positive ridge");
      SubproblemModel::LbfgsOperator op;
      op.ridge = strategy.ridge;
      op.gamma = 1.0;
      if (history != nullptr && history->size() > 0) {
        const auto& last = history->pair(history->size() - 1);
        Vec ls = S.gather(last.first), ly = S.gather(last.second);
        double ss = dot(ls, ls), sy = dot(ls, ly);
        if (sy > kPairGuard * norm2(ls) * norm2(ly) && ss > 0.0) op.gamma = sy / ss;
      }
      if (history != nullptr) {
        for (int j = 0; j < history->size(); ++j) {
          const auto& p = history->pair(j);
          Vec s = S.gather(p.first), y = S.gather(p.second);
          double sy = dot(s, y);
          if (sy <= kPairGuard * norm2(s) * norm2(y) || sy <= 0.0) continue;
          // b = B_j s with the corrections admitted so far; ridge excluded so
          // the recursion matches the plain BFGS operator.
          Vec b(s.size());
          for (std::size_t i = 0; i < s.size(); ++i) b[i] = op.gamma * s[i];
          for (std::size_t q = 0; q < op.y.size(); ++q) {
            double a = dot(op.y[q], s) / op.y_dot_s[q];
            double c = dot(op.bs[q], s) / op.s_dot_bs[q];
            for (std::size_t i = 0; i < s.size(); ++i) b[i] += a * op.y[q][i] - c * op.bs[q][i];
          }
          double sb = dot(s, b);
          if (sb <= 0.0) continue;
          op.y.push_back(std::move(y));
          op.y_dot_s.push_back(sy);
          op.bs.push_back(std::move(b));
          op.s_dot_bs.push_back(sb);
        }
      }
      m.lbfgs_ = std::move(op);
      if (tau <= kDenseCap) {
        m.dense_.assign(utau * utau, 0.0);
        Vec e(utau, 0.0);
        for (int j = 0; j < tau; ++j) {
          e[static_cast<std::size_t>(j)] = 1.0;
          Vec col = m.lbfgs_->apply(e);
          e[static_cast<std::size_t>(j)] = 0.0;
          for (int r = 0; r < tau; ++r)
            m.dense_[static_cast<std::size_t>(r) * utau + static_cast<std::size_t>(j)] =
                col[static_cast<std::size_t>(r)];
        }
      }
      m.lambda_ = strategy.ridge;
      m.Lambda_ = std::max(power_iteration_bound(m), m.lambda_);
      break;
    }
  }
  return m;
}

double model_value_delta(const SubproblemModel& m, const Vec& t) {
  Vec ht = m.apply_H(t);
  double val = dot(m.gradient(), t) + 0.5 * dot(t, ht);
  const auto& reg = m.regularizer();
  for (int j = 0; j < m.size(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    val += reg.value_coordinate(m.x_subset()[uj] + t[uj]) -
           reg.value_coordinate(m.x_subset()[uj]);
  }
  return val;
}

Vec stationarity_residual(const SubproblemModel& m, const Vec& t) {
  Vec g = m.apply_H(t);
  for (int j = 0; j < m.size(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    g[uj] += m.gradient()[uj];
    g[uj] += m.regularizer().conjugate_prox_coordinate(m.x_subset()[uj] + t[uj] - g[uj]);
  }
  return g;
}

Vec baseline_residual(const SubproblemModel& m) {
  Vec g(m.gradient());
  for (int j = 0; j < m.size(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    g[uj] += m.regularizer().conjugate_prox_coordinate(m.x_subset()[uj] - g[uj]);
  }
  return g;
}

}  // namespace fcd
