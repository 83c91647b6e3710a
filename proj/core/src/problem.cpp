#include "fcd/problem.hpp"

#include <algorithm>
#include <cmath>

namespace fcd {

SmoothLoss SmoothLoss::quadratic(SparseDesignMatrix A, Vec b) {
  if (static_cast<int>(b.size()) != A.rows())
    throw std::invalid_argument("rhs length must match row count");
  return SmoothLoss{LossKind::Quadratic, std::move(A), std::move(b)};
}

SmoothLoss SmoothLoss::logistic(SparseDesignMatrix A, Vec labels) {
  if (static_cast<int>(labels.size()) != A.rows())
    throw std::invalid_argument("label length must match row count");
  for (double l : labels)
    if (l != 1.0 && l != -1.0)
      throw std::invalid_argument("logistic labels must be -1 or +1");
  return SmoothLoss{LossKind::Logistic, std::move(A), std::move(labels)};
}

CompositeProblem::CompositeProblem(SmoothLoss loss, SeparableRegularizer reg,
                                   std::optional<double> mu_f,
                                   std::optional<double> mu_F)
    : loss_(std::move(loss)), reg_(std::move(reg)), mu_f_(mu_f), mu_F_(mu_F) {
  if (mu_f_ && mu_F_ && *mu_f_ > *mu_F_ + 1e-15)
    throw std::invalid_argument("mu_f must not exceed mu_F");
  lipschitz_ = compute_coordinate_lipschitz(loss_);
}

double CompositeProblem::subset_lipschitz(const CoordinateSubset& S) const {
  double s = 0.0;
  for (int i : S) s += lipschitz_[static_cast<std::size_t>(i)];
  return s;
}

Vec compute_coordinate_lipschitz(const SmoothLoss& loss) {
  const double scale = loss.kind == LossKind::Logistic ? 0.25 : 1.0;
  Vec out(static_cast<std::size_t>(loss.A.cols()));
  for (int i = 0; i < loss.A.cols(); ++i)
    out[static_cast<std::size_t>(i)] =
        std::max(scale * loss.A.col_sq_norm(i), CompositeProblem::kLipschitzFloor);
  return out;
}

double eval_f(const CompositeProblem& p, const Vec& x) {
  if (static_cast<int>(x.size()) != p.dimension())
    throw std::invalid_argument("iterate dimension mismatch");
  const auto& loss = p.loss();
  const Vec ax = loss.A.multiply(x);
  double f = 0.0;
  if (loss.kind == LossKind::Quadratic) {
    for (int j = 0; j < loss.A.rows(); ++j) {
      const double r = ax[static_cast<std::size_t>(j)] - loss.b[static_cast<std::size_t>(j)];
      f += 0.5 * r * r;
    }
  } else {
    for (int j = 0; j < loss.A.rows(); ++j) {
      const double m = -loss.b[static_cast<std::size_t>(j)] * ax[static_cast<std::size_t>(j)];
      // log(1 + e^m), stable for large |m|
      f += m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    }
  }
  return f;
}

double eval_F(const CompositeProblem& p, const Vec& x) {
  return eval_f(p, x) + p.regularizer().value(x);
}

Evaluator::Evaluator(const CompositeProblem& p, Vec x0) : p_(&p), x_(std::move(x0)) {
  if (static_cast<int>(x_.size()) != p.dimension())
    throw std::invalid_argument("iterate dimension mismatch");
  resync();
}

void Evaluator::resync() {
  const auto& loss = p_->loss();
  const Vec ax = loss.A.multiply(x_);
  if (loss.kind == LossKind::Quadratic) {
    residual_.resize(ax.size());
    for (std::size_t j = 0; j < ax.size(); ++j) residual_[j] = ax[j] - loss.b[j];
  } else {
    expo_.resize(ax.size());
    f_cached_ = 0.0;
    for (std::size_t j = 0; j < ax.size(); ++j) {
      const double m = -loss.b[j] * ax[j];
      expo_[j] = std::exp(m);
      f_cached_ += m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    }
  }
  commits_since_sync_ = 0;
  underflow_ = false;
}

double Evaluator::smooth_value() const {
  if (p_->loss().kind == LossKind::Quadratic) {
    double f = 0.0;
    for (double r : residual_) f += 0.5 * r * r;
    return f;
  }
  return f_cached_;
}

double Evaluator::objective() const {
  return smooth_value() + p_->regularizer().value(x_);
}

Vec Evaluator::partial_gradient(const CoordinateSubset& S) const {
  const auto& loss = p_->loss();
  Vec g(static_cast<std::size_t>(S.size()), 0.0);
  for (int i = 0; i < S.size(); ++i) {
    const auto col = loss.A.col(S[i]);
    double s = 0.0;
    if (loss.kind == LossKind::Quadratic) {
      for (int k = 0; k < col.size(); ++k)
        s += col[k].value * residual_[static_cast<std::size_t>(col[k].index)];
    } else {
      for (int k = 0; k < col.size(); ++k) {
        const int j = col[k].index;
        s -= loss.b[static_cast<std::size_t>(j)] * col[k].value * sigma(j);
      }
    }
    g[static_cast<std::size_t>(i)] = s;
  }
  return g;
}

Vec Evaluator::full_gradient() const {
  const auto& loss = p_->loss();
  Vec g(static_cast<std::size_t>(p_->dimension()), 0.0);
  for (int j = 0; j < loss.A.rows(); ++j) {
    const double w = loss.kind == LossKind::Quadratic
                         ? residual_[static_cast<std::size_t>(j)]
                         : -loss.b[static_cast<std::size_t>(j)] * sigma(j);
    const auto row = loss.A.row(j);
    for (int k = 0; k < row.size(); ++k)
      g[static_cast<std::size_t>(row[k].index)] += w * row[k].value;
  }
  return g;
}

Vec Evaluator::hessian_subset_product(const CoordinateSubset& S, const Vec& v) const {
  if (static_cast<int>(v.size()) != S.size())
    throw std::invalid_argument("direction length must match subset size");
  const auto& loss = p_->loss();
  // w = A_S v on touched rows, then A_S^T (D w).
  Vec w(static_cast<std::size_t>(loss.A.rows()), 0.0);
  for (int i = 0; i < S.size(); ++i) {
    const auto col = loss.A.col(S[i]);
    for (int k = 0; k < col.size(); ++k)
      w[static_cast<std::size_t>(col[k].index)] += col[k].value * v[static_cast<std::size_t>(i)];
  }
  if (loss.kind == LossKind::Logistic) {
    for (int j = 0; j < loss.A.rows(); ++j) {
      const double s = sigma(j);
      w[static_cast<std::size_t>(j)] *= s * (1.0 - s);
    }
  }
  Vec out(static_cast<std::size_t>(S.size()), 0.0);
  for (int i = 0; i < S.size(); ++i) {
    const auto col = loss.A.col(S[i]);
    double s = 0.0;
    for (int k = 0; k < col.size(); ++k)
      s += col[k].value * w[static_cast<std::size_t>(col[k].index)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

double Evaluator::hessian_diag(int i) const {
  const auto& loss = p_->loss();
  const auto col = loss.A.col(i);
  double s = 0.0;
  if (loss.kind == LossKind::Quadratic) {
    for (int k = 0; k < col.size(); ++k) s += col[k].value * col[k].value;
  } else {
    for (int k = 0; k < col.size(); ++k) {
      const double sig = sigma(col[k].index);
      s += col[k].value * col[k].value * sig * (1.0 - sig);
    }
  }
  return s;
}

StepContext Evaluator::prepare_step(const CoordinateSubset& S, Vec t,
                                    std::optional<double> grad_dot) const {
  const auto& loss = p_->loss();
  StepContext ctx;
  ctx.S = S;
  ctx.xs = S.gather(x_);
  ctx.psi_xs = p_->regularizer().value_subset(ctx.xs);
  if (grad_dot) {
    ctx.grad_dot_t = *grad_dot;
  } else {
    const Vec g = partial_gradient(S);
    ctx.grad_dot_t = dot(g, t);
  }
  // Sparse A_S t over the union of rows touched by columns in S.
  std::vector<double> dense(static_cast<std::size_t>(loss.A.rows()), 0.0);
  std::vector<char> touched(static_cast<std::size_t>(loss.A.rows()), 0);
  for (int i = 0; i < S.size(); ++i) {
    const auto col = loss.A.col(S[i]);
    for (int k = 0; k < col.size(); ++k) {
      dense[static_cast<std::size_t>(col[k].index)] += col[k].value * t[static_cast<std::size_t>(i)];
      touched[static_cast<std::size_t>(col[k].index)] = 1;
    }
  }
  ctx.quad_curv = 0.0;
  for (int j = 0; j < loss.A.rows(); ++j) {
    if (!touched[static_cast<std::size_t>(j)]) continue;
    double v = dense[static_cast<std::size_t>(j)];
    if (loss.kind == LossKind::Logistic) v *= loss.b[static_cast<std::size_t>(j)];
    ctx.rows.push_back(j);
    ctx.row_vals.push_back(v);
    if (loss.kind == LossKind::Quadratic) ctx.quad_curv += v * v;
  }
  ctx.t = std::move(t);
  return ctx;
}

// f(x) - f(x + alpha U_S t) from the cached per-sample state.
double Evaluator::smooth_delta(const StepContext& ctx, double alpha) const {
  if (p_->loss().kind == LossKind::Quadratic)
    return -alpha * ctx.grad_dot_t - 0.5 * alpha * alpha * ctx.quad_curv;
  double fd = 0.0;
  for (std::size_t k = 0; k < ctx.rows.size(); ++k) {
    const double e = expo_[static_cast<std::size_t>(ctx.rows[k])];
    // log(1 + E e^{-au}) - log(1 + E), via log1p of the relative change
    const double ratio = e * std::expm1(-alpha * ctx.row_vals[k]) / (1.0 + e);
    fd -= std::log1p(ratio);
  }
  return fd;
}

double Evaluator::delta_F(const StepContext& ctx, double alpha) const {
  const auto& reg = p_->regularizer();
  double psi_new = 0.0;
  for (std::size_t i = 0; i < ctx.xs.size(); ++i)
    psi_new += reg.value_coordinate(ctx.xs[i] + alpha * ctx.t[i]);
  return smooth_delta(ctx, alpha) + ctx.psi_xs - psi_new;
}

double Evaluator::delta_F(const CoordinateSubset& S, const Vec& t, double alpha) const {
  return delta_F(prepare_step(S, t), alpha);
}

double Evaluator::loss_delta(const StepContext& ctx, double alpha) const {
  const auto& reg = p_->regularizer();
  double psi_new = 0.0;
  for (std::size_t i = 0; i < ctx.xs.size(); ++i)
    psi_new += reg.value_coordinate(ctx.xs[i] + alpha * ctx.t[i]);
  return -alpha * ctx.grad_dot_t + ctx.psi_xs - psi_new;
}

void Evaluator::commit(const StepContext& ctx, double alpha) {
  ctx.S.scatter_add(x_, ctx.t, alpha);
  if (p_->loss().kind == LossKind::Quadratic) {
    for (std::size_t k = 0; k < ctx.rows.size(); ++k)
      residual_[static_cast<std::size_t>(ctx.rows[k])] += alpha * ctx.row_vals[k];
  } else {
    f_cached_ -= smooth_delta(ctx, alpha);
    for (std::size_t k = 0; k < ctx.rows.size(); ++k) {
      auto& e = expo_[static_cast<std::size_t>(ctx.rows[k])];
      e *= std::exp(-alpha * ctx.row_vals[k]);
      if (e < 1e-300) underflow_ = true;
    }
  }
  ++commits_since_sync_;
  if (underflow_ || (resync_interval_ > 0 && commits_since_sync_ >= resync_interval_))
    resync();
}

}  // namespace fcd
