#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "fcd/regularizer.hpp"
#include "fcd/sparse_matrix.hpp"
#include "fcd/subset.hpp"

namespace fcd {

enum class LossKind { Quadratic, Logistic };

// Smooth convex loss over a sparse design matrix.
//   Quadratic: f(x) = 1/2 ||Ax - b||^2
//   Logistic:  f(x) = sum_j log(1 + exp(-b_j a_j^T x)), labels b_j in {-1,+1}
struct SmoothLoss {
  LossKind kind;
  SparseDesignMatrix A;
  Vec b;

  static SmoothLoss quadratic(SparseDesignMatrix A, Vec b);
  static SmoothLoss logistic(SparseDesignMatrix A, Vec labels);
};

// F(x) = f(x) + Psi(x). Data is immutable after construction and shareable
// across concurrent runs; mutable per-iterate state lives in Evaluator.
class CompositeProblem {
 public:
  CompositeProblem(SmoothLoss loss, SeparableRegularizer reg,
                   std::optional<double> mu_f = std::nullopt,
                   std::optional<double> mu_F = std::nullopt);

  int dimension() const { return loss_.A.cols(); }
  int samples() const { return loss_.A.rows(); }
  const SmoothLoss& loss() const { return loss_; }
  const SeparableRegularizer& regularizer() const { return reg_; }

  std::optional<double> mu_f() const { return mu_f_; }
  std::optional<double> mu_F() const { return mu_F_; }

  // Coordinate Lipschitz constant L_i, floored at kLipschitzFloor for
  // all-zero columns.
  double coordinate_lipschitz(int i) const { return lipschitz_[static_cast<std::size_t>(i)]; }
  // Subset surrogate L_S = sum_{i in S} L_i.
  double subset_lipschitz(const CoordinateSubset& S) const;
  const Vec& coordinate_lipschitz_all() const { return lipschitz_; }

  static constexpr double kLipschitzFloor = 1e-12;

 private:
  SmoothLoss loss_;
  SeparableRegularizer reg_;
  std::optional<double> mu_f_, mu_F_;
  Vec lipschitz_;
};

// Computes the coordinate Lipschitz constants from scratch (also used by the
// UCDC driver so its trace can include the cost of this pass).
Vec compute_coordinate_lipschitz(const SmoothLoss& loss);

// Scratch evaluations, independent of any cache.
double eval_f(const CompositeProblem& p, const Vec& x);
double eval_F(const CompositeProblem& p, const Vec& x);

// Subset-local data prepared once per accepted direction; all line search
// trials over alpha reuse it.
struct StepContext {
  CoordinateSubset S;
  Vec t;
  Vec xs;            // x^S before the step
  double psi_xs;     // Psi_S(x^S)
  double grad_dot_t; // <grad_S f(x), t>
  std::vector<int> rows;  // sample rows touched by A_S t
  Vec row_vals;           // quadratic: (A_S t)_j ; logistic: b_j a_j^T(U_S t)
  double quad_curv;       // quadratic only: ||A_S t||^2
};

// Owns the iterate and the incremental loss caches (quadratic residual,
// logistic per-sample exponentials). One evaluator per run.
class Evaluator {
 public:
  Evaluator(const CompositeProblem& p, Vec x0);

  const CompositeProblem& problem() const { return *p_; }
  const Vec& x() const { return x_; }

  double objective() const;     // F(x) from caches
  double smooth_value() const;  // f(x)

  Vec partial_gradient(const CoordinateSubset& S) const;
  Vec full_gradient() const;

  // (grad^2_S f(x)) v, matrix free.
  Vec hessian_subset_product(const CoordinateSubset& S, const Vec& v) const;
  // Analytic diagonal entry of grad^2 f(x).
  double hessian_diag(int i) const;

  // grad_dot, when the caller already holds grad_S, saves one column pass.
  StepContext prepare_step(const CoordinateSubset& S, Vec t,
                           std::optional<double> grad_dot = std::nullopt) const;

  // F(x) - F(x + alpha U_S t), cost independent of N.
  double delta_F(const StepContext& ctx, double alpha) const;
  double delta_F(const CoordinateSubset& S, const Vec& t, double alpha) const;

  // ell(x;0) - ell(x; alpha U_S t).
  double loss_delta(const StepContext& ctx, double alpha) const;

  void commit(const StepContext& ctx, double alpha);

  void resync();  // rebuild caches from x
  void set_resync_interval(long interval) { resync_interval_ = interval; }
  long commits_since_sync() const { return commits_since_sync_; }

  // sigma_j = E_j / (1 + E_j), logistic only.
  double sigma(int j) const {
    const double e = expo_[static_cast<std::size_t>(j)];
    return e / (1.0 + e);
  }

 private:
  double smooth_delta(const StepContext& ctx, double alpha) const;

  const CompositeProblem* p_;
  Vec x_;
  Vec residual_;      // quadratic: Ax - b
  Vec expo_;          // logistic: exp(-b_j a_j^T x)
  double f_cached_ = 0.0;
  long commits_since_sync_ = 0;
  long resync_interval_ = 0;  // 0 = never forced by count
  bool underflow_ = false;
};

}  // namespace fcd
