#pragma once

#include <deque>
#include <optional>

#include "fcd/problem.hpp"

namespace fcd {

enum class CurvatureKind {
  Identity,
  ScaledIdentity,
  DiagonalHessian,
  PrincipalMinor,
  LimitedMemoryQN
};

// Menu of curvature operators H^S. Every choice yields a symmetric positive
// definite operator with computable eigenvalue bounds.
struct CurvatureStrategy {
  CurvatureKind kind = CurvatureKind::Identity;
  double nu = 0.0;      // ScaledIdentity multiplier; 0 selects nu = L_S
  double ridge = 0.0;   // rho added to DiagonalHessian / PrincipalMinor / LBFGS
  int memory = 10;      // LBFGS pair count

  static CurvatureStrategy identity() { return {CurvatureKind::Identity, 0, 0, 0}; }
  static CurvatureStrategy scaled_identity(double nu = 0.0) {
    return {CurvatureKind::ScaledIdentity, nu, 0, 0};
  }
  static CurvatureStrategy diagonal(double ridge = 0.0) {
    return {CurvatureKind::DiagonalHessian, 0, ridge, 0};
  }
  static CurvatureStrategy principal_minor(double ridge = 1e-6) {
    return {CurvatureKind::PrincipalMinor, 0, ridge, 0};
  }
  static CurvatureStrategy lbfgs(int memory = 10, double ridge = 1e-6) {
    return {CurvatureKind::LimitedMemoryQN, 0, ridge, memory};
  }
};

// Full-space curvature pairs (s, y); restricted to the active subset when a
// model is built. Single-owner per run.
class LbfgsHistory {
 public:
  explicit LbfgsHistory(int memory) : memory_(memory) {}
  void push(Vec s, Vec y);
  int size() const { return static_cast<int>(pairs_.size()); }
  const std::pair<Vec, Vec>& pair(int j) const { return pairs_[static_cast<std::size_t>(j)]; }

 private:
  int memory_;
  std::deque<std::pair<Vec, Vec>> pairs_;
};

// Immutable snapshot of the subset quadratic model
//   Q_S(t) = <grad, t> + 1/2 <H t, t> + Psi_S(x^S + t)
// with spectral bounds 0 < lambda <= eig(H) <= Lambda.
class SubproblemModel {
 public:
  const CoordinateSubset& subset() const { return S_; }
  int size() const { return S_.size(); }
  const Vec& gradient() const { return grad_; }
  const Vec& x_subset() const { return xs_; }
  const SeparableRegularizer& regularizer() const { return *reg_; }

  Vec apply_H(const Vec& v) const;
  Vec column(int j) const;  // H e_j
  bool is_diagonal() const { return !diag_.empty(); }
  const Vec& diag() const { return diag_; }
  bool has_dense() const { return !dense_.empty(); }

  double lambda() const { return lambda_; }
  double Lambda() const { return Lambda_; }
  double subset_lipschitz() const { return subset_lipschitz_; }

 private:
  friend SubproblemModel build_model(const Evaluator&, const CoordinateSubset&,
                                     const CurvatureStrategy&, const LbfgsHistory*,
                                     const Vec*);
  struct LbfgsOperator {
    double gamma = 1.0;
    double ridge = 0.0;
    std::vector<Vec> y;
    std::vector<double> y_dot_s;
    std::vector<Vec> bs;        // B_j s_j
    std::vector<double> s_dot_bs;
    Vec apply(const Vec& v) const;
  };

  CoordinateSubset S_;
  Vec grad_, xs_;
  const SeparableRegularizer* reg_ = nullptr;
  const Evaluator* ev_ = nullptr;  // matrix-free PrincipalMinor fallback
  double ridge_ = 0.0;
  Vec diag_;                       // diagonal operators
  std::vector<double> dense_;      // cached tau x tau operator, row major
  std::optional<LbfgsOperator> lbfgs_;
  double lambda_ = 1.0, Lambda_ = 1.0;
  double subset_lipschitz_ = 0.0;
};

SubproblemModel build_model(const Evaluator& ev, const CoordinateSubset& S,
                            const CurvatureStrategy& strategy,
                            const LbfgsHistory* history = nullptr,
                            const Vec* grad_hint = nullptr);

// Q_S(x;t) - Q_S(x;0), computable from subset quantities only.
double model_value_delta(const SubproblemModel& m, const Vec& t);

// g_S(x;t) = grad + H t + prox_{Psi*}(x^S + t - grad - H t).
Vec stationarity_residual(const SubproblemModel& m, const Vec& t);
// g_S(x;0), with the H application skipped.
Vec baseline_residual(const SubproblemModel& m);

}  // namespace fcd
