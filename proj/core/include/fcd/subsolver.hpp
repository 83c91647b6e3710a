#pragma once

#include "fcd/model.hpp"

namespace fcd {

enum class InnerMethod { ClosedForm, ConjugateGradient, ProximalSweep };

struct InexactnessPolicy {
  InnerMethod method = InnerMethod::ClosedForm;
  double eta = 0.9;   // residual contraction factor, in [0, 1)
  int max_inner = 200;
  bool strict = false;  // throw instead of returning an uncertified direction
};

// Outcome of the inexactness test on a candidate direction t:
//   (a) Q_S(x;t) - Q_S(x;0) < 0
//   (b) dist(g_S(x;t), projection set)^2 + ||g_S(x;t)||^2 <= (eta ||g_S(x;0)||)^2
struct DirectionCertificate {
  bool model_decrease = false;
  bool residual_bound = false;
  double q_delta = 0.0;
  double residual_norm = 0.0;   // ||g_S(x;t)||
  double baseline_norm = 0.0;   // ||g_S(x;0)||
  double projection_gap_sq = 0.0;
  int inner_iters = 0;
  bool ok() const { return model_decrease && residual_bound; }
};

struct SubsolverResult {
  Vec t;
  DirectionCertificate cert;
};

DirectionCertificate check_certificates(const SubproblemModel& m, const Vec& t,
                                        double eta, int inner_iters = 0);

// Exact minimizer when H is diagonal: per-coordinate prox step.
SubsolverResult solve_closed_form_diagonal(const SubproblemModel& m, double eta);

// Conjugate gradients on H t = -grad; smooth problems only (Psi = 0).
SubsolverResult solve_cg_smooth(const SubproblemModel& m, double eta, int max_inner);

// Cyclic coordinate prox sweeps on the subset model; handles any Psi.
SubsolverResult solve_proximal_inner(const SubproblemModel& m, double eta, int max_inner);

SubsolverResult solve_subproblem(const SubproblemModel& m, const InexactnessPolicy& policy);

}  // namespace fcd
