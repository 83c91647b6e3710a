#pragma once

#include <string>

#include "fcd/driver.hpp"

namespace fcd {

// Conservative global surrogates for the per-subset spectral quantities.
// Using lambda_min, Lambda_max and L_max in place of the exact minimum over
// all size-tau subsets can only shrink chi and vartheta, so every bound
// computed from them remains valid.
struct ComplexityConstants {
  double lambda_min = 1.0;  // lower bound on eig(H^S) over subsets
  double Lambda_max = 1.0;  // upper bound on eig(H^S) over subsets
  double L_max = 1.0;       // upper bound on the subset Lipschitz constant
  double theta = 1e-3;
  double eta_tilde = 0.0;
  double mu_f = 0.0;  // 0 when unknown or not strongly convex
  double mu_F = 0.0;
  double gamma_min = 0.0;  // (1 - eta_tilde) / (1 + 2 Lambda_max)
  double alpha_min = 0.0;  // (1 - theta) lambda_min / (2 L_max)
  double chi = 0.0;
  double vartheta = 0.0;   // set when theta < 1/2
  double delta = 0.0;      // set when mu_f > 0
};

enum class BoundTheorem { CNi, CNii, SCN, CS, SCS };

struct BoundReport {
  BoundTheorem theorem = BoundTheorem::SCN;
  double epsilon = 0.0;
  double rho = 0.0;
  long K = 0;
  int trials = 0;
  int successes = 0;
  double frequency = 0.0;
  double required_frequency = 0.0;
  bool pass = false;
};

double compute_chi(double lambda_min, double Lambda_max, double L_max,
                   double eta_tilde, double theta);
double compute_vartheta(double lambda_min, double Lambda_max, double L_max,
                        double eta_tilde, double theta);
double compute_delta(double mu_f, double mu_F, double Lambda_max);

// Upper bound on the top eigenvalue of the full-space Hessian (the logistic
// Hessian is dominated by 1/4 A^T A pointwise).
double full_hessian_top_eig(const CompositeProblem& p);

// Populate surrogate constants for a given curvature strategy and block size,
// then derive gamma_min, alpha_min, chi, vartheta and delta where defined.
ComplexityConstants conservative_constants(const CompositeProblem& p,
                                           const CurvatureStrategy& strategy,
                                           int tau, double theta, double eta_tilde);

// Theoretical iteration count K for the requested high-probability theorem.
long iteration_bound(BoundTheorem theorem, const ComplexityConstants& c, int N,
                     int tau, double epsilon, double rho, double initial_gap,
                     double levelset_radius);

// R(x0) <= sqrt(2 (F(x0) - F*) / mu_F) for strongly convex F.
double levelset_radius(double initial_gap, double mu_F);
// Sampled over-estimate (factor 1.2) along random rays from x*, for convex
// problems with a compact level set. Throws if a ray never leaves the set.
double levelset_radius_sampled(const CompositeProblem& p, const Vec& x0,
                               const Vec& x_star, std::uint64_t seed,
                               int directions = 64);

// Run `trials` independently seeded solver instances for K iterations each
// and compare the empirical success frequency against 1 - rho minus a
// two-standard-error Monte-Carlo margin. Trials are spread across threads.
BoundReport validate_bound(const CompositeProblem& p, const Vec& x0,
                           const FcdConfig& base, BoundTheorem theorem,
                           double f_star, double epsilon, double rho, long K,
                           int trials, int threads = 0);

std::string theorem_name(BoundTheorem t);

}  // namespace fcd
