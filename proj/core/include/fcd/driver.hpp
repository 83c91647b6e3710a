#pragma once

#include <cstdint>
#include <string>

#include "fcd/linesearch.hpp"
#include "fcd/sampling.hpp"
#include "fcd/subsolver.hpp"

namespace fcd {

struct FcdConfig {
  int tau = 1;
  std::uint64_t seed = 0;
  CurvatureStrategy curvature = CurvatureStrategy::diagonal();
  InexactnessPolicy inner;
  LineSearchConfig linesearch;
  long max_iters = 1000;
  double tol = 1e-8;  // relative inf-norm stationarity tolerance
};

struct UcdcConfig {
  int version = 1;  // 1: single coordinate; 2: tau-block with summed Lipschitz
  int tau = 1;
  std::uint64_t seed = 0;
  long max_iters = 1000;
  double tol = 1e-8;
};

struct IterationRecord {
  long k = 0;
  double F = 0.0;
  double alpha = 0.0;
  int backtracks = 0;
  int inner_iters = 0;
  double res_norm = 0.0;  // ||g_S(x;0)|| for the sampled subset
  double time_s = 0.0;
  // Extra diagnostics, not part of the CSV schema.
  double t_norm = 0.0;
  double lambda = 0.0;
  double Lambda = 0.0;
  double subset_lipschitz = 0.0;
};

struct RunTrace {
  std::string algorithm;
  int dim = 0;
  int tau = 0;
  std::uint64_t seed = 0;
  long iterations = 0;
  bool converged = false;
  double F_final = 0.0;
  double setup_time_s = 0.0;  // UCDC: timed Lipschitz pass
  double total_time_s = 0.0;
  double linesearch_time_s = 0.0;
  Vec x_final;
  std::vector<IterationRecord> records;
};

// Inf norm of the full stationarity residual g(x; 0).
double full_stationarity_norm(const Evaluator& ev);

RunTrace fcd_run(const CompositeProblem& p, Vec x0, const FcdConfig& cfg);
RunTrace ucdc_run(const CompositeProblem& p, Vec x0, const UcdcConfig& cfg);

}  // namespace fcd
