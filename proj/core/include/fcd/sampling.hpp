#pragma once

#include <cstdint>

#include "fcd/rng.hpp"
#include "fcd/subset.hpp"

namespace fcd {

// tau-nice sampling: every size-tau subset of [N] equally likely.
// Implemented as a partial Fisher-Yates over a persistent index pool;
// identical seeds replay identical subset sequences.
class TauNiceSampler {
 public:
  TauNiceSampler(int dimension, int tau, std::uint64_t seed);

  int dimension() const { return n_; }
  int tau() const { return tau_; }

  CoordinateSubset sample();

 private:
  int n_, tau_;
  Rng rng_;
  std::vector<int> pool_;
};

// Monte-Carlo estimate of E[sum_{i in S} theta_i]; test-suite support for
// the tau/N expectation identity.
double subset_expectation_check(TauNiceSampler& sampler, const Vec& theta,
                                long trials);

}  // namespace fcd
