#include "fcd/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace fcd {

TauNiceSampler::TauNiceSampler(int dimension, int tau, std::uint64_t seed)
    : n_(dimension), tau_(tau), rng_(seed) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (tau < 1 || tau > dimension)
    throw std::invalid_argument("tau must lie in [1, N]");
  pool_.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) pool_[static_cast<std::size_t>(i)] = i;
}

CoordinateSubset TauNiceSampler::sample() {
  // Partial Fisher-Yates: tau swaps from the front, then restore.
  for (int i = 0; i < tau_; ++i) {
    const int j = i + static_cast<int>(rng_.bounded(static_cast<std::uint64_t>(n_ - i)));
    std::swap(pool_[static_cast<std::size_t>(i)], pool_[static_cast<std::size_t>(j)]);
  }
  std::vector<int> idx(pool_.begin(), pool_.begin() + tau_);
  std::sort(idx.begin(), idx.end());
  return CoordinateSubset(std::move(idx), n_);
}

double subset_expectation_check(TauNiceSampler& sampler, const Vec& theta,
                                long trials) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  double total = 0.0;
  for (long t = 0; t < trials; ++t) {
    const CoordinateSubset S = sampler.sample();
    for (int i : S) total += theta[static_cast<std::size_t>(i)];
  }
  return total / static_cast<double>(trials);
}

}  // namespace fcd
