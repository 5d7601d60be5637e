#include "aldecomp/sampling.hpp"

#include <algorithm>
#include <numeric>

namespace aldecomp {

TauNiceSampler::TauNiceSampler(Index n, Index tau, std::uint64_t seed)
    : n_(n), tau_(tau), seed_(seed) {
  if (n <= 0) throw InvalidArgument("sampler: n must be positive");
  if (tau < 1 || tau > n) throw InvalidArgument("sampler: tau must satisfy 1 <= tau <= n");
}

std::vector<Index> TauNiceSampler::draw(std::uint64_t k) const {
  // Substream for sample k; rejection counts in other samples cannot shift it.
  CounterRng rng(CounterRng::mix(seed_, k));
  std::vector<Index> pool(static_cast<std::size_t>(n_));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index t = 0; t < tau_; ++t) {
    Index j = t + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n_ - t)));
    std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> sample(pool.begin(), pool.begin() + tau_);
  std::sort(sample.begin(), sample.end());
  return sample;
}

std::vector<Index> TauNiceSampler::draw() { return draw(next_++); }

}  // namespace aldecomp
