#pragma once

// tau-nice sampling: each draw is uniform over all C(n, tau) subsets of
// {0, ..., n-1} of size tau, so P(i in S) = tau/n for every block i.
// Draws are addressable: sample k is a pure function of (seed, k), obtained
// by running a partial Fisher-Yates shuffle on a per-sample substream.

#include <cstdint>
#include <vector>

#include "aldecomp/errors.hpp"
#include "aldecomp/rng.hpp"
#include "aldecomp/types.hpp"

namespace aldecomp {

class TauNiceSampler {
 public:
  TauNiceSampler(Index n, Index tau, std::uint64_t seed);

  Index n() const { return n_; }
  Index tau() const { return tau_; }
  std::uint64_t seed() const { return seed_; }
  double inclusion_probability() const { return static_cast<double>(tau_) / static_cast<double>(n_); }

  // The k-th sample (sorted block indices), independent of other calls.
  std::vector<Index> draw(std::uint64_t k) const;
  // Next sequential sample: draw(0), draw(1), ...
  std::vector<Index> draw();

 private:
  Index n_;
  Index tau_;
  std::uint64_t seed_;
  std::uint64_t next_ = 0;
};

}  // namespace aldecomp
