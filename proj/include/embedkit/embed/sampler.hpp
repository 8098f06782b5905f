#pragma once

#include <cstdint>
#include <vector>

#include "embedkit/corpus/vocab.hpp"
#include "embedkit/rng.hpp"

namespace embedkit::embed {

// Draws noise words with probability proportional to count^power over the
// non-special vocabulary entries.
class NegativeSampler {
 public:
  NegativeSampler(const corpus::Vocabulary& vocab, double power = 0.75);

  // Always returns an id >= 2.
  int32_t sample(Rng& rng) const;

  // Target probability of one id; 0 for special ids.
  double probability(int32_t id) const;

 private:
  std::vector<double> cumulative_;  // over ids 2..size-1
};

}  // namespace embedkit::embed
