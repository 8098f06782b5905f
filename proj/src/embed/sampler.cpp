#include "embedkit/embed/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "embedkit/error.hpp"

namespace embedkit::embed {

NegativeSampler::NegativeSampler(const corpus::Vocabulary& vocab,
                                 double power) {
  const int32_t n = vocab.size();
  if (n <= 2) fail("NegativeSampler: vocabulary has no regular entries");
  cumulative_.reserve(n - 2);
  double total = 0.0;
  for (int32_t id = 2; id < n; ++id)
    total += std::pow(static_cast<double>(vocab.count(id)), power);
  if (total <= 0.0) fail("NegativeSampler: all counts are zero");
  double acc = 0.0;
  for (int32_t id = 2; id < n; ++id) {
    acc += std::pow(static_cast<double>(vocab.count(id)), power) / total;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;  // absorb rounding drift
}

int32_t NegativeSampler::sample(Rng& rng) const {
  double u = rng.uniform01();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<int32_t>(it - cumulative_.begin()) + 2;
}

double NegativeSampler::probability(int32_t id) const {
  size_t idx = static_cast<size_t>(id) - 2;
  if (id < 2 || idx >= cumulative_.size()) return 0.0;
  return idx == 0 ? cumulative_[0] : cumulative_[idx] - cumulative_[idx - 1];
}

}  // namespace embedkit::embed
