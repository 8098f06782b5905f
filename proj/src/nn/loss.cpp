#include "embedkit/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "embedkit/error.hpp"
#include "embedkit/nn/layers.hpp"
#include "embedkit/strutil.hpp"

namespace embedkit::nn {

namespace {
constexpr double kClip = 1e-12;

double clip(double p) { return std::clamp(p, kClip, 1.0 - kClip); }
}  // namespace

double bce_loss(double p, int y) {
  if (y != 0 && y != 1) fail(strformat("bce_loss: target %d out of range", y));
  p = clip(p);
  return -(y * std::log(p) + (1 - y) * std::log(1.0 - p));
}

double cce_loss(std::span<const double> probs, int target) {
  if (target < 0 || static_cast<size_t>(target) >= probs.size())
    fail(strformat("cce_loss: target %d out of range", target));
  return -std::log(clip(probs[static_cast<size_t>(target)]));
}

double sigmoid_bce_with_grad(double logit, int y, double& d_logit) {
  if (y != 0 && y != 1)
    fail(strformat("sigmoid_bce_with_grad: target %d out of range", y));
  double p = 1.0 / (1.0 + std::exp(-logit));
  d_logit = p - y;
  return bce_loss(p, y);
}

double softmax_ce_with_grad(std::span<const double> logits, int target,
                            std::span<double> d_logits) {
  if (target < 0 || static_cast<size_t>(target) >= logits.size())
    fail(strformat("softmax_ce_with_grad: target %d out of range", target));
  std::vector<double> probs(logits.begin(), logits.end());
  softmax_inplace(probs);
  for (size_t i = 0; i < probs.size(); ++i) d_logits[i] = probs[i];
  d_logits[static_cast<size_t>(target)] -= 1.0;
  return -std::log(clip(probs[static_cast<size_t>(target)]));
}

}  // namespace embedkit::nn
