#pragma once

#include <cstdint>
#include <vector>

#include "embedkit/nn/tensor.hpp"

namespace embedkit::nn {

// First/second-moment state for one parameter tensor.
struct AdamState {
  Tensor m, v;
};

// One Adam update on a single tensor:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
//   p <- p - lr * m^ / (sqrt(v^) + eps)   (bias-corrected moments)
// t is the 1-based step counter after incrementing.
void adam_step(Tensor& param, const Tensor& grad, AdamState& state, int64_t t,
               double lr, double beta1 = 0.9, double beta2 = 0.999,
               double eps = 1e-8);

// Adam over a fixed set of (parameter, gradient) tensor pairs sharing one
// step counter.
class AdamOptimizer {
 public:
  AdamOptimizer(std::vector<Tensor*> params, std::vector<Tensor*> grads,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  // Applies one update from the currently accumulated gradients, scaled
  // by grad_scale (e.g. 1/batch for mean gradients).
  void step(double lr, double grad_scale = 1.0);

  int64_t steps() const { return t_; }

 private:
  std::vector<Tensor*> params_;
  std::vector<Tensor*> grads_;
  std::vector<AdamState> states_;
  double beta1_, beta2_, eps_;
  int64_t t_ = 0;
};

}  // namespace embedkit::nn
