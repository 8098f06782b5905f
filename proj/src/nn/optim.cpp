#include "embedkit/nn/optim.hpp"

#include <cmath>

#include "embedkit/error.hpp"
#include "embedkit/strutil.hpp"

namespace embedkit::nn {

void adam_step(Tensor& param, const Tensor& grad, AdamState& state, int64_t t,
               double lr, double beta1, double beta2, double eps) {
  if (state.m.data.empty()) {
    state.m = Tensor(param.shape);
    state.v = Tensor(param.shape);
  }
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (size_t i = 0; i < param.data.size(); ++i) {
    double g = grad.data[i];
    double m = state.m.data[i] = beta1 * state.m.data[i] + (1.0 - beta1) * g;
    double v = state.v.data[i] = beta2 * state.v.data[i] + (1.0 - beta2) * g * g;
    double update = lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
    if (!std::isfinite(update))
      fail(strformat("adam_step: non-finite update at step %lld",
                     static_cast<long long>(t)));
    param.data[i] -= update;
  }
}

AdamOptimizer::AdamOptimizer(std::vector<Tensor*> params,
                             std::vector<Tensor*> grads, double beta1,
                             double beta2, double eps)
    : params_(std::move(params)),
      grads_(std::move(grads)),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {
  if (params_.size() != grads_.size())
    fail("AdamOptimizer: parameter/gradient count mismatch");
  states_.resize(params_.size());
}

void AdamOptimizer::step(double lr, double grad_scale) {
  ++t_;
  for (size_t p = 0; p < params_.size(); ++p) {
    if (grad_scale != 1.0)
      for (double& g : grads_[p]->data) g *= grad_scale;
    adam_step(*params_[p], *grads_[p], states_[p], t_, lr, beta1_, beta2_,
              eps_);
  }
}

}  // namespace embedkit::nn
