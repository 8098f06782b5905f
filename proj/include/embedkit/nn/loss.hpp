#pragma once

#include <span>

namespace embedkit::nn {

// Probabilities are clipped to [1e-12, 1 - 1e-12] before taking logs.

// -[y log p + (1-y) log(1-p)] for a sigmoid output p.
double bce_loss(double p, int y);

// -log p[target] for a softmax output vector.
double cce_loss(std::span<const double> probs, int target);

// Fused sigmoid + binary cross entropy on the pre-activation. Writes the
// exact gradient d loss / d logit = p - y.
double sigmoid_bce_with_grad(double logit, int y, double& d_logit);

// Fused softmax + categorical cross entropy on the pre-activations.
// d_logits receives p - onehot(target).
double softmax_ce_with_grad(std::span<const double> logits, int target,
                            std::span<double> d_logits);

}  // namespace embedkit::nn
