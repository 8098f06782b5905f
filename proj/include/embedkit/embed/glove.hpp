#pragma once

#include <vector>

#include "embedkit/embed/cooccurrence.hpp"
#include "embedkit/matrix.hpp"
#include "embedkit/rng.hpp"

namespace embedkit::embed {

// Discounting weight for a co-occurrence count: (x/x_max)^alpha, capped
// at 1. Rejects x <= 0 (zero cells are never stored).
double glove_weight(double x, double x_max, double alpha);

// Parameters and AdaGrad accumulators for weighted-least-squares training
// over a co-occurrence map. Main vectors start uniform in
// [-0.5/dim, 0.5/dim]; context vectors and biases start at zero;
// accumulators start at one.
struct GloveState {
  Matrix main;       // w
  Matrix context;    // w~
  std::vector<double> bias_main;
  std::vector<double> bias_context;
  Matrix acc_main;
  Matrix acc_context;
  std::vector<double> acc_bias_main;
  std::vector<double> acc_bias_context;

  GloveState(size_t vocab_size, size_t dim, Rng& rng);
  size_t dim() const { return main.cols(); }
};

// Objective over all stored cells at the current parameters:
//   1/2 sum f(x) (w.w~ + b + b~ - log x)^2
double glove_objective(const CooccurrenceMap& cooc, const GloveState& state,
                       double x_max, double alpha);

// One training pass: evaluates the objective at the incoming parameters,
// then applies AdaGrad updates over all stored cells in shuffled order.
// Returns the pre-update objective.
double glove_epoch(const CooccurrenceMap& cooc, GloveState& state, double lr,
                   double x_max, double alpha, Rng& rng);

}  // namespace embedkit::embed
