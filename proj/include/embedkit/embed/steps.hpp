#pragma once

#include <span>
#include <vector>

#include "embedkit/embed/huffman.hpp"
#include "embedkit/matrix.hpp"

namespace embedkit::embed {

using Span = std::span<double>;

double sigmoid(double x);

// -log(sigmoid(x)), computed stably.
double log_sigmoid_loss(double x);

// One negative-sampling update. The hidden state is the mean of the input
// vectors; the positive and negative rows are output vectors. Returns
//   loss = -log s(u_pos . h) - sum_n log s(-u_neg . h)
// and applies the gradient scaled by lr, with the input gradient split
// evenly across the input vectors. lr = 0 evaluates the loss only.
double ns_step(std::span<Span> inputs, Span positive, std::span<Span> negatives,
               double lr);

// Skip-gram specialization: a single input vector.
double sgns_step(Span center, Span context, std::span<Span> negatives,
                 double lr);

// Bag-of-words specialization: hidden is the mean of the context vectors.
double cbow_step(std::span<Span> context, Span target,
                 std::span<Span> negatives, double lr);

// One hierarchical-softmax update along the target's Huffman path.
// node_vectors holds one row per internal node. Returns the path loss
//   -sum_t log s(+/- node_t . h)
// with the sign picked by the code bit.
double hs_step(std::span<Span> inputs, const HuffmanCode& code,
               Matrix& node_vectors, double lr);

// Single-input convenience wrapper.
double hierarchical_softmax_step(Span hidden, const HuffmanCode& code,
                                 Matrix& node_vectors, double lr);

}  // namespace embedkit::embed
