#pragma once

#include <memory>
#include <string>
#include <vector>

#include "embedkit/corpus/vocab.hpp"
#include "embedkit/nn/layers.hpp"
#include "embedkit/nn/tensor.hpp"
#include "embedkit/rng.hpp"

namespace embedkit::nn {

// Trainable lookup table mapping token ids to vector rows. The padding
// row is pinned at zero: it never receives gradient, so it stays zero
// through training.
class EmbeddingLayer {
 public:
  EmbeddingLayer(int vocab_size, int dim);

  Seq forward(const corpus::EncodedSequence& in);
  void backward(const Seq& grad_out, const corpus::EncodedSequence& in);

  Tensor& weights() { return weights_; }
  const Tensor& weights() const { return weights_; }
  Tensor& grad() { return d_weights_; }
  int dim() const { return weights_.cols(); }
  int vocab_size() const { return weights_.rows(); }
  size_t param_count() const { return weights_.size(); }

 private:
  Tensor weights_, d_weights_;
};

// An ordered pipeline: embedding lookup followed by layers, the last of
// which produces the classifier logits (one for a binary head, n_classes
// otherwise). Forward caches live in the layers, so one instance is
// single-threaded.
class LayerGraph {
 public:
  LayerGraph(int vocab_size, int dim, int n_classes, int max_len,
             uint64_t seed);

  EmbeddingLayer& embedding() { return embedding_; }
  const EmbeddingLayer& embedding() const { return embedding_; }
  void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }
  const std::vector<std::unique_ptr<Layer>>& layers() const { return layers_; }
  Layer& layer(size_t i) { return *layers_[i]; }

  // Runs the pipeline and returns the logits (length 1 or n_classes).
  Tensor forward(const corpus::EncodedSequence& in, bool train);

  // Backpropagates from the logit gradient; parameter gradients
  // accumulate until zero_grads().
  void backward(const Tensor& grad_logits);

  void zero_grads();

  // All parameters/gradients; the embedding is included only when
  // embedding_trainable is set (default true).
  std::vector<Tensor*> params();
  std::vector<Tensor*> grads();

  // Every parameter tensor including a frozen embedding (checkpoint io,
  // snapshots).
  std::vector<Tensor*> all_params();

  size_t param_count() const;

  int n_classes() const { return n_classes_; }
  bool binary_head() const { return n_classes_ == 2; }
  int max_len() const { return max_len_; }

  bool embedding_trainable = true;

  Rng& rng() { return rng_; }

 private:
  EmbeddingLayer embedding_;
  std::vector<std::unique_ptr<Layer>> layers_;
  int n_classes_;
  int max_len_;
  Rng rng_;
  corpus::EncodedSequence last_input_;
};

// Central-finite-difference verification of the whole graph: perturbs
// every parameter by +/-eps and compares against the analytic gradients.
// Call with dropout rates at zero; returns the maximum relative error
// |a - n| / max(|a|, |n|, 1e-8).
double grad_check(LayerGraph& graph, const corpus::EncodedSequence& input,
                  int target, double eps);

}  // namespace embedkit::nn
