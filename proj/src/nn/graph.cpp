#include "embedkit/nn/graph.hpp"

#include <cmath>

#include "embedkit/error.hpp"
#include "embedkit/nn/loss.hpp"
#include "embedkit/strutil.hpp"

namespace embedkit::nn {

EmbeddingLayer::EmbeddingLayer(int vocab_size, int dim)
    : weights_({vocab_size, dim}), d_weights_({vocab_size, dim}) {
  if (vocab_size < 2 || dim < 1) fail("embedding: bad shape");
}

Seq EmbeddingLayer::forward(const corpus::EncodedSequence& in) {
  const int s = static_cast<int>(in.ids.size());
  Seq out;
  out.values = Tensor::matrix(s, dim());
  out.valid = in.true_length;
  for (int t = 0; t < s; ++t) {
    auto src = weights_.row(in.ids[static_cast<size_t>(t)]);
    auto dst = out.values.row(t);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

void EmbeddingLayer::backward(const Seq& grad_out,
                              const corpus::EncodedSequence& in) {
  const int s = static_cast<int>(in.ids.size());
  for (int t = 0; t < s; ++t) {
    int32_t id = in.ids[static_cast<size_t>(t)];
    if (id == corpus::Vocabulary::kPadId) continue;  // pinned at zero
    auto src = grad_out.values.row(t);
    auto dst = d_weights_.row(id);
    for (size_t d = 0; d < src.size(); ++d) dst[d] += src[d];
  }
}

LayerGraph::LayerGraph(int vocab_size, int dim, int n_classes, int max_len,
                       uint64_t seed)
    : embedding_(vocab_size, dim),
      n_classes_(n_classes),
      max_len_(max_len),
      rng_(seed) {
  if (n_classes < 2) fail("graph: n_classes must be >= 2");
  if (max_len < 1) fail("graph: max_len must be >= 1");
}

Tensor LayerGraph::forward(const corpus::EncodedSequence& in, bool train) {
  if (static_cast<int>(in.ids.size()) != max_len_)
    fail(strformat("graph: input length %zu does not match max_len %d",
                   in.ids.size(), max_len_));
  last_input_ = in;
  Seq act = embedding_.forward(in);
  for (auto& layer : layers_)
    act = layer->forward(act, train, train ? &rng_ : nullptr);
  return act.values;
}

void LayerGraph::backward(const Tensor& grad_logits) {
  Seq grad;
  grad.values = grad_logits;
  grad.valid = 1;
  for (size_t i = layers_.size(); i-- > 0;) grad = layers_[i]->backward(grad);
  embedding_.backward(grad, last_input_);
}

void LayerGraph::zero_grads() {
  embedding_.grad().zero();
  for (auto& layer : layers_) layer->zero_grads();
}

std::vector<Tensor*> LayerGraph::params() {
  std::vector<Tensor*> out;
  if (embedding_trainable) out.push_back(&embedding_.weights());
  for (auto& layer : layers_)
    for (Tensor* t : layer->params()) out.push_back(t);
  return out;
}

std::vector<Tensor*> LayerGraph::grads() {
  std::vector<Tensor*> out;
  if (embedding_trainable) out.push_back(&embedding_.grad());
  for (auto& layer : layers_)
    for (Tensor* t : layer->grads()) out.push_back(t);
  return out;
}

std::vector<Tensor*> LayerGraph::all_params() {
  std::vector<Tensor*> out = {&embedding_.weights()};
  for (auto& layer : layers_)
    for (Tensor* t : layer->params()) out.push_back(t);
  return out;
}

size_t LayerGraph::param_count() const {
  size_t n = embedding_.param_count();
  for (const auto& layer : layers_)
    n += const_cast<Layer&>(*layer).param_count();
  return n;
}

double grad_check(LayerGraph& graph, const corpus::EncodedSequence& input,
                  int target, double eps) {
  auto loss_at = [&]() -> double {
    Tensor logits = graph.forward(input, /*train=*/true);
    if (graph.binary_head()) {
      double d_unused;
      return sigmoid_bce_with_grad(logits.at(0), target, d_unused);
    }
    std::vector<double> d_unused(logits.size());
    return softmax_ce_with_grad(logits.data, target, d_unused);
  };

  // Analytic pass.
  graph.zero_grads();
  Tensor logits = graph.forward(input, /*train=*/true);
  Tensor d_logits(logits.shape);
  if (graph.binary_head()) {
    double g;
    sigmoid_bce_with_grad(logits.at(0), target, g);
    d_logits.at(0) = g;
  } else {
    softmax_ce_with_grad(logits.data, target, d_logits.data);
  }
  graph.backward(d_logits);

  std::vector<Tensor*> params = graph.params();
  std::vector<Tensor*> grads = graph.grads();
  std::vector<Tensor> analytic;
  analytic.reserve(grads.size());
  for (Tensor* g : grads) analytic.push_back(*g);

  double max_rel = 0.0;
  for (size_t p = 0; p < params.size(); ++p) {
    Tensor& param = *params[p];
    for (size_t i = 0; i < param.data.size(); ++i) {
      double original = param.data[i];
      param.data[i] = original + eps;
      double lp = loss_at();
      param.data[i] = original - eps;
      double lm = loss_at();
      param.data[i] = original;
      double numeric = (lp - lm) / (2 * eps);
      double a = analytic[p].data[i];
      double rel =
          std::fabs(a - numeric) / std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

}  // namespace embedkit::nn
