#pragma once

#include <memory>
#include <string>
#include <vector>

#include "embedkit/nn/tensor.hpp"
#include "embedkit/rng.hpp"

namespace embedkit::nn {

// Activation flowing between layers: a tensor plus the number of leading
// rows that carry real (non-padding) data. Vector-shaped stages ignore
// `valid`.
struct Seq {
  Tensor values;
  int valid = 0;
};

// A layer owns its parameters, gradient buffers and forward caches.
// forward/backward always come in pairs on the same instance; caches from
// the last forward feed the next backward. Evaluation passes never touch
// parameters or RNG state.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual Seq forward(const Seq& in, bool train, Rng* rng) = 0;

  // grad_out matches the last forward's output shape; returns the
  // gradient with respect to that forward's input. Parameter gradients
  // accumulate.
  virtual Seq backward(const Seq& grad_out) = 0;

  virtual std::vector<Tensor*> params() { return {}; }
  virtual std::vector<Tensor*> grads() { return {}; }
  virtual std::string kind() const = 0;

  size_t param_count() {
    size_t n = 0;
    for (Tensor* t : params()) n += t->size();
    return n;
  }
  void zero_grads() {
    for (Tensor* g : grads()) g->zero();
  }
};

// out[t,f] = bias[f] + sum_{k,d} in[t+k,d] * filters[f,k,d]
class Conv1dLayer : public Layer {
 public:
  Conv1dLayer(int filters, int kernel, int in_dim);
  Seq forward(const Seq& in, bool train, Rng* rng) override;
  Seq backward(const Seq& grad_out) override;
  std::vector<Tensor*> params() override { return {&filters_, &bias_}; }
  std::vector<Tensor*> grads() override { return {&d_filters_, &d_bias_}; }
  std::string kind() const override { return "conv1d"; }
  int kernel() const { return kernel_; }

 private:
  int kernel_;
  Tensor filters_, bias_;
  Tensor d_filters_, d_bias_;
  Tensor input_cache_;
};

class ReluLayer : public Layer {
 public:
  Seq forward(const Seq& in, bool train, Rng* rng) override;
  Seq backward(const Seq& grad_out) override;
  std::string kind() const override { return "relu"; }

 private:
  Tensor input_cache_;
};

// Inverted dropout: evaluation is the identity, training zeroes elements
// with probability `rate` and scales survivors by 1/(1-rate).
class DropoutLayer : public Layer {
 public:
  explicit DropoutLayer(double rate);
  Seq forward(const Seq& in, bool train, Rng* rng) override;
  Seq backward(const Seq& grad_out) override;
  std::string kind() const override { return "dropout"; }
  double rate() const { return rate_; }

 private:
  double rate_;
  Tensor mask_;
};

// Global mode reduces T x F to an F-vector of column maxima over the
// valid rows; local mode emits ceil((T-width)/stride)+1 windowed maxima
// rows (the final window may be partial). Padding rows never win a
// maximum; ties go to the first row. Windows entirely inside the padded
// tail produce zeros.
class MaxPoolLayer : public Layer {
 public:
  static MaxPoolLayer global() { return MaxPoolLayer(true, 0, 0); }
  static MaxPoolLayer local(int width, int stride) {
    return MaxPoolLayer(false, width, stride);
  }
  Seq forward(const Seq& in, bool train, Rng* rng) override;
  Seq backward(const Seq& grad_out) override;
  std::string kind() const override { return global_ ? "max_pool_global" : "max_pool_local"; }

 private:
  MaxPoolLayer(bool global, int width, int stride);
  bool global_;
  int width_, stride_;
  std::vector<int> argmax_;  // flat per output cell; -1 when no valid input
  std::vector<int> in_shape_;
};

// w x + b
class DenseLayer : public Layer {
 public:
  DenseLayer(int in_dim, int out_dim);
  Seq forward(const Seq& in, bool train, Rng* rng) override;
  Seq backward(const Seq& grad_out) override;
  std::vector<Tensor*> params() override { return {&weights_, &bias_}; }
  std::vector<Tensor*> grads() override { return {&d_weights_, &d_bias_}; }
  std::string kind() const override { return "dense"; }

 private:
  Tensor weights_, bias_;
  Tensor d_weights_, d_bias_;
  Tensor input_cache_;
};

// Gate parameters packed per direction: w (G*H x D), u (G*H x H),
// b (G*H), with G=4 blocks [i f g o] for LSTM and G=3 blocks [z r h~]
// for GRU.
struct CellParams {
  Tensor w, u, b;
  Tensor dw, du, db;
  size_t count() const { return w.size() + u.size() + b.size(); }
};

// One LSTM step. Returns the gate activations needed for BPTT.
struct LstmStep {
  std::vector<double> i, f, g, o, c, tanh_c, h;
};
LstmStep lstm_cell(std::span<const double> x, std::span<const double> h_prev,
                   std::span<const double> c_prev, const CellParams& p);

struct GruStep {
  std::vector<double> z, r, hbar, h;
};
GruStep gru_cell(std::span<const double> x, std::span<const double> h_prev,
                 const CellParams& p);

// Recurrent layer over the valid prefix of a sequence; emits the final
// hidden state (both directions concatenated when bidirectional). An
// all-padding input yields the zero state.
class RecurrentLayer : public Layer {
 public:
  enum class Cell { kLstm, kGru };
  RecurrentLayer(Cell cell, int in_dim, int hidden, bool bidirectional);
  Seq forward(const Seq& in, bool train, Rng* rng) override;
  Seq backward(const Seq& grad_out) override;
  std::vector<Tensor*> params() override;
  std::vector<Tensor*> grads() override;
  std::string kind() const override;
  size_t per_direction_param_count() const { return fwd_.count(); }

 private:
  Seq backward_direction(const Seq& grad_out, bool reverse, int offset);

  Cell cell_;
  int in_dim_, hidden_;
  bool bidirectional_;
  CellParams fwd_, bwd_;
  Tensor input_cache_;
  int valid_cache_ = 0;
  std::vector<LstmStep> lstm_fwd_cache_, lstm_bwd_cache_;
  std::vector<GruStep> gru_fwd_cache_, gru_bwd_cache_;
};

// Elementwise activations and the stable softmax.
void relu_inplace(std::span<double> v);
void sigmoid_inplace(std::span<double> v);
void tanh_inplace(std::span<double> v);
void softmax_inplace(std::span<double> v);

}  // namespace embedkit::nn
