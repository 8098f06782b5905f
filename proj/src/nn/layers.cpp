#include "embedkit/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "embedkit/error.hpp"
#include "embedkit/strutil.hpp"

namespace embedkit::nn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y = block of rows [row0, row0+h) of m times x, plus bias rows.
void block_matvec(const Tensor& m, int row0, int h,
                  std::span<const double> x, std::span<double> out) {
  const int d = m.cols();
  for (int r = 0; r < h; ++r) {
    const double* w = m.data.data() +
                      static_cast<size_t>(row0 + r) * static_cast<size_t>(d);
    double acc = 0;
    for (int k = 0; k < d; ++k) acc += w[static_cast<size_t>(k)] * x[static_cast<size_t>(k)];
    out[static_cast<size_t>(r)] += acc;
  }
}

// out += m[rows row0..row0+h)^T * v
void block_matvec_t(const Tensor& m, int row0, int h,
                    std::span<const double> v, std::span<double> out) {
  const int d = m.cols();
  for (int r = 0; r < h; ++r) {
    const double* w = m.data.data() +
                      static_cast<size_t>(row0 + r) * static_cast<size_t>(d);
    double vr = v[static_cast<size_t>(r)];
    for (int k = 0; k < d; ++k) out[static_cast<size_t>(k)] += vr * w[static_cast<size_t>(k)];
  }
}

// dm[rows row0..row0+h)] += dpre (outer) x
void block_outer(Tensor& dm, int row0, int h, std::span<const double> dpre,
                 std::span<const double> x) {
  const int d = dm.cols();
  for (int r = 0; r < h; ++r) {
    double* w = dm.data.data() +
                static_cast<size_t>(row0 + r) * static_cast<size_t>(d);
    double g = dpre[static_cast<size_t>(r)];
    for (int k = 0; k < d; ++k) w[static_cast<size_t>(k)] += g * x[static_cast<size_t>(k)];
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Conv1d

Conv1dLayer::Conv1dLayer(int filters, int kernel, int in_dim)
    : kernel_(kernel),
      filters_({filters, kernel, in_dim}),
      bias_({filters}),
      d_filters_({filters, kernel, in_dim}),
      d_bias_({filters}) {
  if (filters < 1 || kernel < 1 || in_dim < 1)
    fail("conv1d: filters, kernel and in_dim must be >= 1");
}

Seq Conv1dLayer::forward(const Seq& in, bool, Rng*) {
  const int s = in.values.rows();
  const int d = in.values.cols();
  const int k = kernel_;
  const int f_count = filters_.dim(0);
  if (d != filters_.dim(2))
    fail(strformat("conv1d: input dim %d does not match filter dim %d", d,
                   filters_.dim(2)));
  if (s < k)
    fail(strformat("conv1d: sequence length %d shorter than kernel %d", s, k));

  input_cache_ = in.values;
  Seq out;
  out.values = Tensor::matrix(s - k + 1, f_count);
  out.valid = std::clamp(in.valid - k + 1, 0, s - k + 1);
  for (int t = 0; t <= s - k; ++t) {
    for (int f = 0; f < f_count; ++f) {
      double acc = bias_.at(f);
      for (int kk = 0; kk < k; ++kk) {
        const double* w = filters_.data.data() +
                          (static_cast<size_t>(f) * static_cast<size_t>(k) +
                           static_cast<size_t>(kk)) *
                              static_cast<size_t>(d);
        const double* x = in.values.data.data() +
                          static_cast<size_t>(t + kk) * static_cast<size_t>(d);
        for (int dd = 0; dd < d; ++dd)
          acc += w[static_cast<size_t>(dd)] * x[static_cast<size_t>(dd)];
      }
      out.values.at(t, f) = acc;
    }
  }
  return out;
}

Seq Conv1dLayer::backward(const Seq& grad_out) {
  const int s = input_cache_.rows();
  const int d = input_cache_.cols();
  const int k = kernel_;
  const int f_count = filters_.dim(0);

  Seq grad_in;
  grad_in.values = Tensor::matrix(s, d);
  grad_in.valid = s;
  for (int t = 0; t <= s - k; ++t) {
    for (int f = 0; f < f_count; ++f) {
      double g = grad_out.values.at(t, f);
      if (g == 0.0) continue;
      d_bias_.at(f) += g;
      for (int kk = 0; kk < k; ++kk) {
        double* dw = d_filters_.data.data() +
                     (static_cast<size_t>(f) * static_cast<size_t>(k) +
                      static_cast<size_t>(kk)) *
                         static_cast<size_t>(d);
        const double* w = filters_.data.data() +
                          (static_cast<size_t>(f) * static_cast<size_t>(k) +
                           static_cast<size_t>(kk)) *
                              static_cast<size_t>(d);
        const double* x = input_cache_.data.data() +
                          static_cast<size_t>(t + kk) * static_cast<size_t>(d);
        double* dx = grad_in.values.data.data() +
                     static_cast<size_t>(t + kk) * static_cast<size_t>(d);
        for (int dd = 0; dd < d; ++dd) {
          dw[static_cast<size_t>(dd)] += g * x[static_cast<size_t>(dd)];
          dx[static_cast<size_t>(dd)] += g * w[static_cast<size_t>(dd)];
        }
      }
    }
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// Relu

Seq ReluLayer::forward(const Seq& in, bool, Rng*) {
  input_cache_ = in.values;
  Seq out = in;
  for (double& v : out.values.data) v = v > 0 ? v : 0.0;
  return out;
}

Seq ReluLayer::backward(const Seq& grad_out) {
  Seq grad_in = grad_out;
  for (size_t i = 0; i < grad_in.values.data.size(); ++i)
    if (input_cache_.data[i] <= 0) grad_in.values.data[i] = 0.0;
  return grad_in;
}

// ---------------------------------------------------------------------------
// Dropout

DropoutLayer::DropoutLayer(double rate) : rate_(rate) {
  if (rate < 0.0 || rate >= 1.0)
    fail(strformat("dropout: rate %g outside [0, 1)", rate));
}

Seq DropoutLayer::forward(const Seq& in, bool train, Rng* rng) {
  if (!train || rate_ == 0.0) {
    mask_ = Tensor();  // identity
    return in;
  }
  if (rng == nullptr) fail("dropout: training forward needs an RNG");
  mask_ = Tensor(in.values.shape);
  const double scale = 1.0 / (1.0 - rate_);
  Seq out = in;
  for (size_t i = 0; i < out.values.data.size(); ++i) {
    double m = rng->uniform01() < rate_ ? 0.0 : scale;
    mask_.data[i] = m;
    out.values.data[i] *= m;
  }
  return out;
}

Seq DropoutLayer::backward(const Seq& grad_out) {
  if (mask_.data.empty()) return grad_out;
  Seq grad_in = grad_out;
  for (size_t i = 0; i < grad_in.values.data.size(); ++i)
    grad_in.values.data[i] *= mask_.data[i];
  return grad_in;
}

// ---------------------------------------------------------------------------
// Max pooling

MaxPoolLayer::MaxPoolLayer(bool global, int width, int stride)
    : global_(global), width_(width), stride_(stride) {
  if (!global && (width < 1 || stride < 1))
    fail("max_pool: width and stride must be >= 1");
}

Seq MaxPoolLayer::forward(const Seq& in, bool, Rng*) {
  const int t_len = in.values.rows();
  const int f_count = in.values.cols();
  in_shape_ = in.values.shape;
  const int valid = std::clamp(in.valid, 0, t_len);

  Seq out;
  if (global_) {
    out.values = Tensor::vector(f_count);
    out.valid = 1;
    argmax_.assign(static_cast<size_t>(f_count), -1);
    for (int f = 0; f < f_count; ++f) {
      double best = 0.0;
      int best_t = -1;
      for (int t = 0; t < valid; ++t) {
        double v = in.values.at(t, f);
        if (best_t < 0 || v > best) {
          best = v;
          best_t = t;
        }
      }
      out.values.at(f) = best_t >= 0 ? best : 0.0;
      argmax_[static_cast<size_t>(f)] = best_t;
    }
    return out;
  }

  if (width_ > t_len)
    fail(strformat("max_pool: window %d wider than sequence %d", width_, t_len));
  // ceil((T-width)/stride)+1 windows, the last possibly partial; capped so
  // every window holds at least one row (relevant only when stride > width).
  const int windows = std::min((t_len - width_ + stride_ - 1) / stride_ + 1,
                               (t_len - 1) / stride_ + 1);
  out.values = Tensor::matrix(windows, f_count);
  out.valid = valid > 0 ? std::min(windows, (valid - 1) / stride_ + 1) : 0;
  argmax_.assign(static_cast<size_t>(windows) * static_cast<size_t>(f_count), -1);
  for (int w = 0; w < windows; ++w) {
    int start = w * stride_;
    int stop = std::min({start + width_, t_len, valid});
    for (int f = 0; f < f_count; ++f) {
      double best = 0.0;
      int best_t = -1;
      for (int t = start; t < stop; ++t) {
        double v = in.values.at(t, f);
        if (best_t < 0 || v > best) {
          best = v;
          best_t = t;
        }
      }
      out.values.at(w, f) = best_t >= 0 ? best : 0.0;
      argmax_[static_cast<size_t>(w) * static_cast<size_t>(f_count) +
              static_cast<size_t>(f)] = best_t;
    }
  }
  return out;
}

Seq MaxPoolLayer::backward(const Seq& grad_out) {
  Seq grad_in;
  grad_in.values = Tensor(in_shape_);
  grad_in.valid = in_shape_[0];
  const int f_count = in_shape_[1];
  for (size_t cell = 0; cell < argmax_.size(); ++cell) {
    int t = argmax_[cell];
    if (t < 0) continue;
    int f = static_cast<int>(cell % static_cast<size_t>(f_count));
    grad_in.values.at(t, f) += grad_out.values.data[cell];
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// Dense

DenseLayer::DenseLayer(int in_dim, int out_dim)
    : weights_({out_dim, in_dim}),
      bias_({out_dim}),
      d_weights_({out_dim, in_dim}),
      d_bias_({out_dim}) {
  if (in_dim < 1 || out_dim < 1) fail("dense: dims must be >= 1");
}

Seq DenseLayer::forward(const Seq& in, bool, Rng*) {
  if (in.values.size() != static_cast<size_t>(weights_.cols()))
    fail(strformat("dense: input size %zu does not match weight dim %d",
                   in.values.size(), weights_.cols()));
  input_cache_ = in.values;
  const int out_dim = weights_.rows();
  Seq out;
  out.values = Tensor::vector(out_dim);
  out.valid = 1;
  for (int c = 0; c < out_dim; ++c) {
    double acc = bias_.at(c);
    auto w = weights_.row(c);
    for (size_t k = 0; k < w.size(); ++k) acc += w[k] * in.values.data[k];
    out.values.at(c) = acc;
  }
  return out;
}

Seq DenseLayer::backward(const Seq& grad_out) {
  const int out_dim = weights_.rows();
  Seq grad_in;
  grad_in.values = Tensor(input_cache_.shape);
  grad_in.valid = 1;
  for (int c = 0; c < out_dim; ++c) {
    double g = grad_out.values.at(c);
    d_bias_.at(c) += g;
    auto w = weights_.row(c);
    auto dw = d_weights_.row(c);
    for (size_t k = 0; k < w.size(); ++k) {
      dw[k] += g * input_cache_.data[k];
      grad_in.values.data[k] += g * w[k];
    }
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// Recurrent cells

LstmStep lstm_cell(std::span<const double> x, std::span<const double> h_prev,
                   std::span<const double> c_prev, const CellParams& p) {
  const int h = static_cast<int>(h_prev.size());
  if (p.w.rows() != 4 * h || p.u.rows() != 4 * h ||
      p.w.cols() != static_cast<int>(x.size()))
    fail("lstm_cell: parameter shapes do not match inputs");

  std::vector<double> pre(static_cast<size_t>(4 * h), 0.0);
  std::span<double> pre_span(pre);
  for (int gate = 0; gate < 4; ++gate) {
    auto slice = pre_span.subspan(static_cast<size_t>(gate * h), static_cast<size_t>(h));
    block_matvec(p.w, gate * h, h, x, slice);
    block_matvec(p.u, gate * h, h, h_prev, slice);
    for (int r = 0; r < h; ++r) slice[static_cast<size_t>(r)] += p.b.at(gate * h + r);
  }

  LstmStep s;
  s.i.resize(static_cast<size_t>(h));
  s.f.resize(static_cast<size_t>(h));
  s.g.resize(static_cast<size_t>(h));
  s.o.resize(static_cast<size_t>(h));
  s.c.resize(static_cast<size_t>(h));
  s.tanh_c.resize(static_cast<size_t>(h));
  s.h.resize(static_cast<size_t>(h));
  for (int r = 0; r < h; ++r) {
    size_t ri = static_cast<size_t>(r);
    s.i[ri] = sigmoid(pre[ri]);
    s.f[ri] = sigmoid(pre[static_cast<size_t>(h) + ri]);
    s.g[ri] = std::tanh(pre[2 * static_cast<size_t>(h) + ri]);
    s.o[ri] = sigmoid(pre[3 * static_cast<size_t>(h) + ri]);
    s.c[ri] = s.f[ri] * c_prev[ri] + s.i[ri] * s.g[ri];
    s.tanh_c[ri] = std::tanh(s.c[ri]);
    s.h[ri] = s.o[ri] * s.tanh_c[ri];
  }
  return s;
}

GruStep gru_cell(std::span<const double> x, std::span<const double> h_prev,
                 const CellParams& p) {
  const int h = static_cast<int>(h_prev.size());
  if (p.w.rows() != 3 * h || p.u.rows() != 3 * h ||
      p.w.cols() != static_cast<int>(x.size()))
    fail("gru_cell: parameter shapes do not match inputs");

  GruStep s;
  s.z.assign(static_cast<size_t>(h), 0.0);
  s.r.assign(static_cast<size_t>(h), 0.0);
  s.hbar.assign(static_cast<size_t>(h), 0.0);
  s.h.assign(static_cast<size_t>(h), 0.0);

  std::vector<double> pre_z(static_cast<size_t>(h), 0.0);
  std::vector<double> pre_r(static_cast<size_t>(h), 0.0);
  block_matvec(p.w, 0, h, x, pre_z);
  block_matvec(p.u, 0, h, h_prev, pre_z);
  block_matvec(p.w, h, h, x, pre_r);
  block_matvec(p.u, h, h, h_prev, pre_r);
  for (int r = 0; r < h; ++r) {
    size_t ri = static_cast<size_t>(r);
    s.z[ri] = sigmoid(pre_z[ri] + p.b.at(r));
    s.r[ri] = sigmoid(pre_r[ri] + p.b.at(h + r));
  }

  std::vector<double> rh(static_cast<size_t>(h));
  for (int r = 0; r < h; ++r)
    rh[static_cast<size_t>(r)] = s.r[static_cast<size_t>(r)] * h_prev[static_cast<size_t>(r)];
  std::vector<double> pre_h(static_cast<size_t>(h), 0.0);
  block_matvec(p.w, 2 * h, h, x, pre_h);
  block_matvec(p.u, 2 * h, h, rh, pre_h);
  for (int r = 0; r < h; ++r) {
    size_t ri = static_cast<size_t>(r);
    s.hbar[ri] = std::tanh(pre_h[ri] + p.b.at(2 * h + r));
    s.h[ri] = (1.0 - s.z[ri]) * h_prev[ri] + s.z[ri] * s.hbar[ri];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Recurrent layer

namespace {

CellParams make_cell_params(int gates, int in_dim, int hidden) {
  CellParams p;
  p.w = Tensor({gates * hidden, in_dim});
  p.u = Tensor({gates * hidden, hidden});
  p.b = Tensor({gates * hidden});
  p.dw = Tensor({gates * hidden, in_dim});
  p.du = Tensor({gates * hidden, hidden});
  p.db = Tensor({gates * hidden});
  return p;
}

}  // namespace

RecurrentLayer::RecurrentLayer(Cell cell, int in_dim, int hidden,
                               bool bidirectional)
    : cell_(cell), in_dim_(in_dim), hidden_(hidden),
      bidirectional_(bidirectional) {
  const int gates = cell == Cell::kLstm ? 4 : 3;
  fwd_ = make_cell_params(gates, in_dim, hidden);
  if (bidirectional) bwd_ = make_cell_params(gates, in_dim, hidden);
}

std::vector<Tensor*> RecurrentLayer::params() {
  std::vector<Tensor*> out = {&fwd_.w, &fwd_.u, &fwd_.b};
  if (bidirectional_) {
    out.push_back(&bwd_.w);
    out.push_back(&bwd_.u);
    out.push_back(&bwd_.b);
  }
  return out;
}

std::vector<Tensor*> RecurrentLayer::grads() {
  std::vector<Tensor*> out = {&fwd_.dw, &fwd_.du, &fwd_.db};
  if (bidirectional_) {
    out.push_back(&bwd_.dw);
    out.push_back(&bwd_.du);
    out.push_back(&bwd_.db);
  }
  return out;
}

std::string RecurrentLayer::kind() const {
  std::string base = cell_ == Cell::kLstm ? "lstm" : "gru";
  return bidirectional_ ? "bi" + base : base;
}

Seq RecurrentLayer::forward(const Seq& in, bool, Rng*) {
  if (in.values.cols() != in_dim_)
    fail(strformat("%s: input dim %d does not match %d", kind().c_str(),
                   in.values.cols(), in_dim_));
  input_cache_ = in.values;
  valid_cache_ = std::clamp(in.valid, 0, in.values.rows());
  const int len = valid_cache_;
  const int h = hidden_;

  lstm_fwd_cache_.clear();
  lstm_bwd_cache_.clear();
  gru_fwd_cache_.clear();
  gru_bwd_cache_.clear();

  Seq out;
  out.values = Tensor::vector(bidirectional_ ? 2 * h : h);
  out.valid = 1;

  std::vector<double> zeros(static_cast<size_t>(h), 0.0);
  auto run_direction = [&](bool reverse, const CellParams& p, int offset) {
    std::span<const double> h_prev(zeros);
    std::span<const double> c_prev(zeros);
    auto& lstm_cache = reverse ? lstm_bwd_cache_ : lstm_fwd_cache_;
    auto& gru_cache = reverse ? gru_bwd_cache_ : gru_fwd_cache_;
    for (int t = 0; t < len; ++t) {
      int row = reverse ? len - 1 - t : t;
      auto x = input_cache_.row(row);
      if (cell_ == Cell::kLstm) {
        lstm_cache.push_back(lstm_cell(x, h_prev, c_prev, p));
        h_prev = lstm_cache.back().h;
        c_prev = lstm_cache.back().c;
      } else {
        gru_cache.push_back(gru_cell(x, h_prev, p));
        h_prev = gru_cache.back().h;
      }
    }
    for (int r = 0; r < h; ++r)
      out.values.at(offset + r) = len > 0 ? h_prev[static_cast<size_t>(r)] : 0.0;
  };

  run_direction(false, fwd_, 0);
  if (bidirectional_) run_direction(true, bwd_, h);
  return out;
}

Seq RecurrentLayer::backward_direction(const Seq& grad_out, bool reverse,
                                       int offset) {
  const int h = hidden_;
  const int len = valid_cache_;
  CellParams& p = reverse ? bwd_ : fwd_;
  Seq grad_in;
  grad_in.values = Tensor(input_cache_.shape);
  grad_in.valid = input_cache_.rows();
  if (len == 0) return grad_in;

  std::vector<double> zeros(static_cast<size_t>(h), 0.0);
  std::vector<double> dh(static_cast<size_t>(h));
  for (int r = 0; r < h; ++r) dh[static_cast<size_t>(r)] = grad_out.values.at(offset + r);

  if (cell_ == Cell::kLstm) {
    auto& cache = reverse ? lstm_bwd_cache_ : lstm_fwd_cache_;
    std::vector<double> dc(static_cast<size_t>(h), 0.0);
    std::vector<double> dpre(static_cast<size_t>(4 * h));
    for (int t = len - 1; t >= 0; --t) {
      const LstmStep& s = cache[static_cast<size_t>(t)];
      std::span<const double> h_prev =
          t > 0 ? std::span<const double>(cache[static_cast<size_t>(t - 1)].h)
                : std::span<const double>(zeros);
      std::span<const double> c_prev =
          t > 0 ? std::span<const double>(cache[static_cast<size_t>(t - 1)].c)
                : std::span<const double>(zeros);
      int row = reverse ? len - 1 - t : t;
      auto x = input_cache_.row(row);

      for (int r = 0; r < h; ++r) {
        size_t ri = static_cast<size_t>(r);
        double do_ = dh[ri] * s.tanh_c[ri];
        double dct = dc[ri] + dh[ri] * s.o[ri] * (1.0 - s.tanh_c[ri] * s.tanh_c[ri]);
        double di = dct * s.g[ri];
        double df = dct * c_prev[ri];
        double dg = dct * s.i[ri];
        dpre[ri] = di * s.i[ri] * (1.0 - s.i[ri]);
        dpre[static_cast<size_t>(h) + ri] = df * s.f[ri] * (1.0 - s.f[ri]);
        dpre[2 * static_cast<size_t>(h) + ri] = dg * (1.0 - s.g[ri] * s.g[ri]);
        dpre[3 * static_cast<size_t>(h) + ri] = do_ * s.o[ri] * (1.0 - s.o[ri]);
        dc[ri] = dct * s.f[ri];
      }

      std::fill(dh.begin(), dh.end(), 0.0);
      for (int gate = 0; gate < 4; ++gate) {
        std::span<const double> slice(dpre.data() + gate * h, static_cast<size_t>(h));
        block_outer(p.dw, gate * h, h, slice, x);
        block_outer(p.du, gate * h, h, slice, h_prev);
        for (int r = 0; r < h; ++r) p.db.at(gate * h + r) += slice[static_cast<size_t>(r)];
        block_matvec_t(p.w, gate * h, h, slice, grad_in.values.row(row));
        block_matvec_t(p.u, gate * h, h, slice, dh);
      }
    }
  } else {
    auto& cache = reverse ? gru_bwd_cache_ : gru_fwd_cache_;
    std::vector<double> dpre_z(static_cast<size_t>(h));
    std::vector<double> dpre_r(static_cast<size_t>(h));
    std::vector<double> dpre_h(static_cast<size_t>(h));
    std::vector<double> drh(static_cast<size_t>(h));
    std::vector<double> rh(static_cast<size_t>(h));
    std::vector<double> dh_next(static_cast<size_t>(h));
    for (int t = len - 1; t >= 0; --t) {
      const GruStep& s = cache[static_cast<size_t>(t)];
      std::span<const double> h_prev =
          t > 0 ? std::span<const double>(cache[static_cast<size_t>(t - 1)].h)
                : std::span<const double>(zeros);
      int row = reverse ? len - 1 - t : t;
      auto x = input_cache_.row(row);

      for (int r = 0; r < h; ++r) {
        size_t ri = static_cast<size_t>(r);
        double dz = dh[ri] * (s.hbar[ri] - h_prev[ri]);
        double dhbar = dh[ri] * s.z[ri];
        dpre_h[ri] = dhbar * (1.0 - s.hbar[ri] * s.hbar[ri]);
        dpre_z[ri] = dz * s.z[ri] * (1.0 - s.z[ri]);
        rh[ri] = s.r[ri] * h_prev[ri];
        // direct path through (1-z) o h_prev
        dh_next[ri] = dh[ri] * (1.0 - s.z[ri]);
      }
      std::fill(drh.begin(), drh.end(), 0.0);
      block_matvec_t(p.u, 2 * h, h, dpre_h, drh);
      for (int r = 0; r < h; ++r) {
        size_t ri = static_cast<size_t>(r);
        double dr = drh[ri] * h_prev[ri];
        dpre_r[ri] = dr * s.r[ri] * (1.0 - s.r[ri]);
        dh_next[ri] += drh[ri] * s.r[ri];
      }

      block_outer(p.dw, 0, h, dpre_z, x);
      block_outer(p.dw, h, h, dpre_r, x);
      block_outer(p.dw, 2 * h, h, dpre_h, x);
      block_outer(p.du, 0, h, dpre_z, h_prev);
      block_outer(p.du, h, h, dpre_r, h_prev);
      block_outer(p.du, 2 * h, h, dpre_h, rh);
      for (int r = 0; r < h; ++r) {
        p.db.at(r) += dpre_z[static_cast<size_t>(r)];
        p.db.at(h + r) += dpre_r[static_cast<size_t>(r)];
        p.db.at(2 * h + r) += dpre_h[static_cast<size_t>(r)];
      }
      auto dx = grad_in.values.row(row);
      block_matvec_t(p.w, 0, h, dpre_z, dx);
      block_matvec_t(p.w, h, h, dpre_r, dx);
      block_matvec_t(p.w, 2 * h, h, dpre_h, dx);
      block_matvec_t(p.u, 0, h, dpre_z, dh_next);
      block_matvec_t(p.u, h, h, dpre_r, dh_next);
      dh = dh_next;
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
    }
  }
  return grad_in;
}

Seq RecurrentLayer::backward(const Seq& grad_out) {
  Seq grad_in = backward_direction(grad_out, false, 0);
  if (bidirectional_) {
    Seq grad_bwd = backward_direction(grad_out, true, hidden_);
    for (size_t i = 0; i < grad_in.values.data.size(); ++i)
      grad_in.values.data[i] += grad_bwd.values.data[i];
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// Activations

void relu_inplace(std::span<double> v) {
  for (double& x : v) x = x > 0 ? x : 0.0;
}

void sigmoid_inplace(std::span<double> v) {
  for (double& x : v) x = sigmoid(x);
}

void tanh_inplace(std::span<double> v) {
  for (double& x : v) x = std::tanh(x);
}

void softmax_inplace(std::span<double> v) {
  double mx = v[0];
  for (double x : v) mx = std::max(mx, x);
  double total = 0.0;
  for (double& x : v) {
    x = std::exp(x - mx);
    total += x;
  }
  for (double& x : v) x /= total;
}

}  // namespace embedkit::nn
