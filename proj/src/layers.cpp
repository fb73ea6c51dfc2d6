#include "cnnlstm/layers.hpp"

#include <algorithm>
#include <cmath>

#include "cnnlstm/error.hpp"

namespace cnnlstm::nn {

Tensor embedding_forward(std::span<const tokenize::TokenId> ids, const Tensor& table) {
  if (table.rank() != 2) throw ShapeError("embedding table must be rank 2");
  const std::size_t vocab = table.dim(0);
  const std::size_t dim = table.dim(1);
  Tensor out({ids.size(), dim});
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] < 0 || static_cast<std::size_t>(ids[t]) >= vocab)
      throw ShapeError("token id " + std::to_string(ids[t]) + " out of range for vocabulary of " +
                       std::to_string(vocab));
    const auto src = table.row(static_cast<std::size_t>(ids[t]));
    std::copy(src.begin(), src.end(), out.row(t).begin());
  }
  return out;
}

void embedding_backward(std::span<const tokenize::TokenId> ids, const Tensor& d_out,
                        Tensor& d_table) {
  require_shape(d_out, {ids.size(), d_table.dim(1)}, "embedding upstream gradient");
  for (std::size_t t = 0; t < ids.size(); ++t) {
    auto dst = d_table.row(static_cast<std::size_t>(ids[t]));
    const auto src = d_out.row(t);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
  }
}

// The k rows starting at t are contiguous, so a conv window is a single
// (k*d)-vector and w is a (k*d) x F matrix.
Tensor conv1d_forward(const Tensor& x, const Tensor& w, const Tensor& b) {
  if (x.rank() != 2 || w.rank() != 3) throw ShapeError("conv1d expects x [T x d], w [k x d x F]");
  const std::size_t steps = x.dim(0);
  const std::size_t dim = x.dim(1);
  const std::size_t k = w.dim(0);
  const std::size_t filters = w.dim(2);
  if (w.dim(1) != dim)
    throw ShapeError("conv1d: kernel depth " + std::to_string(w.dim(1)) + " != input width " +
                     std::to_string(dim));
  require_shape(b, {filters}, "conv1d bias");
  if (steps < k)
    throw ShapeError("sequence shorter than filter (" + std::to_string(steps) + " < " +
                     std::to_string(k) + ")");

  const std::size_t out_len = steps - k + 1;
  const std::size_t window = k * dim;
  Tensor out({out_len, filters});
  const double* xd = x.data().data();
  const double* wd = w.data().data();
  for (std::size_t t = 0; t < out_len; ++t) {
    double* o = out.row(t).data();
    std::copy(b.data().begin(), b.data().end(), o);
    const double* xw = xd + t * dim;
    for (std::size_t r = 0; r < window; ++r) {
      const double xv = xw[r];
      const double* wr = wd + r * filters;
      for (std::size_t f = 0; f < filters; ++f) o[f] += xv * wr[f];
    }
  }
  return out;
}

Tensor conv1d_backward(const Tensor& x, const Tensor& w, const Tensor& d_out, Tensor& d_w,
                       Tensor& d_b) {
  const std::size_t dim = x.dim(1);
  const std::size_t k = w.dim(0);
  const std::size_t filters = w.dim(2);
  const std::size_t out_len = x.dim(0) - k + 1;
  require_shape(d_out, {out_len, filters}, "conv1d upstream gradient");
  require_shape(d_w, w.shape(), "conv1d kernel gradient");
  require_shape(d_b, {filters}, "conv1d bias gradient");

  const std::size_t window = k * dim;
  Tensor d_x = Tensor::zeros_like(x);
  const double* xd = x.data().data();
  const double* wd = w.data().data();
  double* dwd = d_w.data().data();
  double* dxd = d_x.data().data();
  for (std::size_t t = 0; t < out_len; ++t) {
    const double* g = d_out.row(t).data();
    for (std::size_t f = 0; f < filters; ++f) d_b[f] += g[f];
    const double* xw = xd + t * dim;
    double* dxw = dxd + t * dim;
    for (std::size_t r = 0; r < window; ++r) {
      const double* wr = wd + r * filters;
      double* dwr = dwd + r * filters;
      const double xv = xw[r];
      double acc = 0.0;
      for (std::size_t f = 0; f < filters; ++f) {
        dwr[f] += xv * g[f];
        acc += wr[f] * g[f];
      }
      dxw[r] += acc;
    }
  }
  return d_x;
}

Tensor relu_forward(const Tensor& x) {
  Tensor out = x;
  for (auto& v : out.data()) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& d_out) {
  require_shape(d_out, x.shape(), "relu upstream gradient");
  Tensor d_x = d_out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0)) d_x[i] = 0.0;
  return d_x;
}

MaxPoolResult maxpool1d_forward(const Tensor& x, std::size_t pool) {
  if (pool == 0) throw Error("pool width must be at least 1");
  if (x.rank() != 2) throw ShapeError("maxpool1d expects [L x F]");
  const std::size_t len = x.dim(0);
  const std::size_t features = x.dim(1);
  if (len < pool)
    throw ShapeError("maxpool1d: length " + std::to_string(len) + " shorter than pool width " +
                     std::to_string(pool));
  const std::size_t out_len = len / pool;
  MaxPoolResult r{Tensor({out_len, features}), std::vector<std::size_t>(out_len * features)};
  for (std::size_t w = 0; w < out_len; ++w) {
    for (std::size_t f = 0; f < features; ++f) {
      std::size_t best = w * pool;
      for (std::size_t i = w * pool + 1; i < (w + 1) * pool; ++i)
        if (x.at(i, f) > x.at(best, f)) best = i;
      r.out.at(w, f) = x.at(best, f);
      r.argmax[w * features + f] = best;
    }
  }
  return r;
}

Tensor maxpool1d_backward(const Shape& input_shape, const std::vector<std::size_t>& argmax,
                          const Tensor& d_out) {
  const std::size_t features = input_shape.at(1);
  if (d_out.size() != argmax.size()) throw ShapeError("maxpool1d: gradient/argmax size mismatch");
  Tensor d_x(input_shape);
  for (std::size_t cell = 0; cell < argmax.size(); ++cell)
    d_x.at(argmax[cell], cell % features) += d_out[cell];
  return d_x;
}

DropoutResult dropout_forward(const Tensor& x, double rate, Mode mode, Rng* rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error("dropout rate must be in [0, 1)");
  if (mode == Mode::Infer || rate == 0.0) return {x, Tensor()};
  if (rng == nullptr) throw Error("train-mode dropout needs an rng");
  const double keep_scale = 1.0 / (1.0 - rate);
  DropoutResult r{x, Tensor::zeros_like(x)};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = uniform01(*rng) < rate ? 0.0 : keep_scale;
    r.mask[i] = m;
    r.out[i] *= m;
  }
  return r;
}

Tensor dropout_backward(const Tensor& mask, const Tensor& d_out) {
  if (mask.empty()) return d_out;
  require_shape(d_out, mask.shape(), "dropout upstream gradient");
  Tensor d_x = d_out;
  for (std::size_t i = 0; i < d_x.size(); ++i) d_x[i] *= mask[i];
  return d_x;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double dense_sigmoid_forward(std::span<const double> h, const Tensor& w, const Tensor& b) {
  require_shape(w, {h.size(), 1}, "dense kernel");
  require_shape(b, {1}, "dense bias");
  double z = b[0];
  for (std::size_t i = 0; i < h.size(); ++i) z += h[i] * w[i];
  return sigmoid(z);
}

std::vector<double> dense_sigmoid_backward(std::span<const double> h, const Tensor& w, double p,
                                           double d_p, Tensor& d_w, Tensor& d_b) {
  const double d_z = d_p * p * (1.0 - p);
  d_b[0] += d_z;
  std::vector<double> d_h(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    d_w[i] += h[i] * d_z;
    d_h[i] = w[i] * d_z;
  }
  return d_h;
}

double clamp_probability(double p) { return std::clamp(p, kBceEpsilon, 1.0 - kBceEpsilon); }

double bce_loss(double p, int label) {
  const double q = clamp_probability(p);
  return label == 1 ? -std::log(q) : -std::log(1.0 - q);
}

double bce_grad(double p, int label) {
  const double q = clamp_probability(p);
  return (q - label) / (q * (1.0 - q));
}

}  // namespace cnnlstm::nn
