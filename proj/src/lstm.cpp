#include "cnnlstm/lstm.hpp"

#include <cmath>

#include "cnnlstm/error.hpp"
#include "cnnlstm/layers.hpp"

namespace cnnlstm::nn {
namespace {

void check_weights(const LstmWeights& wts) {
  const std::size_t in = wts.input_size();
  const std::size_t units = wts.units();
  for (std::size_t q = 0; q < kGates; ++q) {
    require_shape(*wts.w[q], {in, units}, "lstm input kernel");
    require_shape(*wts.u[q], {units, units}, "lstm recurrent kernel");
    require_shape(*wts.b[q], {units}, "lstm bias");
  }
}

// out[j] += sum_i v[i] * m[i, j] for a row-major [n x units] matrix m.
void add_vec_mat(const double* v, std::size_t n, const Tensor& m, double* out) {
  const std::size_t units = m.dim(1);
  const double* md = m.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = v[i];
    const double* row = md + i * units;
    for (std::size_t j = 0; j < units; ++j) out[j] += vi * row[j];
  }
}

}  // namespace

LstmResult lstm_forward(const Tensor& x, const LstmWeights& weights) {
  check_weights(weights);
  if (x.rank() != 2 || x.dim(1) != weights.input_size())
    throw ShapeError("lstm input: expected [L x " + std::to_string(weights.input_size()) +
                     "], got " + shape_string(x.shape()));
  const std::size_t steps = x.dim(0);
  const std::size_t units = weights.units();
  const std::size_t in = weights.input_size();

  LstmResult r;
  r.cache.x = x;
  r.cache.h = Tensor({steps, units});
  r.cache.c = Tensor({steps, units});
  r.cache.tanh_c = Tensor({steps, units});
  for (auto& g : r.cache.gates) g = Tensor({steps, units});

  std::vector<double> h_prev(units, 0.0);
  std::vector<double> c_prev(units, 0.0);
  std::vector<double> pre(units);
  for (std::size_t t = 0; t < steps; ++t) {
    const double* xt = x.row(t).data();
    for (std::size_t q = 0; q < kGates; ++q) {
      std::copy(weights.b[q]->data().begin(), weights.b[q]->data().end(), pre.begin());
      add_vec_mat(xt, in, *weights.w[q], pre.data());
      add_vec_mat(h_prev.data(), units, *weights.u[q], pre.data());
      double* act = r.cache.gates[q].row(t).data();
      for (std::size_t j = 0; j < units; ++j)
        act[j] = q == kCell ? std::tanh(pre[j]) : sigmoid(pre[j]);
    }
    const double* ig = r.cache.gates[kInput].row(t).data();
    const double* fg = r.cache.gates[kForget].row(t).data();
    const double* og = r.cache.gates[kOutput].row(t).data();
    const double* gg = r.cache.gates[kCell].row(t).data();
    double* ct = r.cache.c.row(t).data();
    double* tct = r.cache.tanh_c.row(t).data();
    double* ht = r.cache.h.row(t).data();
    for (std::size_t j = 0; j < units; ++j) {
      ct[j] = fg[j] * c_prev[j] + ig[j] * gg[j];
      tct[j] = std::tanh(ct[j]);
      ht[j] = og[j] * tct[j];
    }
    std::copy(ht, ht + units, h_prev.begin());
    std::copy(ct, ct + units, c_prev.begin());
  }
  r.hidden = r.cache.h;
  r.final = {std::move(h_prev), std::move(c_prev)};
  return r;
}

Tensor lstm_backward(const LstmCache& cache, const LstmWeights& weights, const Tensor& d_hidden,
                     const LstmGrads& grads) {
  check_weights(weights);
  const std::size_t steps = cache.x.dim(0);
  const std::size_t units = weights.units();
  const std::size_t in = weights.input_size();
  require_shape(d_hidden, {steps, units}, "lstm upstream gradient");
  for (std::size_t q = 0; q < kGates; ++q) {
    require_shape(*grads.w[q], weights.w[q]->shape(), "lstm input kernel gradient");
    require_shape(*grads.u[q], weights.u[q]->shape(), "lstm recurrent kernel gradient");
    require_shape(*grads.b[q], weights.b[q]->shape(), "lstm bias gradient");
  }

  Tensor d_x({steps, in});
  std::vector<double> dh_next(units, 0.0);
  std::vector<double> dc_next(units, 0.0);
  std::vector<double> zeros(units, 0.0);
  std::array<std::vector<double>, kGates> d_pre;
  for (auto& v : d_pre) v.assign(units, 0.0);

  for (std::size_t step = steps; step-- > 0;) {
    const double* ig = cache.gates[kInput].row(step).data();
    const double* fg = cache.gates[kForget].row(step).data();
    const double* og = cache.gates[kOutput].row(step).data();
    const double* gg = cache.gates[kCell].row(step).data();
    const double* tct = cache.tanh_c.row(step).data();
    const double* c_prev = step > 0 ? cache.c.row(step - 1).data() : zeros.data();
    const double* h_prev = step > 0 ? cache.h.row(step - 1).data() : zeros.data();
    const double* xt = cache.x.row(step).data();
    const double* dht = d_hidden.row(step).data();

    for (std::size_t j = 0; j < units; ++j) {
      const double dh = dht[j] + dh_next[j];
      const double dc = dc_next[j] + dh * og[j] * (1.0 - tct[j] * tct[j]);
      d_pre[kOutput][j] = dh * tct[j] * og[j] * (1.0 - og[j]);
      d_pre[kInput][j] = dc * gg[j] * ig[j] * (1.0 - ig[j]);
      d_pre[kForget][j] = dc * c_prev[j] * fg[j] * (1.0 - fg[j]);
      d_pre[kCell][j] = dc * ig[j] * (1.0 - gg[j] * gg[j]);
      dc_next[j] = dc * fg[j];
    }

    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    double* dxt = d_x.row(step).data();
    for (std::size_t q = 0; q < kGates; ++q) {
      const double* da = d_pre[q].data();
      double* db = grads.b[q]->data().data();
      for (std::size_t j = 0; j < units; ++j) db[j] += da[j];

      const double* w = weights.w[q]->data().data();
      double* dw = grads.w[q]->data().data();
      for (std::size_t f = 0; f < in; ++f) {
        const double xv = xt[f];
        double acc = 0.0;
        for (std::size_t j = 0; j < units; ++j) {
          dw[f * units + j] += xv * da[j];
          acc += w[f * units + j] * da[j];
        }
        dxt[f] += acc;
      }

      const double* u = weights.u[q]->data().data();
      double* du = grads.u[q]->data().data();
      for (std::size_t k = 0; k < units; ++k) {
        const double hv = h_prev[k];
        double acc = 0.0;
        for (std::size_t j = 0; j < units; ++j) {
          du[k * units + j] += hv * da[j];
          acc += u[k * units + j] * da[j];
        }
        dh_next[k] += acc;
      }
    }
  }
  return d_x;
}

}  // namespace cnnlstm::nn
