#pragma once

#include <array>
#include <vector>

#include "cnnlstm/tensor.hpp"

namespace cnnlstm::nn {

/// Gate order used for every per-gate array below.
enum Gate : std::size_t { kInput = 0, kForget = 1, kOutput = 2, kCell = 3 };
inline constexpr std::size_t kGates = 4;

/// Weights of one LSTM layer. w: [F x H] input kernels, u: [H x H] recurrent
/// kernels, b: [H] biases, one of each per gate.
struct LstmWeights {
  std::array<const Tensor*, kGates> w{};
  std::array<const Tensor*, kGates> u{};
  std::array<const Tensor*, kGates> b{};

  std::size_t input_size() const { return w[0]->dim(0); }
  std::size_t units() const { return w[0]->dim(1); }
};

struct LstmGrads {
  std::array<Tensor*, kGates> w{};
  std::array<Tensor*, kGates> u{};
  std::array<Tensor*, kGates> b{};
};

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;
};

/// Everything backward needs. Row t of each [L x H] tensor is step t+1.
struct LstmCache {
  Tensor x;                           // [L x F]
  Tensor h;                           // [L x H]
  Tensor c;                           // [L x H]
  Tensor tanh_c;                      // [L x H]
  std::array<Tensor, kGates> gates;   // post-activation, [L x H]
};

struct LstmResult {
  Tensor hidden;      // all h_t, [L x H]
  LstmState final;    // h_L, c_L
  LstmCache cache;
};

/// Runs the recurrence from h_0 = c_0 = 0:
///   i,f,o = logistic(x W + h U + b), g = tanh(x W + h U + b)
///   c_t = f*c_{t-1} + i*g,  h_t = o*tanh(c_t)
LstmResult lstm_forward(const Tensor& x, const LstmWeights& weights);

/// Full backpropagation through time. d_hidden [L x H] holds dLoss/dh_t for
/// every step (zero rows where the loss does not read h_t). Returns dLoss/dx.
Tensor lstm_backward(const LstmCache& cache, const LstmWeights& weights, const Tensor& d_hidden,
                     const LstmGrads& grads);

}  // namespace cnnlstm::nn
