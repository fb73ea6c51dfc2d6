#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cnnlstm/tensor.hpp"

namespace cnnlstm::nn {

enum class OptimizerKind { Adam, Sgd };

std::string_view optimizer_name(OptimizerKind kind);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First and second moment estimates, one pair per parameter in the order the
/// parameters are passed to adam_step.
struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
};

/// One bias-corrected Adam update at step t (1-based), applied to params in
/// order; gradients are zeroed afterwards. Throws Error for t == 0.
void adam_step(std::span<Parameter* const> params, AdamState& state, const OptimizerConfig& cfg,
               std::uint64_t t);

/// Plain gradient descent; zeroes gradients afterwards.
void sgd_step(std::span<Parameter* const> params, double learning_rate);

/// Owns optimizer state and the step counter.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig cfg) : cfg_(cfg) {}

  void step(std::span<Parameter* const> params);
  std::uint64_t steps() const noexcept { return t_; }
  const OptimizerConfig& config() const noexcept { return cfg_; }

 private:
  OptimizerConfig cfg_;
  AdamState adam_;
  std::uint64_t t_ = 0;
};

}  // namespace cnnlstm::nn
