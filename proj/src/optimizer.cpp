#include "cnnlstm/optimizer.hpp"

#include <cmath>

#include "cnnlstm/error.hpp"

namespace cnnlstm::nn {

std::string_view optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::Adam ? "adam" : "sgd";
}

void adam_step(std::span<Parameter* const> params, AdamState& state, const OptimizerConfig& cfg,
               std::uint64_t t) {
  if (t == 0) throw Error("adam step index must start at 1");
  if (state.m.empty()) {
    for (const Parameter* p : params) {
      state.m.push_back(Tensor::zeros_like(p->value));
      state.v.push_back(Tensor::zeros_like(p->value));
    }
  }
  if (state.m.size() != params.size()) throw ShapeError("adam state does not match parameters");

  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    auto value = p.value.data();
    auto grad = p.grad.data();
    auto m = state.m[i].data();
    auto v = state.v[i].data();
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double g = grad[j];
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g;
      v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      value[j] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
    p.zero_grad();
  }
}

void sgd_step(std::span<Parameter* const> params, double learning_rate) {
  for (Parameter* p : params) {
    auto value = p->value.data();
    auto grad = p->grad.data();
    for (std::size_t j = 0; j < value.size(); ++j) value[j] -= learning_rate * grad[j];
    p->zero_grad();
  }
}

void Optimizer::step(std::span<Parameter* const> params) {
  ++t_;
  if (cfg_.kind == OptimizerKind::Adam)
    adam_step(params, adam_, cfg_, t_);
  else
    sgd_step(params, cfg_.learning_rate);
}

}  // namespace cnnlstm::nn
