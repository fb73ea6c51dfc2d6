#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cnnlstm/tensor.hpp"

namespace cnnlstm::nn {

struct GradCheckOptions {
  double eps = 1e-4;
  // Tensors with more coordinates than this are randomly subsampled.
  std::size_t min_coords = 200;
  std::uint64_t seed = 0;
};

struct TensorCheck {
  std::string name;
  std::size_t checked = 0;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

struct GradCheckReport {
  std::vector<TensorCheck> tensors;

  double max_rel_error() const;
  /// Tensor holding the largest error, or nullptr when nothing was checked.
  const TensorCheck* worst() const;
};

/// |a - n| / max(1e-8, |a| + |n|)
double relative_error(double analytic, double numeric);

/// Computes the loss. When `with_grad` is true it must also run backward,
/// accumulating into the gradients of the parameters under test. Any
/// randomness (dropout) must be replayed identically on every call.
using LossFunction = std::function<double(bool with_grad)>;

/// Compares analytic gradients against central differences
/// (L(v+eps) - L(v-eps)) / (2 eps), coordinate by coordinate.
/// Throws NonFiniteError if the loss is ever non-finite.
GradCheckReport gradient_check(std::span<Parameter* const> params, const LossFunction& loss,
                               const GradCheckOptions& options = {});

}  // namespace cnnlstm::nn
