#include "cnnlstm/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cnnlstm/error.hpp"
#include "cnnlstm/rng.hpp"

namespace cnnlstm::nn {
namespace {

double finite_loss(const LossFunction& loss, bool with_grad) {
  const double value = loss(with_grad);
  if (!std::isfinite(value)) throw NonFiniteError("gradient check: loss is not finite");
  return value;
}

std::vector<std::size_t> sample_coordinates(std::size_t size, std::size_t wanted, Rng& rng) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (size <= wanted) return idx;
  // Partial Fisher-Yates: the first `wanted` slots become a uniform sample.
  for (std::size_t i = 0; i < wanted; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, size - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(wanted);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

double GradCheckReport::max_rel_error() const {
  double worst_err = 0.0;
  for (const auto& t : tensors) worst_err = std::max(worst_err, t.max_rel_error);
  return worst_err;
}

const TensorCheck* GradCheckReport::worst() const {
  const TensorCheck* w = nullptr;
  for (const auto& t : tensors)
    if (w == nullptr || t.max_rel_error > w->max_rel_error) w = &t;
  return w;
}

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

GradCheckReport gradient_check(std::span<Parameter* const> params, const LossFunction& loss,
                               const GradCheckOptions& options) {
  for (Parameter* p : params) p->zero_grad();
  finite_loss(loss, true);
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  Rng rng(options.seed);
  GradCheckReport report;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    TensorCheck check{p.name};
    for (std::size_t i : sample_coordinates(p.value.size(), options.min_coords, rng)) {
      const double saved = p.value[i];
      p.value[i] = saved + options.eps;
      const double plus = finite_loss(loss, false);
      p.value[i] = saved - options.eps;
      const double minus = finite_loss(loss, false);
      p.value[i] = saved;

      const double numeric = (plus - minus) / (2.0 * options.eps);
      const double err = relative_error(analytic[pi][i], numeric);
      ++check.checked;
      if (err > check.max_rel_error || check.checked == 1) {
        check.max_rel_error = err;
        check.worst_index = i;
        check.analytic = analytic[pi][i];
        check.numeric = numeric;
      }
    }
    report.tensors.push_back(std::move(check));
  }
  return report;
}

}  // namespace cnnlstm::nn
