#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cnnlstm/error.hpp"
#include "cnnlstm/gradcheck_suites.hpp"
#include "cnnlstm/gradient_check.hpp"
#include "cnnlstm/layers.hpp"
#include "test_util.hpp"

using namespace cnnlstm;
using namespace cnnlstm::nn;

namespace {

// Conv backward with the input window shifted by one step.
void mutated_conv_backward(const Tensor& x, const Tensor& w, const Tensor& d_out, Tensor& d_w,
                           Tensor& d_b) {
  const std::size_t T = x.dim(0), d = x.dim(1), k = w.dim(0), F = w.dim(2);
  for (std::size_t t = 0; t + k <= T; ++t)
    for (std::size_t f = 0; f < F; ++f) {
      d_b[f] += d_out.at(t, f);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < d; ++j) d_w.at(i, j, f) += x.at((t + i + 1) % T, j) * d_out.at(t, f);
    }
}

ComponentCheck mutated_conv_check() {
  return {"conv1d", [] {
            std::mt19937_64 gen(11);
            auto x = std::make_shared<Tensor>(testutil::random_tensor({7, 3}, gen));
            auto ps = std::make_shared<std::vector<Parameter>>();
            ps->emplace_back("conv1d.w", testutil::random_tensor({3, 3, 2}, gen));
            ps->emplace_back("conv1d.b", testutil::random_tensor({2}, gen));
            const Tensor r = testutil::random_tensor({5, 2}, gen);
            auto loss = [x, ps, r](bool grad) {
              auto& p = *ps;
              if (grad) mutated_conv_backward(*x, p[0].value, r, p[0].grad, p[1].grad);
              return testutil::project(conv1d_forward(*x, p[0].value, p[1].value), r);
            };
            std::vector<Parameter*> ptrs = {&(*ps)[0], &(*ps)[1]};
            return gradient_check(ptrs, loss);
          }};
}

}  // namespace

TEST(GradientCheck, RelativeErrorFormula) {
  EXPECT_EQ(relative_error(1.0, 1.0), 0.0);
  EXPECT_NEAR(relative_error(1.0, 3.0), 0.5, 1e-15);
  EXPECT_NEAR(relative_error(0.0, 1e-12), 1e-12 / 1e-8, 1e-15);
}

TEST(GradientCheck, LinearModelIsExact) {
  std::mt19937_64 gen(1);
  const Tensor x = testutil::random_tensor({10}, gen);
  Parameter w("w", testutil::random_tensor({10}, gen));
  std::vector<Parameter*> ps = {&w};
  auto loss = [&](bool grad) {
    if (grad)
      for (std::size_t i = 0; i < 10; ++i) w.grad[i] += x[i];
    return testutil::project(w.value, x);
  };
  const auto report = gradient_check(ps, loss);
  EXPECT_LT(report.max_rel_error(), 1e-9);
  EXPECT_EQ(report.tensors.at(0).checked, 10u);
}

TEST(GradientCheck, SamplesAtLeast200CoordinatesOfLargeTensors) {
  std::mt19937_64 gen(2);
  Parameter w("w", testutil::random_tensor({30, 30}, gen));
  std::vector<Parameter*> ps = {&w};
  auto loss = [&](bool grad) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.value.size(); ++i) {
      s += std::sin(w.value[i]);
      if (grad) w.grad[i] += std::cos(w.value[i]);
    }
    return s;
  };
  const auto report = gradient_check(ps, loss);
  EXPECT_EQ(report.tensors.at(0).checked, 200u);
  EXPECT_LT(report.max_rel_error(), 1e-8);
}

TEST(GradientCheck, NonFiniteLossThrows) {
  Parameter w("w", Tensor({1}, 1.0));
  std::vector<Parameter*> ps = {&w};
  auto loss = [](bool) { return std::numeric_limits<double>::quiet_NaN(); };
  EXPECT_THROW(gradient_check(ps, loss), NonFiniteError);
}

TEST(GradCheckSuites, LayersPresetPasses) {
  const auto result = run_suite(layer_checks());
  EXPECT_TRUE(result.all_pass()) << format_suite(result);
  EXPECT_EQ(result.rows.size(), 7u);
  for (const auto& row : result.rows) EXPECT_LT(row.report.max_rel_error(), 1e-5) << row.component;
}

TEST(GradCheckSuites, FullModelOnTwoTweetBatchPasses) {
  const auto result = run_suite(full_model_checks());
  EXPECT_TRUE(result.all_pass()) << format_suite(result);
  for (const auto& row : result.rows) {
    EXPECT_LT(row.report.max_rel_error(), 1e-5) << row.component;
    // Every tensor of the tiny model is checked exhaustively.
    for (const auto& t : row.report.tensors) EXPECT_GT(t.checked, 0u) << t.name;
  }
}

TEST(GradCheckSuites, DifferentSeedsAlsoPass) {
  for (std::uint64_t seed : {2, 3, 4}) {
    EXPECT_TRUE(run_suite(layer_checks(seed)).all_pass()) << seed;
    EXPECT_TRUE(run_suite(full_model_checks(seed)).all_pass()) << seed;
  }
}

TEST(GradCheckSuites, MutatedConvBackwardFails) {
  const auto result = run_suite({mutated_conv_check()});
  ASSERT_EQ(result.rows.size(), 1u);
  EXPECT_FALSE(result.all_pass());
  EXPECT_GT(result.rows[0].report.max_rel_error(), 1e-2);
  const std::string text = format_suite(result);
  EXPECT_NE(text.find("FAIL conv1d"), std::string::npos) << text;
  EXPECT_NE(text.find("worst=conv1d.w["), std::string::npos) << text;
}

TEST(GradCheckSuites, Presets) {
  EXPECT_TRUE(preset_checks("layers").has_value());
  EXPECT_TRUE(preset_checks("full-model").has_value());
  EXPECT_FALSE(preset_checks("everything").has_value());
}
