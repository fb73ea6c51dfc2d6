#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cnnlstm/error.hpp"
#include "cnnlstm/optimizer.hpp"
#include "test_util.hpp"

using namespace cnnlstm;
using namespace cnnlstm::nn;

TEST(Adam, ZeroGradientsLeaveParametersUnchanged) {
  std::mt19937_64 gen(1);
  Parameter p("p", testutil::random_tensor({3, 2}, gen));
  const Tensor before = p.value;
  Optimizer opt({});
  std::vector<Parameter*> ps = {&p};
  for (int i = 0; i < 5; ++i) opt.step(ps);
  EXPECT_EQ(p.value, before);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Parameter p("p", Tensor({1}, 2.0));
  p.grad[0] = 1.0;
  AdamState state;
  std::vector<Parameter*> ps = {&p};
  adam_step(ps, state, {OptimizerKind::Adam, 1e-3, 0.9, 0.999, 1e-8}, 1);
  // m_hat = v_hat = 1, so the step is lr / (1 + eps).
  EXPECT_NEAR(p.value[0], 2.0 - 1e-3 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(p.grad[0], 0.0);
}

TEST(Adam, MatchesClosedFormOverSeveralSteps) {
  const std::vector<double> grads = {0.5, -1.0, 2.0, 0.25};
  Parameter p("p", Tensor({1}, 0.0));
  AdamState state;
  std::vector<Parameter*> ps = {&p};
  const OptimizerConfig cfg{OptimizerKind::Adam, 0.01, 0.9, 0.999, 1e-8};
  double theta = 0.0, m = 0.0, v = 0.0;
  for (std::size_t t = 1; t <= grads.size(); ++t) {
    p.grad[0] = grads[t - 1];
    adam_step(ps, state, cfg, t);
    m = 0.9 * m + 0.1 * grads[t - 1];
    v = 0.999 * v + 0.001 * grads[t - 1] * grads[t - 1];
    const double mh = m / (1 - std::pow(0.9, t)), vh = v / (1 - std::pow(0.999, t));
    theta -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    EXPECT_NEAR(p.value[0], theta, 1e-14);
  }
}

TEST(Adam, StepZeroIsAnError) {
  Parameter p("p", Tensor({1}));
  AdamState state;
  std::vector<Parameter*> ps = {&p};
  EXPECT_THROW(adam_step(ps, state, {}, 0), Error);
}

TEST(Adam, Deterministic) {
  auto run = [] {
    std::mt19937_64 gen(7);
    Parameter p("p", testutil::random_tensor({4}, gen));
    Optimizer opt({});
    std::vector<Parameter*> ps = {&p};
    for (int i = 0; i < 20; ++i) {
      for (auto& g : p.grad.data()) g = std::uniform_real_distribution<>(-1, 1)(gen);
      opt.step(ps);
    }
    return p.value;
  };
  EXPECT_EQ(run(), run());
}

TEST(Sgd, StepsAgainstGradient) {
  Parameter p("p", Tensor({2}, {1.0, -1.0}));
  p.grad = Tensor({2}, {0.5, -2.0});
  std::vector<Parameter*> ps = {&p};
  sgd_step(ps, 0.1);
  EXPECT_NEAR(p.value[0], 0.95, 1e-15);
  EXPECT_NEAR(p.value[1], -0.8, 1e-15);
  EXPECT_EQ(p.grad, Tensor({2}));
}

TEST(Optimizer, Names) {
  EXPECT_EQ(optimizer_name(OptimizerKind::Adam), "adam");
  EXPECT_EQ(optimizer_name(OptimizerKind::Sgd), "sgd");
}
