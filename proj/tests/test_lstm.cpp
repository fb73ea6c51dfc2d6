#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cnnlstm/error.hpp"
#include "cnnlstm/lstm.hpp"
#include "test_util.hpp"

using namespace cnnlstm::nn;
using testutil::max_rel_error;
using testutil::numeric_grad;
using testutil::project;
using testutil::random_tensor;

namespace {

struct Cell {
  std::array<Tensor, kGates> w, u, b;
  std::array<Tensor, kGates> dw, du, db;

  Cell(std::size_t F, std::size_t H, std::mt19937_64* gen) {
    for (std::size_t q = 0; q < kGates; ++q) {
      w[q] = gen ? random_tensor({F, H}, *gen) : Tensor({F, H});
      u[q] = gen ? random_tensor({H, H}, *gen) : Tensor({H, H});
      b[q] = gen ? random_tensor({H}, *gen) : Tensor({H});
      dw[q] = Tensor({F, H});
      du[q] = Tensor({H, H});
      db[q] = Tensor({H});
    }
  }
  LstmWeights weights() const {
    LstmWeights lw;
    for (std::size_t q = 0; q < kGates; ++q) {
      lw.w[q] = &w[q];
      lw.u[q] = &u[q];
      lw.b[q] = &b[q];
    }
    return lw;
  }
  LstmGrads grads() {
    LstmGrads g;
    for (std::size_t q = 0; q < kGates; ++q) {
      g.w[q] = &dw[q];
      g.u[q] = &du[q];
      g.b[q] = &db[q];
    }
    return g;
  }
};

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

TEST(Lstm, ZeroWeightsGiveZeroStates) {
  std::mt19937_64 gen(1);
  const Cell cell(3, 4, nullptr);
  const auto r = lstm_forward(random_tensor({5, 3}, gen, -5, 5), cell.weights());
  for (double v : r.hidden.data()) EXPECT_EQ(v, 0.0);
  for (double v : r.final.c) EXPECT_EQ(v, 0.0);
}

TEST(Lstm, SingleStepByHand) {
  Cell cell(1, 1, nullptr);
  const double wi = 0.5, wf = -0.3, wo = 0.8, wg = 1.2;
  const double bi = 0.1, bf = 1.0, bo = -0.2, bg = 0.05;
  cell.w[kInput][0] = wi;
  cell.w[kForget][0] = wf;
  cell.w[kOutput][0] = wo;
  cell.w[kCell][0] = wg;
  cell.b[kInput][0] = bi;
  cell.b[kForget][0] = bf;
  cell.b[kOutput][0] = bo;
  cell.b[kCell][0] = bg;
  const double x = 0.7;
  const auto r = lstm_forward(Tensor({1, 1}, {x}), cell.weights());

  const double i = logistic(wi * x + bi);
  const double o = logistic(wo * x + bo);
  const double g = std::tanh(wg * x + bg);
  const double c = i * g;  // c_0 = 0, so the forget gate has no effect
  const double h = o * std::tanh(c);
  EXPECT_NEAR(r.final.c[0], c, 1e-15);
  EXPECT_NEAR(r.final.h[0], h, 1e-15);
  EXPECT_NEAR(r.hidden[0], h, 1e-15);
}

TEST(Lstm, TwoStepsUseRecurrence) {
  Cell cell(1, 1, nullptr);
  for (std::size_t q = 0; q < kGates; ++q) {
    cell.w[q][0] = 0.3 + 0.1 * static_cast<double>(q);
    cell.u[q][0] = -0.4 + 0.2 * static_cast<double>(q);
  }
  const auto r = lstm_forward(Tensor({2, 1}, {1.0, -0.5}), cell.weights());
  double h = 0.0, c = 0.0;
  for (double x : {1.0, -0.5}) {
    const double i = logistic(0.3 * x - 0.4 * h);
    const double f = logistic(0.4 * x - 0.2 * h);
    const double o = logistic(0.5 * x + 0.0 * h);
    const double g = std::tanh(0.6 * x + 0.2 * h);
    c = f * c + i * g;
    h = o * std::tanh(c);
  }
  EXPECT_NEAR(r.final.h[0], h, 1e-15);
  EXPECT_NEAR(r.final.c[0], c, 1e-15);
}

TEST(Lstm, ShapeMismatchThrows) {
  const Cell cell(2, 3, nullptr);
  EXPECT_THROW(lstm_forward(Tensor({4, 3}), cell.weights()), cnnlstm::ShapeError);
}

TEST(Lstm, TinyInstanceFiniteDifferences) {
  std::mt19937_64 gen(2);
  Cell cell(2, 2, &gen);
  Tensor x = random_tensor({3, 2}, gen);
  const Tensor proj = random_tensor({3, 2}, gen);
  auto loss = [&] { return project(lstm_forward(x, cell.weights()).hidden, proj); };
  const auto r = lstm_forward(x, cell.weights());
  const Tensor dx = lstm_backward(r.cache, cell.weights(), proj, cell.grads());
  EXPECT_LT(max_rel_error(dx, numeric_grad(x, loss)), 1e-5);
  for (std::size_t q = 0; q < kGates; ++q) {
    EXPECT_LT(max_rel_error(cell.dw[q], numeric_grad(cell.w[q], loss)), 1e-5) << "w" << q;
    EXPECT_LT(max_rel_error(cell.du[q], numeric_grad(cell.u[q], loss)), 1e-5) << "u" << q;
    EXPECT_LT(max_rel_error(cell.db[q], numeric_grad(cell.b[q], loss)), 1e-5) << "b" << q;
  }
}

TEST(LstmProperty, FiniteDifferencesOverRandomShapes) {
  std::mt19937_64 gen(3);
  for (int n = 0; n < 50; ++n) {
    const std::size_t L = 1 + gen() % 5, F = 1 + gen() % 3, H = 1 + gen() % 3;
    Cell cell(F, H, &gen);
    Tensor x = random_tensor({L, F}, gen);
    // Only the final state feeds the loss, as in the full model.
    Tensor proj({L, H});
    for (std::size_t j = 0; j < H; ++j) proj.at(L - 1, j) = std::uniform_real_distribution<>(-1, 1)(gen);
    auto loss = [&] { return project(lstm_forward(x, cell.weights()).hidden, proj); };
    const auto r = lstm_forward(x, cell.weights());
    const Tensor dx = lstm_backward(r.cache, cell.weights(), proj, cell.grads());
    EXPECT_LT(max_rel_error(dx, numeric_grad(x, loss)), 1e-5);
    for (std::size_t q = 0; q < kGates; ++q) {
      EXPECT_LT(max_rel_error(cell.dw[q], numeric_grad(cell.w[q], loss)), 1e-5);
      EXPECT_LT(max_rel_error(cell.du[q], numeric_grad(cell.u[q], loss)), 1e-5);
      EXPECT_LT(max_rel_error(cell.db[q], numeric_grad(cell.b[q], loss)), 1e-5);
    }
  }
}
