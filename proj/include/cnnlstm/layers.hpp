#pragma once

#include <span>
#include <vector>

#include "cnnlstm/rng.hpp"
#include "cnnlstm/tensor.hpp"
#include "cnnlstm/vocabulary.hpp"

// Forward/backward pairs for the feed-forward layers of the classifier.
// Every backward takes dLoss/dOutput, accumulates parameter gradients into
// the supplied grad tensors and returns dLoss/dInput.
namespace cnnlstm::nn {

enum class Mode { Train, Infer };

// --- embedding --------------------------------------------------------------

/// Row t of the result is row ids[t] of `table` [V x d].
Tensor embedding_forward(std::span<const tokenize::TokenId> ids, const Tensor& table);
/// Scatter-adds the rows of d_out [T x d] into d_table by id.
void embedding_backward(std::span<const tokenize::TokenId> ids, const Tensor& d_out,
                        Tensor& d_table);

// --- 1-D convolution --------------------------------------------------------

/// Valid, stride-1 convolution over time.
/// x [T x d], w [k x d x F], b [F] -> [(T-k+1) x F].
Tensor conv1d_forward(const Tensor& x, const Tensor& w, const Tensor& b);
Tensor conv1d_backward(const Tensor& x, const Tensor& w, const Tensor& d_out, Tensor& d_w,
                       Tensor& d_b);

// --- ReLU -------------------------------------------------------------------

Tensor relu_forward(const Tensor& x);
/// Passes d_out where x > 0.
Tensor relu_backward(const Tensor& x, const Tensor& d_out);

// --- max pooling ------------------------------------------------------------

struct MaxPoolResult {
  Tensor out;                        // [floor(L/p) x F]
  std::vector<std::size_t> argmax;   // input row chosen per output cell
};

/// Non-overlapping windows of width `pool`; a trailing partial window is
/// dropped. Ties resolve to the lowest row.
MaxPoolResult maxpool1d_forward(const Tensor& x, std::size_t pool);
Tensor maxpool1d_backward(const Shape& input_shape, const std::vector<std::size_t>& argmax,
                          const Tensor& d_out);

// --- dropout ----------------------------------------------------------------

struct DropoutResult {
  Tensor out;
  Tensor mask;  // 0 or 1/(1-rate) per element; empty in infer mode
};

/// Inverted dropout. Infer mode (or rate 0) is the identity and draws
/// nothing from rng. Throws Error unless 0 <= rate < 1.
DropoutResult dropout_forward(const Tensor& x, double rate, Mode mode, Rng* rng);
Tensor dropout_backward(const Tensor& mask, const Tensor& d_out);

// --- output head ------------------------------------------------------------

double sigmoid(double z);

/// p = sigmoid(h . w + b), h [M], w [M x 1], b [1].
double dense_sigmoid_forward(std::span<const double> h, const Tensor& w, const Tensor& b);
/// Given dLoss/dp, accumulates into d_w, d_b and returns dLoss/dh.
std::vector<double> dense_sigmoid_backward(std::span<const double> h, const Tensor& w, double p,
                                           double d_p, Tensor& d_w, Tensor& d_b);

inline constexpr double kBceEpsilon = 1e-7;

double clamp_probability(double p);
/// Binary cross-entropy on the clamped probability.
double bce_loss(double p, int label);
/// dLoss/dp evaluated at the clamped probability.
double bce_grad(double p, int label);

}  // namespace cnnlstm::nn
