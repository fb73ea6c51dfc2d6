#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cnnlstm/corpus.hpp"
#include "cnnlstm/layers.hpp"
#include "cnnlstm/lstm.hpp"
#include "cnnlstm/rng.hpp"
#include "cnnlstm/tensor.hpp"
#include "cnnlstm/tokenize.hpp"
#include "cnnlstm/vocabulary.hpp"

namespace cnnlstm::model {

using nn::Mode;
using nn::Parameter;
using nn::Tensor;

struct ModelConfig {
  tokenize::Level level = tokenize::Level::Word;
  std::size_t embed_dim = 100;
  std::vector<std::size_t> filter_sizes = {3};  // one branch per entry
  std::size_t num_filters = 100;
  std::size_t pool_width = 2;
  double dropout_rate = 0.5;
  std::size_t lstm_units = 100;
  std::size_t seq_len = 0;
  std::size_t vocab_size = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Word 3, Ch5gram 10, Char 20.
std::size_t default_filter_size(tokenize::Level level);

/// Defaults for a level; seq_len and vocab_size still need filling in.
ModelConfig default_model_config(tokenize::Level level);

/// Throws ConfigError listing every violated constraint.
void validate(const ModelConfig& cfg);

/// Length of the sequence each branch feeds its LSTM:
/// floor((seq_len - k + 1) / pool_width).
std::size_t lstm_input_length(const ModelConfig& cfg, std::size_t filter_size);

/// Total trainable scalars, from the config alone.
std::size_t parameter_count(const ModelConfig& cfg);

/// One conv -> ReLU -> max-pool -> dropout -> LSTM path.
struct Branch {
  std::size_t filter_size = 0;
  Parameter conv_w;  // [k x d x F]
  Parameter conv_b;  // [F]
  std::array<Parameter, nn::kGates> lstm_w;  // [F x H]
  std::array<Parameter, nn::kGates> lstm_u;  // [H x H]
  std::array<Parameter, nn::kGates> lstm_b;  // [H]

  nn::LstmWeights lstm_weights() const;
};

inline constexpr std::size_t kParamsPerBranch = 2 + 3 * nn::kGates;

struct ModelParams {
  Parameter embedding;  // [V x d]
  std::vector<Branch> branches;
  Parameter head_w;     // [B*H x 1]
  Parameter head_b;     // [1]

  /// Fixed order: embedding, then per branch conv w, conv b, LSTM w, u, b
  /// (gate order i, f, o, g), then head w, head b. Optimizer updates and
  /// checkpoints both follow this order.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  std::size_t scalar_count() const;
  void zero_grad();
};

/// Allocates and initializes every parameter from cfg.seed:
/// embedding U(-0.05, 0.05), conv/dense/LSTM kernels Glorot-uniform,
/// forget-gate bias 1, other biases 0.
ModelParams build_model(const ModelConfig& cfg);

struct BranchCache {
  Tensor conv_out;  // pre-activation
  nn::MaxPoolResult pool;
  nn::Shape pool_input_shape;
  Tensor dropout_mask;
  nn::LstmCache lstm;
};

struct ForwardCache {
  tokenize::IdSequence ids;
  Tensor embedded;
  std::vector<BranchCache> branches;
  std::vector<double> features;  // concatenated final hidden states
  double probability = 0.5;
};

/// Positive-class probability for one encoded tweet. Train mode draws
/// dropout masks from rng (required then); infer mode never touches rng.
/// Fills cache when given, for a subsequent backward_pass.
double forward_pass(const ModelParams& params, const ModelConfig& cfg,
                    std::span<const tokenize::TokenId> ids, Mode mode, Rng* rng,
                    ForwardCache* cache = nullptr);

/// Gradients for one example. dense[i] lines up with parameters()[i]; the
/// embedding slot stays empty and is represented by the gradient with
/// respect to the embedded rows, scattered by id when accumulated.
struct GradientBuffer {
  explicit GradientBuffer(const ModelParams& params);

  std::vector<Tensor> dense;
  Tensor d_embedded;
  tokenize::IdSequence ids;

  void zero();
};

/// Backpropagates dLoss/dp through the cached forward pass into `out`
/// (overwriting it).
void backward_pass(const ModelParams& params, const ModelConfig& cfg, const ForwardCache& cache,
                   double d_probability, GradientBuffer& out);

/// params.grad += buffer, embedding rows scattered by id.
void accumulate(const GradientBuffer& buffer, ModelParams& params);

/// 1 if p >= 0.5, else 0.
corpus::Label predict_label(double p);

}  // namespace cnnlstm::model
