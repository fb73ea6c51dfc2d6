#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cnnlstm/corpus.hpp"
#include "cnnlstm/model.hpp"
#include "cnnlstm/optimizer.hpp"
#include "cnnlstm/vocabulary.hpp"

namespace cnnlstm::train {

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  nn::OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  bool shuffle_each_epoch = true;
  // Worker threads for per-example gradients and evaluation; 0 = hardware
  // concurrency. Results do not depend on this value.
  std::size_t threads = 0;
};

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  void record(corpus::Label predicted, corpus::Label gold);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// (tp + tn) / (tp + tn + fp + fn). Throws Error on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
};

/// Infer-mode predictions tallied against gold labels.
ConfusionMatrix evaluate(const model::ModelParams& params, const model::ModelConfig& cfg,
                         std::span<const tokenize::EncodedTweet> data, std::size_t threads = 1);

/// One pass over `data`: epoch-seeded shuffle, minibatches of batch_size
/// (last one may be short), mean BCE per batch, one optimizer step per batch.
/// Returns the mean per-example loss. `epoch` is 1-based and seeds both the
/// shuffle and the dropout streams. Throws NonFiniteError naming the batch.
double train_epoch(model::ModelParams& params, const model::ModelConfig& cfg,
                   std::span<const tokenize::EncodedTweet> data, nn::Optimizer& optimizer,
                   const TrainConfig& tc, std::size_t epoch);

struct TokenizationOptions {
  // Overrides the computed average word length for Ch5gram.
  std::optional<std::size_t> gram_len;
  // Compute the average word length on the training split only.
  bool gram_from_train_only = false;
};

struct ExperimentConfig {
  model::ModelConfig model;  // seq_len and vocab_size are filled by run_training
  TrainConfig train;
  corpus::SplitSpec split;
  TokenizationOptions tokenization;
};

struct TrainingResult {
  std::vector<EpochMetrics> epochs;
  double best_test_acc = 0.0;
  std::size_t best_epoch = 0;
  double final_test_acc = 0.0;
  ConfusionMatrix final_confusion;

  model::ModelConfig model_config;  // resolved
  model::ModelParams params;        // after the last epoch
  tokenize::Vocabulary vocab;
  std::size_t gram_len = 0;
  corpus::Split split;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// split -> vocabulary (train only) -> encode (seq_len over the full dataset)
/// -> build -> epochs of train_epoch + evaluate.
TrainingResult run_training(const corpus::Dataset& dataset, const ExperimentConfig& cfg,
                            const EpochCallback& on_epoch = {});

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Each index is handled exactly once.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace cnnlstm::train
