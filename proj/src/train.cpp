#include "cnnlstm/train.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "cnnlstm/error.hpp"
#include "cnnlstm/layers.hpp"
#include "cnnlstm/rng.hpp"

namespace cnnlstm::train {
namespace {

std::uint64_t shuffle_seed(std::uint64_t seed, std::size_t epoch) { return mix_seed(seed, 2 * epoch); }

std::uint64_t dropout_seed(std::uint64_t seed, std::size_t epoch, std::size_t position) {
  return mix_seed(mix_seed(seed, 2 * epoch + 1), position);
}

int label_value(corpus::Label l) { return static_cast<int>(l); }

}  // namespace

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();  // joins
  if (failure) std::rethrow_exception(failure);
}

void ConfusionMatrix::record(corpus::Label predicted, corpus::Label gold) {
  const bool pos_pred = predicted == corpus::Label::Positive;
  const bool pos_gold = gold == corpus::Label::Positive;
  if (pos_pred && pos_gold)
    ++tp;
  else if (!pos_pred && !pos_gold)
    ++tn;
  else if (pos_pred)
    ++fp;
  else
    ++fn;
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

ConfusionMatrix evaluate(const model::ModelParams& params, const model::ModelConfig& cfg,
                         std::span<const tokenize::EncodedTweet> data, std::size_t threads) {
  if (data.empty()) throw Error("cannot evaluate on an empty set");
  std::vector<double> probs(data.size());
  parallel_for(data.size(), threads, [&](std::size_t i) {
    probs[i] = model::forward_pass(params, cfg, data[i].ids, nn::Mode::Infer, nullptr);
  });
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < data.size(); ++i) cm.record(model::predict_label(probs[i]), data[i].label);
  return cm;
}

double train_epoch(model::ModelParams& params, const model::ModelConfig& cfg,
                   std::span<const tokenize::EncodedTweet> data, nn::Optimizer& optimizer,
                   const TrainConfig& tc, std::size_t epoch) {
  if (data.empty()) throw Error("cannot train on an empty set");
  if (tc.batch_size == 0) throw Error("batch_size must be at least 1");

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (tc.shuffle_each_epoch) {
    Rng rng(shuffle_seed(tc.seed, epoch));
    shuffle(std::span<std::size_t>(order), rng);
  }

  const std::size_t slots = std::min(tc.batch_size, data.size());
  std::vector<model::GradientBuffer> buffers(slots, model::GradientBuffer(params));
  std::vector<double> losses(slots);
  auto param_list = params.parameters();

  double total_loss = 0.0;
  const std::size_t batches = (data.size() + tc.batch_size - 1) / tc.batch_size;
  for (std::size_t batch = 0; batch < batches; ++batch) {
    const std::size_t begin = batch * tc.batch_size;
    const std::size_t count = std::min(tc.batch_size, data.size() - begin);
    const double scale = 1.0 / static_cast<double>(count);

    parallel_for(count, tc.threads, [&](std::size_t slot) {
      const auto& ex = data[order[begin + slot]];
      Rng rng(dropout_seed(tc.seed, epoch, begin + slot));
      model::ForwardCache cache;
      const double p = model::forward_pass(params, cfg, ex.ids, nn::Mode::Train, &rng, &cache);
      const int y = label_value(ex.label);
      losses[slot] = nn::bce_loss(p, y);
      model::backward_pass(params, cfg, cache, nn::bce_grad(p, y) * scale, buffers[slot]);
    });

    // Reduce in example order so the sum does not depend on scheduling.
    double batch_loss = 0.0;
    for (std::size_t slot = 0; slot < count; ++slot) {
      batch_loss += losses[slot];
      model::accumulate(buffers[slot], params);
    }
    if (!std::isfinite(batch_loss))
      throw NonFiniteError("non-finite loss in batch " + std::to_string(batch) + " of epoch " +
                           std::to_string(epoch));
    total_loss += batch_loss;
    optimizer.step(param_list);
  }
  return total_loss / static_cast<double>(data.size());
}

TrainingResult run_training(const corpus::Dataset& dataset, const ExperimentConfig& cfg,
                            const EpochCallback& on_epoch) {
  if (cfg.train.epochs == 0) throw Error("epochs must be at least 1");
  const tokenize::Level level = cfg.model.level;
  corpus::Split split = corpus::split_dataset(dataset, cfg.split);

  const std::size_t gram_len =
      cfg.tokenization.gram_len.value_or(tokenize::avg_word_length(
          cfg.tokenization.gram_from_train_only ? split.train : dataset));
  tokenize::Vocabulary vocab = tokenize::build_vocab(split.train, level, gram_len);

  model::ModelConfig mcfg = cfg.model;
  mcfg.seq_len = tokenize::max_token_count(dataset, level, gram_len);
  mcfg.vocab_size = vocab.size();
  model::validate(mcfg);

  const auto train_set = tokenize::encode_dataset(split.train, vocab, mcfg.seq_len);
  const auto test_set = tokenize::encode_dataset(split.test, vocab, mcfg.seq_len);

  TrainingResult result{.model_config = mcfg,
                        .params = model::build_model(mcfg),
                        .vocab = std::move(vocab),
                        .gram_len = gram_len,
                        .split = std::move(split)};
  nn::Optimizer optimizer(cfg.train.optimizer);
  for (std::size_t epoch = 1; epoch <= cfg.train.epochs; ++epoch) {
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = train_epoch(result.params, mcfg, train_set, optimizer, cfg.train, epoch);
    m.train_acc = accuracy(evaluate(result.params, mcfg, train_set, cfg.train.threads));
    const ConfusionMatrix test_cm = evaluate(result.params, mcfg, test_set, cfg.train.threads);
    m.test_acc = accuracy(test_cm);

    if (epoch == 1 || m.test_acc > result.best_test_acc) {
      result.best_test_acc = m.test_acc;
      result.best_epoch = epoch;
    }
    result.final_test_acc = m.test_acc;
    result.final_confusion = test_cm;
    result.epochs.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  return result;
}

}  // namespace cnnlstm::train
