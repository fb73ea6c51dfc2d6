#include "cnnlstm/model.hpp"

#include <cmath>

#include "cnnlstm/error.hpp"

namespace cnnlstm::model {
namespace {

using nn::Shape;

constexpr double kEmbeddingInitRange = 0.05;

Tensor glorot_uniform(Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = uniform(rng, -limit, limit);
  return t;
}

Tensor uniform_tensor(Shape shape, double range, Rng& rng) {
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = uniform(rng, -range, range);
  return t;
}

const char* gate_suffix(std::size_t q) {
  static constexpr const char* kNames[] = {"i", "f", "o", "g"};
  return kNames[q];
}

}  // namespace

std::size_t default_filter_size(tokenize::Level level) {
  switch (level) {
    case tokenize::Level::Word:
      return 3;
    case tokenize::Level::Ch5gram:
      return 10;
    case tokenize::Level::Char:
      return 20;
  }
  return 3;
}

ModelConfig default_model_config(tokenize::Level level) {
  ModelConfig cfg;
  cfg.level = level;
  cfg.filter_sizes = {default_filter_size(level)};
  return cfg;
}

std::size_t lstm_input_length(const ModelConfig& cfg, std::size_t filter_size) {
  if (filter_size > cfg.seq_len || cfg.pool_width == 0) return 0;
  return (cfg.seq_len - filter_size + 1) / cfg.pool_width;
}

void validate(const ModelConfig& cfg) {
  std::vector<std::string> problems;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };
  need(cfg.embed_dim >= 1, "embed_dim: must be at least 1");
  need(!cfg.filter_sizes.empty(), "filter_sizes: need at least one filter size");
  need(cfg.num_filters >= 1, "num_filters: must be at least 1");
  need(cfg.pool_width >= 1, "pool_width: must be at least 1");
  need(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0, "dropout_rate: must be in [0, 1)");
  need(cfg.lstm_units >= 1, "lstm_units: must be at least 1");
  need(cfg.seq_len >= 1, "seq_len: must be at least 1");
  need(cfg.vocab_size >= 2, "vocab_size: must be at least 2 (<Pad>, <Unk>)");
  for (std::size_t k : cfg.filter_sizes) {
    if (k == 0) {
      problems.push_back("filter_sizes: filter size must be at least 1");
    } else if (k > cfg.seq_len) {
      problems.push_back("filter_sizes: filter size " + std::to_string(k) + " exceeds seq_len " +
                         std::to_string(cfg.seq_len));
    } else if (cfg.pool_width >= 1 && lstm_input_length(cfg, k) == 0) {
      problems.push_back("pool_width: pooling leaves no steps for filter size " +
                         std::to_string(k));
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::size_t parameter_count(const ModelConfig& cfg) {
  const std::size_t d = cfg.embed_dim;
  const std::size_t f = cfg.num_filters;
  const std::size_t h = cfg.lstm_units;
  std::size_t n = cfg.vocab_size * d;
  for (std::size_t k : cfg.filter_sizes) n += k * d * f + f + nn::kGates * (f * h + h * h + h);
  n += cfg.filter_sizes.size() * h + 1;
  return n;
}

nn::LstmWeights Branch::lstm_weights() const {
  nn::LstmWeights w;
  for (std::size_t q = 0; q < nn::kGates; ++q) {
    w.w[q] = &lstm_w[q].value;
    w.u[q] = &lstm_u[q].value;
    w.b[q] = &lstm_b[q].value;
  }
  return w;
}

std::vector<Parameter*> ModelParams::parameters() {
  std::vector<Parameter*> out{&embedding};
  for (auto& b : branches) {
    out.push_back(&b.conv_w);
    out.push_back(&b.conv_b);
    for (auto& p : b.lstm_w) out.push_back(&p);
    for (auto& p : b.lstm_u) out.push_back(&p);
    for (auto& p : b.lstm_b) out.push_back(&p);
  }
  out.push_back(&head_w);
  out.push_back(&head_b);
  return out;
}

std::vector<const Parameter*> ModelParams::parameters() const {
  auto mut = const_cast<ModelParams*>(this)->parameters();
  return {mut.begin(), mut.end()};
}

std::size_t ModelParams::scalar_count() const {
  std::size_t n = 0;
  for (const Parameter* p : parameters()) n += p->value.size();
  return n;
}

void ModelParams::zero_grad() {
  for (Parameter* p : parameters()) p->zero_grad();
}

ModelParams build_model(const ModelConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  const std::size_t d = cfg.embed_dim;
  const std::size_t f = cfg.num_filters;
  const std::size_t h = cfg.lstm_units;

  ModelParams m;
  m.embedding = Parameter("embedding", uniform_tensor({cfg.vocab_size, d}, kEmbeddingInitRange, rng));
  for (std::size_t bi = 0; bi < cfg.filter_sizes.size(); ++bi) {
    const std::size_t k = cfg.filter_sizes[bi];
    const std::string prefix = "branch" + std::to_string(bi) + ".";
    Branch b;
    b.filter_size = k;
    b.conv_w = Parameter(prefix + "conv.w", glorot_uniform({k, d, f}, k * d, k * f, rng));
    b.conv_b = Parameter(prefix + "conv.b", Tensor({f}));
    for (std::size_t q = 0; q < nn::kGates; ++q)
      b.lstm_w[q] = Parameter(prefix + "lstm.w_" + gate_suffix(q), glorot_uniform({f, h}, f, h, rng));
    for (std::size_t q = 0; q < nn::kGates; ++q)
      b.lstm_u[q] = Parameter(prefix + "lstm.u_" + gate_suffix(q), glorot_uniform({h, h}, h, h, rng));
    for (std::size_t q = 0; q < nn::kGates; ++q)
      b.lstm_b[q] = Parameter(prefix + "lstm.b_" + gate_suffix(q),
                              Tensor({h}, q == nn::kForget ? 1.0 : 0.0));
    m.branches.push_back(std::move(b));
  }
  const std::size_t head_in = cfg.filter_sizes.size() * h;
  m.head_w = Parameter("head.w", glorot_uniform({head_in, 1}, head_in, 1, rng));
  m.head_b = Parameter("head.b", Tensor({1}));
  return m;
}

double forward_pass(const ModelParams& params, const ModelConfig& cfg,
                    std::span<const tokenize::TokenId> ids, Mode mode, Rng* rng,
                    ForwardCache* cache) {
  if (ids.size() != cfg.seq_len)
    throw ShapeError("encoded tweet has " + std::to_string(ids.size()) + " ids, expected seq_len " +
                     std::to_string(cfg.seq_len));
  if (params.branches.size() != cfg.filter_sizes.size())
    throw ShapeError("model has " + std::to_string(params.branches.size()) +
                     " branches, config lists " + std::to_string(cfg.filter_sizes.size()));

  Tensor embedded = nn::embedding_forward(ids, params.embedding.value);
  std::vector<double> features;
  features.reserve(params.branches.size() * cfg.lstm_units);
  std::vector<BranchCache> branch_caches;

  for (const Branch& b : params.branches) {
    Tensor conv = nn::conv1d_forward(embedded, b.conv_w.value, b.conv_b.value);
    Tensor act = nn::relu_forward(conv);
    nn::MaxPoolResult pooled = nn::maxpool1d_forward(act, cfg.pool_width);
    nn::DropoutResult dropped = nn::dropout_forward(pooled.out, cfg.dropout_rate, mode, rng);
    nn::LstmResult lstm = nn::lstm_forward(dropped.out, b.lstm_weights());
    features.insert(features.end(), lstm.final.h.begin(), lstm.final.h.end());
    if (cache != nullptr) {
      branch_caches.push_back({std::move(conv), std::move(pooled), act.shape(),
                               std::move(dropped.mask), std::move(lstm.cache)});
    }
  }

  const double p = nn::dense_sigmoid_forward(features, params.head_w.value, params.head_b.value);
  if (cache != nullptr) {
    cache->ids.assign(ids.begin(), ids.end());
    cache->embedded = std::move(embedded);
    cache->branches = std::move(branch_caches);
    cache->features = std::move(features);
    cache->probability = p;
  }
  return p;
}

GradientBuffer::GradientBuffer(const ModelParams& params) {
  for (const Parameter* p : params.parameters())
    dense.push_back(p == &params.embedding ? Tensor() : Tensor::zeros_like(p->value));
}

void GradientBuffer::zero() {
  for (auto& t : dense) t.fill(0.0);
  d_embedded = Tensor();
  ids.clear();
}

void backward_pass(const ModelParams& params, const ModelConfig& cfg, const ForwardCache& cache,
                   double d_probability, GradientBuffer& out) {
  out.zero();
  const std::size_t units = cfg.lstm_units;
  const std::size_t head_w_slot = 1 + params.branches.size() * kParamsPerBranch;
  const auto d_features =
      nn::dense_sigmoid_backward(cache.features, params.head_w.value, cache.probability,
                                 d_probability, out.dense[head_w_slot], out.dense[head_w_slot + 1]);

  Tensor d_embedded = Tensor::zeros_like(cache.embedded);
  for (std::size_t bi = 0; bi < params.branches.size(); ++bi) {
    const Branch& b = params.branches[bi];
    const BranchCache& bc = cache.branches[bi];
    const std::size_t slot = 1 + bi * kParamsPerBranch;

    nn::LstmGrads lg;
    for (std::size_t q = 0; q < nn::kGates; ++q) {
      lg.w[q] = &out.dense[slot + 2 + q];
      lg.u[q] = &out.dense[slot + 2 + nn::kGates + q];
      lg.b[q] = &out.dense[slot + 2 + 2 * nn::kGates + q];
    }
    // Only the final hidden state feeds the head.
    const std::size_t steps = bc.lstm.x.dim(0);
    Tensor d_hidden({steps, units});
    std::copy(d_features.begin() + static_cast<std::ptrdiff_t>(bi * units),
              d_features.begin() + static_cast<std::ptrdiff_t>((bi + 1) * units),
              d_hidden.row(steps - 1).begin());

    Tensor d_dropped = nn::lstm_backward(bc.lstm, b.lstm_weights(), d_hidden, lg);
    Tensor d_pooled = nn::dropout_backward(bc.dropout_mask, d_dropped);
    Tensor d_act = nn::maxpool1d_backward(bc.pool_input_shape, bc.pool.argmax, d_pooled);
    Tensor d_conv = nn::relu_backward(bc.conv_out, d_act);
    Tensor d_x = nn::conv1d_backward(cache.embedded, b.conv_w.value, d_conv, out.dense[slot],
                                     out.dense[slot + 1]);
    d_embedded.add(d_x);
  }
  out.d_embedded = std::move(d_embedded);
  out.ids = cache.ids;
}

void accumulate(const GradientBuffer& buffer, ModelParams& params) {
  auto ps = params.parameters();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i] == &params.embedding) continue;
    ps[i]->grad.add(buffer.dense[i]);
  }
  if (!buffer.ids.empty()) nn::embedding_backward(buffer.ids, buffer.d_embedded, params.embedding.grad);
}

corpus::Label predict_label(double p) {
  return p >= 0.5 ? corpus::Label::Positive : corpus::Label::Negative;
}

}  // namespace cnnlstm::model
