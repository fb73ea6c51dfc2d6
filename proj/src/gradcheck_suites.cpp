#include "cnnlstm/gradcheck_suites.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <numeric>

#include "cnnlstm/layers.hpp"
#include "cnnlstm/lstm.hpp"
#include "cnnlstm/model.hpp"
#include "cnnlstm/rng.hpp"

namespace cnnlstm::nn {
namespace {

Tensor random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = uniform(rng, lo, hi);
  return t;
}

// Values bounded away from zero so ReLU's kink stays outside +-eps.
Tensor away_from_zero(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = (uniform01(rng) < 0.5 ? -1.0 : 1.0) * uniform(rng, 0.1, 1.0);
  return t;
}

// Distinct values at least 0.05 apart so no pooling window has a near tie.
Tensor well_separated(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  std::vector<std::size_t> rank(t.size());
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  shuffle(std::span<std::size_t>(rank), rng);
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = -1.0 + 0.05 * static_cast<double>(rank[i]) + uniform(rng, 0.0, 0.01);
  return t;
}

double project(const Tensor& out, const Tensor& weights) {
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += out[i] * weights[i];
  return s;
}

std::vector<Parameter*> pointers(std::vector<Parameter>& ps) {
  std::vector<Parameter*> out;
  for (auto& p : ps) out.push_back(&p);
  return out;
}

GradCheckReport check_embedding(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Parameter> ps{{"embedding.table", random_tensor({6, 4}, rng)}};
  const std::vector<tokenize::TokenId> ids{1, 3, 3, 0, 5};
  const Tensor r = random_tensor({ids.size(), 4}, rng);
  auto loss = [&](bool grad) {
    const Tensor out = embedding_forward(ids, ps[0].value);
    if (grad) embedding_backward(ids, r, ps[0].grad);
    return project(out, r);
  };
  return gradient_check(pointers(ps), loss, {.seed = seed});
}

GradCheckReport check_conv1d(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Parameter> ps{{"conv1d.x", random_tensor({7, 3}, rng)},
                            {"conv1d.w", random_tensor({3, 3, 4}, rng)},
                            {"conv1d.b", random_tensor({4}, rng)}};
  const Tensor r = random_tensor({5, 4}, rng);
  auto loss = [&](bool grad) {
    const Tensor out = conv1d_forward(ps[0].value, ps[1].value, ps[2].value);
    if (grad) ps[0].grad.add(conv1d_backward(ps[0].value, ps[1].value, r, ps[1].grad, ps[2].grad));
    return project(out, r);
  };
  return gradient_check(pointers(ps), loss, {.seed = seed});
}

GradCheckReport check_relu(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Parameter> ps{{"relu.x", away_from_zero({5, 4}, rng)}};
  const Tensor r = random_tensor({5, 4}, rng);
  auto loss = [&](bool grad) {
    const Tensor out = relu_forward(ps[0].value);
    if (grad) ps[0].grad.add(relu_backward(ps[0].value, r));
    return project(out, r);
  };
  return gradient_check(pointers(ps), loss, {.seed = seed});
}

GradCheckReport check_maxpool(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Parameter> ps{{"maxpool1d.x", well_separated({7, 3}, rng)}};
  const Tensor r = random_tensor({3, 3}, rng);
  auto loss = [&](bool grad) {
    const MaxPoolResult pooled = maxpool1d_forward(ps[0].value, 2);
    if (grad) ps[0].grad.add(maxpool1d_backward(ps[0].value.shape(), pooled.argmax, r));
    return project(pooled.out, r);
  };
  return gradient_check(pointers(ps), loss, {.seed = seed});
}

GradCheckReport check_dropout(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Parameter> ps{{"dropout.x", random_tensor({6, 5}, rng)}};
  const Tensor r = random_tensor({6, 5}, rng);
  const std::uint64_t mask_seed = mix_seed(seed, 7);
  auto loss = [&](bool grad) {
    Rng mask_rng(mask_seed);  // same mask on every call
    const DropoutResult d = dropout_forward(ps[0].value, 0.5, Mode::Train, &mask_rng);
    if (grad) ps[0].grad.add(dropout_backward(d.mask, r));
    return project(d.out, r);
  };
  return gradient_check(pointers(ps), loss, {.seed = seed});
}

GradCheckReport check_lstm(std::uint64_t seed) {
  Rng rng(seed);
  constexpr std::size_t kSteps = 4, kIn = 3, kUnits = 3;
  std::vector<Parameter> ps;
  ps.emplace_back("lstm.x", random_tensor({kSteps, kIn}, rng));
  for (const char* g : {"i", "f", "o", "g"})
    ps.emplace_back(std::string("lstm.w_") + g, random_tensor({kIn, kUnits}, rng, -0.8, 0.8));
  for (const char* g : {"i", "f", "o", "g"})
    ps.emplace_back(std::string("lstm.u_") + g, random_tensor({kUnits, kUnits}, rng, -0.8, 0.8));
  for (const char* g : {"i", "f", "o", "g"})
    ps.emplace_back(std::string("lstm.b_") + g, random_tensor({kUnits}, rng, -0.5, 0.5));
  const Tensor r = random_tensor({kSteps, kUnits}, rng);

  LstmWeights w;
  LstmGrads g;
  for (std::size_t q = 0; q < kGates; ++q) {
    w.w[q] = &ps[1 + q].value;
    w.u[q] = &ps[1 + kGates + q].value;
    w.b[q] = &ps[1 + 2 * kGates + q].value;
    g.w[q] = &ps[1 + q].grad;
    g.u[q] = &ps[1 + kGates + q].grad;
    g.b[q] = &ps[1 + 2 * kGates + q].grad;
  }
  auto loss = [&](bool grad) {
    const LstmResult out = lstm_forward(ps[0].value, w);
    if (grad) ps[0].grad.add(lstm_backward(out.cache, w, r, g));
    return project(out.hidden, r);
  };
  return gradient_check(pointers(ps), loss, {.seed = seed});
}

GradCheckReport check_dense_bce(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Parameter> ps{{"dense.h", random_tensor({5}, rng)},
                            {"dense.w", random_tensor({5, 1}, rng)},
                            {"dense.b", random_tensor({1}, rng)}};
  auto loss = [&](bool grad) {
    double total = 0.0;
    // The shifted bias gives the two labels different logits.
    for (auto [label, shift] : {std::pair{0, 0.0}, std::pair{1, 0.3}}) {
      Tensor bias = ps[2].value;
      bias[0] += shift;
      const double p = dense_sigmoid_forward(ps[0].value.data(), ps[1].value, bias);
      total += bce_loss(p, label);
      if (grad) {
        const auto d_h = dense_sigmoid_backward(ps[0].value.data(), ps[1].value, p,
                                                bce_grad(p, label), ps[1].grad, ps[2].grad);
        for (std::size_t i = 0; i < d_h.size(); ++i) ps[0].grad[i] += d_h[i];
      }
    }
    return total;
  };
  return gradient_check(pointers(ps), loss, {.seed = seed});
}

GradCheckReport check_model(std::vector<std::size_t> filter_sizes, std::uint64_t seed) {
  model::ModelConfig cfg;
  cfg.level = tokenize::Level::Word;
  cfg.embed_dim = 5;
  cfg.filter_sizes = std::move(filter_sizes);
  cfg.num_filters = 4;
  cfg.pool_width = 2;
  cfg.dropout_rate = 0.5;
  cfg.lstm_units = 3;
  cfg.seq_len = 8;
  cfg.vocab_size = 12;
  cfg.seed = seed;
  auto params = std::make_shared<model::ModelParams>(model::build_model(cfg));
  // Larger than the Glorot scale so every path carries a visible gradient.
  Rng rng(mix_seed(seed, 3));
  for (Parameter* p : params->parameters())
    for (auto& v : p->value.data()) v = uniform(rng, -0.6, 0.6);

  const std::vector<tokenize::IdSequence> batch{{2, 5, 7, 3, 11, 4, 0, 0}, {9, 1, 6, 8, 10, 2, 3, 0}};
  const std::vector<int> labels{1, 0};

  auto loss = [params, cfg, batch, labels, seed](bool grad) {
    double total = 0.0;
    const double scale = 1.0 / static_cast<double>(batch.size());
    model::GradientBuffer buffer(*params);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      Rng dropout_rng(mix_seed(seed, 100 + i));
      model::ForwardCache cache;
      const double p = model::forward_pass(*params, cfg, batch[i], Mode::Train, &dropout_rng, &cache);
      total += bce_loss(p, labels[i]) * scale;
      if (grad) {
        model::backward_pass(*params, cfg, cache, bce_grad(p, labels[i]) * scale, buffer);
        model::accumulate(buffer, *params);
      }
    }
    return total;
  };
  return gradient_check(params->parameters(), loss, {.seed = seed});
}

}  // namespace

std::vector<ComponentCheck> layer_checks(std::uint64_t seed) {
  return {{"embedding", [seed] { return check_embedding(seed); }},
          {"conv1d", [seed] { return check_conv1d(seed); }},
          {"relu", [seed] { return check_relu(seed); }},
          {"maxpool1d", [seed] { return check_maxpool(seed); }},
          {"dropout", [seed] { return check_dropout(seed); }},
          {"lstm", [seed] { return check_lstm(seed); }},
          {"dense_sigmoid_bce", [seed] { return check_dense_bce(seed); }}};
}

std::vector<ComponentCheck> full_model_checks(std::uint64_t seed) {
  return {{"model.one_branch", [seed] { return check_model({3}, seed); }},
          {"model.two_branch", [seed] { return check_model({3, 2}, seed); }}};
}

std::optional<std::vector<ComponentCheck>> preset_checks(std::string_view preset) {
  if (preset == "layers") return layer_checks();
  if (preset == "full-model") return full_model_checks();
  return std::nullopt;
}

bool SuiteResult::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
}

SuiteResult run_suite(const std::vector<ComponentCheck>& checks, double tolerance) {
  SuiteResult result;
  for (const auto& c : checks) {
    SuiteRow row{c.name, c.run()};
    row.pass = row.report.max_rel_error() < tolerance;
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string format_suite(const SuiteResult& result) {
  std::string out;
  char line[512];
  for (const auto& row : result.rows) {
    std::size_t coords = 0;
    for (const auto& t : row.report.tensors) coords += t.checked;
    std::snprintf(line, sizeof line, "%s %-18s max_rel_error=%.3e coords=%zu", row.pass ? "PASS" : "FAIL",
                  row.component.c_str(), row.report.max_rel_error(), coords);
    out += line;
    if (!row.pass) {
      if (const TensorCheck* w = row.report.worst()) {
        std::snprintf(line, sizeof line, " worst=%s[%zu] analytic=%.9g numeric=%.9g", w->name.c_str(),
                      w->worst_index, w->analytic, w->numeric);
        out += line;
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace cnnlstm::nn
