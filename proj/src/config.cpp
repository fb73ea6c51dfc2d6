#include "cnnlstm/config.hpp"

#include <set>

#include "cnnlstm/error.hpp"

namespace cnnlstm::train {
namespace {

using nlohmann::json;

const std::set<std::string, std::less<>> kKnownKeys = {
    "level",         "embed_dim",     "filter_sizes",       "num_filters", "pool_width",
    "dropout_rate",  "lstm_units",    "seed",               "model_seed",  "epochs",
    "batch_size",    "optimizer",     "learning_rate",      "beta1",       "beta2",
    "adam_epsilon",  "train_seed",    "shuffle_each_epoch", "threads",     "train_fraction",
    "split_seed",    "stratified",    "gram_len",           "gram_from_train_only"};

class Reader {
 public:
  Reader(const json& j, std::vector<std::string>& problems) : j_(j), problems_(problems) {}

  template <typename T>
  bool read(const char* key, T& out) {
    if (!j_.contains(key)) return false;
    const json& v = j_.at(key);
    if (!type_ok<T>(v)) {
      problems_.push_back(std::string(key) + ": " + expected<T>());
      return false;
    }
    out = v.get<T>();
    return true;
  }

 private:
  template <typename T>
  static bool type_ok(const json& v) {
    if constexpr (std::is_same_v<T, bool>) return v.is_boolean();
    else if constexpr (std::is_same_v<T, std::string>) return v.is_string();
    else if constexpr (std::is_same_v<T, double>) return v.is_number();
    else if constexpr (std::is_integral_v<T>) return v.is_number_unsigned() ||
                                                   (v.is_number_integer() && v.get<long long>() >= 0);
    else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
      if (!v.is_array()) return false;
      for (const auto& e : v)
        if (!type_ok<std::size_t>(e)) return false;
      return true;
    }
    return false;
  }

  template <typename T>
  static const char* expected() {
    if constexpr (std::is_same_v<T, bool>) return "expected true or false";
    else if constexpr (std::is_same_v<T, std::string>) return "expected a string";
    else if constexpr (std::is_same_v<T, double>) return "expected a number";
    else if constexpr (std::is_integral_v<T>) return "expected a non-negative integer";
    else return "expected an array of non-negative integers";
  }

  const json& j_;
  std::vector<std::string>& problems_;
};

}  // namespace

ExperimentConfig experiment_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError({"config: expected a JSON object"});
  std::vector<std::string> problems;
  for (const auto& [key, _] : j.items())
    if (!kKnownKeys.contains(key)) problems.push_back(key + ": unknown key");

  Reader r(j, problems);
  tokenize::Level level = tokenize::Level::Word;
  std::string level_name;
  if (r.read("level", level_name)) {
    if (auto parsed = tokenize::parse_level(level_name))
      level = *parsed;
    else
      problems.push_back("level: expected one of char, ch5gram, word");
  }

  ExperimentConfig cfg;
  cfg.model = model::default_model_config(level);
  auto& m = cfg.model;
  r.read("embed_dim", m.embed_dim);
  r.read("filter_sizes", m.filter_sizes);
  r.read("num_filters", m.num_filters);
  r.read("pool_width", m.pool_width);
  r.read("dropout_rate", m.dropout_rate);
  r.read("lstm_units", m.lstm_units);

  std::uint64_t seed = 0;
  r.read("seed", seed);
  m.seed = cfg.train.seed = cfg.split.seed = seed;
  r.read("model_seed", m.seed);
  r.read("train_seed", cfg.train.seed);
  r.read("split_seed", cfg.split.seed);

  auto& t = cfg.train;
  r.read("epochs", t.epochs);
  r.read("batch_size", t.batch_size);
  r.read("shuffle_each_epoch", t.shuffle_each_epoch);
  r.read("threads", t.threads);
  std::string opt_name;
  if (r.read("optimizer", opt_name)) {
    if (opt_name == "adam") {
      t.optimizer.kind = nn::OptimizerKind::Adam;
    } else if (opt_name == "sgd") {
      t.optimizer.kind = nn::OptimizerKind::Sgd;
      t.optimizer.learning_rate = 0.01;
    } else {
      problems.push_back("optimizer: expected adam or sgd");
    }
  }
  r.read("learning_rate", t.optimizer.learning_rate);
  r.read("beta1", t.optimizer.beta1);
  r.read("beta2", t.optimizer.beta2);
  r.read("adam_epsilon", t.optimizer.epsilon);

  r.read("train_fraction", cfg.split.train_fraction);
  r.read("stratified", cfg.split.stratified);
  std::size_t gram_len = 0;
  if (r.read("gram_len", gram_len)) cfg.tokenization.gram_len = gram_len;
  r.read("gram_from_train_only", cfg.tokenization.gram_from_train_only);

  auto range = validation_problems(cfg);
  problems.insert(problems.end(), range.begin(), range.end());
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError({std::string("config: not valid JSON (") + e.what() + ")"});
  }
  return experiment_from_json(j);
}

json experiment_to_json(const ExperimentConfig& cfg) {
  const auto& m = cfg.model;
  const auto& t = cfg.train;
  json j = {{"level", std::string(tokenize::level_name(m.level))},
            {"embed_dim", m.embed_dim},
            {"filter_sizes", m.filter_sizes},
            {"num_filters", m.num_filters},
            {"pool_width", m.pool_width},
            {"dropout_rate", m.dropout_rate},
            {"lstm_units", m.lstm_units},
            {"model_seed", m.seed},
            {"epochs", t.epochs},
            {"batch_size", t.batch_size},
            {"optimizer", std::string(nn::optimizer_name(t.optimizer.kind))},
            {"learning_rate", t.optimizer.learning_rate},
            {"beta1", t.optimizer.beta1},
            {"beta2", t.optimizer.beta2},
            {"adam_epsilon", t.optimizer.epsilon},
            {"train_seed", t.seed},
            {"shuffle_each_epoch", t.shuffle_each_epoch},
            {"threads", t.threads},
            {"train_fraction", cfg.split.train_fraction},
            {"split_seed", cfg.split.seed},
            {"stratified", cfg.split.stratified},
            {"gram_from_train_only", cfg.tokenization.gram_from_train_only}};
  if (cfg.tokenization.gram_len) j["gram_len"] = *cfg.tokenization.gram_len;
  return j;
}

std::vector<std::string> validation_problems(const ExperimentConfig& cfg) {
  std::vector<std::string> problems;
  auto need = [&](bool ok, const char* msg) {
    if (!ok) problems.emplace_back(msg);
  };
  const auto& m = cfg.model;
  need(m.embed_dim >= 1, "embed_dim: must be at least 1");
  need(!m.filter_sizes.empty(), "filter_sizes: need at least one filter size");
  for (auto k : m.filter_sizes) {
    if (k == 0) {
      problems.emplace_back("filter_sizes: filter size must be at least 1");
      break;
    }
  }
  need(m.num_filters >= 1, "num_filters: must be at least 1");
  need(m.pool_width >= 1, "pool_width: must be at least 1");
  need(m.dropout_rate >= 0.0 && m.dropout_rate < 1.0, "dropout_rate: must be in [0, 1)");
  need(m.lstm_units >= 1, "lstm_units: must be at least 1");
  need(cfg.train.epochs >= 1, "epochs: must be at least 1");
  need(cfg.train.batch_size >= 1, "batch_size: must be at least 1");
  const auto& o = cfg.train.optimizer;
  need(o.learning_rate >= 0.0, "learning_rate: must be non-negative");
  need(o.beta1 >= 0.0 && o.beta1 < 1.0, "beta1: must be in [0, 1)");
  need(o.beta2 >= 0.0 && o.beta2 < 1.0, "beta2: must be in [0, 1)");
  need(o.epsilon > 0.0, "adam_epsilon: must be positive");
  need(cfg.split.train_fraction > 0.0 && cfg.split.train_fraction < 1.0,
       "train_fraction: must be in (0, 1)");
  need(!cfg.tokenization.gram_len || *cfg.tokenization.gram_len >= 1, "gram_len: must be at least 1");
  return problems;
}

void validate(const ExperimentConfig& cfg) {
  auto problems = validation_problems(cfg);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

}  // namespace cnnlstm::train
