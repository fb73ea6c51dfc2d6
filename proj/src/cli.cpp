#include "cnnlstm/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cnnlstm/checkpoint.hpp"
#include "cnnlstm/config.hpp"
#include "cnnlstm/corpus.hpp"
#include "cnnlstm/dataset_stats.hpp"
#include "cnnlstm/digest.hpp"
#include "cnnlstm/error.hpp"
#include "cnnlstm/gradcheck_suites.hpp"
#include "cnnlstm/metrics_io.hpp"
#include "cnnlstm/rng.hpp"
#include "cnnlstm/tokenize.hpp"
#include "cnnlstm/train.hpp"
#include "cnnlstm/unicode.hpp"

namespace cnnlstm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

/// Usage problems detected after argument parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

const std::vector<std::string> kLevelNames = {"char", "ch5gram", "word"};

tokenize::Level level_from(const std::string& name) {
  const auto level = tokenize::parse_level(name);
  if (!level) throw UsageError("unknown level '" + name + "' (expected char, ch5gram or word)");
  return *level;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("no such file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ordered_json input_entry(const fs::path& path) {
  return {{"path", fs::absolute(path).string()}, {"digest", file_digest(path)}};
}

ordered_json manifest_base(const std::string& command, const std::vector<std::string>& args) {
  ordered_json m;
  m["command"] = command;
  m["argv"] = args;
  m["prng"] = kPrngName;
  return m;
}

void write_manifest(const ordered_json& manifest, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << manifest.dump(2) << '\n';
}

// --- stats ------------------------------------------------------------------

struct StatsArgs {
  std::string dataset;
  std::optional<std::size_t> gram_len;
  std::string manifest;
};

int cmd_stats(const StatsArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const corpus::Dataset d = corpus::load_tsv(a.dataset);
  const std::size_t gram_len = a.gram_len.value_or(tokenize::avg_word_length(d));
  if (gram_len == 0) throw UsageError("--gram-len must be at least 1");
  out << corpus::stats_to_json(corpus::dataset_stats(d, gram_len)) << '\n';
  if (!a.manifest.empty()) {
    auto m = manifest_base("stats", args);
    m["config"] = {{"gram_len", gram_len}};
    m["inputs"] = {{"dataset", input_entry(a.dataset)}};
    m["outputs"] = {{"stats", "stdout"}};
    write_manifest(m, a.manifest);
  }
  return kExitOk;
}

// --- tokenize ---------------------------------------------------------------

struct TokenizeArgs {
  std::optional<std::string> text;
  std::string file;
  std::string level;
  std::size_t gram_len = 5;
  std::string manifest;
};

int cmd_tokenize(const TokenizeArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  if (a.text && !a.file.empty()) throw UsageError("give either TEXT or --file, not both");
  if (!a.text && a.file.empty()) throw UsageError("nothing to tokenize: give TEXT or --file");
  if (a.gram_len == 0) throw UsageError("--gram-len must be at least 1");
  const std::string raw = a.text ? *a.text : read_file(a.file);
  if (!unicode::is_valid_utf8(raw)) throw UsageError("input is not valid UTF-8");
  tokenize::Tokens tokens;
  try {
    tokens = tokenize::tokenize_text(unicode::nfc(raw), level_from(a.level), a.gram_len);
  } catch (const ParseError& e) {
    throw UsageError(std::string("cannot tokenize: ") + e.what());
  }
  for (const auto& t : tokens) out << t << '\n';
  if (!a.manifest.empty()) {
    auto m = manifest_base("tokenize", args);
    m["config"] = {{"level", a.level}, {"gram_len", a.gram_len}};
    if (!a.file.empty()) m["inputs"] = {{"file", input_entry(a.file)}};
    m["outputs"] = {{"tokens", "stdout"}, {"count", tokens.size()}};
    write_manifest(m, a.manifest);
  }
  return kExitOk;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string config;
  std::string data;
  std::string out;
  std::optional<std::string> level;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<double> learning_rate;
  std::optional<std::string> optimizer;
  std::optional<std::size_t> gram_len;
  bool gram_from_train_only = false;
  bool quiet = false;
};

int cmd_train(const TrainArgs& a, const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err) {
  nlohmann::json cfg_json = nlohmann::json::object();
  if (!a.config.empty()) {
    try {
      cfg_json = nlohmann::json::parse(read_file(a.config));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError({std::string("config: not valid JSON (") + e.what() + ")"});
    }
    if (!cfg_json.is_object()) throw ConfigError({"config: expected a JSON object"});
  }
  if (a.level) cfg_json["level"] = *a.level;
  if (a.epochs) cfg_json["epochs"] = *a.epochs;
  if (a.batch_size) cfg_json["batch_size"] = *a.batch_size;
  if (a.threads) cfg_json["threads"] = *a.threads;
  if (a.learning_rate) cfg_json["learning_rate"] = *a.learning_rate;
  if (a.optimizer) cfg_json["optimizer"] = *a.optimizer;
  if (a.gram_len) cfg_json["gram_len"] = *a.gram_len;
  if (a.gram_from_train_only) cfg_json["gram_from_train_only"] = true;
  if (a.seed) {
    for (const char* key : {"model_seed", "train_seed", "split_seed"}) cfg_json.erase(key);
    cfg_json["seed"] = *a.seed;
  }
  const train::ExperimentConfig cfg = train::experiment_from_json(cfg_json);
  const corpus::Dataset dataset = corpus::load_tsv(a.data);

  auto progress = [&](const train::EpochMetrics& m) {
    if (a.quiet) return;
    char line[160];
    std::snprintf(line, sizeof line, "epoch %3zu/%zu  loss %.4f  train_acc %.4f  test_acc %.4f\n",
                  m.epoch, cfg.train.epochs, m.train_loss, m.train_acc, m.test_acc);
    err << line << std::flush;
  };
  const train::TrainingResult result = train::run_training(dataset, cfg, progress);
  const fs::path out_dir = a.out;
  const train::RunPaths paths = train::write_run_outputs(cfg, result, out_dir);

  auto m = manifest_base("train", args);
  m["config"] = train::experiment_to_json(cfg);
  m["inputs"] = {{"dataset", input_entry(a.data)}};
  if (!a.config.empty()) m["inputs"]["config"] = input_entry(a.config);
  m["outputs"] = {{"metrics_csv", paths.metrics_csv.string()},
                  {"metrics_json", paths.metrics_json.string()},
                  {"checkpoint", paths.checkpoint.string()},
                  {"train_split", paths.train_split.string()},
                  {"test_split", paths.test_split.string()}};
  m["best_test_acc"] = result.best_test_acc;
  m["best_epoch"] = result.best_epoch;
  m["final_test_acc"] = result.final_test_acc;
  write_manifest(m, out_dir / "manifest.json");

  char summary[160];
  std::snprintf(summary, sizeof summary,
                "best_test_acc=%.4f (epoch %zu) final_test_acc=%.4f epochs=%zu\n",
                result.best_test_acc, result.best_epoch, result.final_test_acc,
                result.epochs.size());
  out << summary;
  return kExitOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string checkpoint;
  std::string data;
  std::optional<std::string> level;
  std::size_t threads = 0;
  std::string manifest;
};

int cmd_evaluate(const EvaluateArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const model::Checkpoint ckpt = model::load_checkpoint(a.checkpoint);
  if (a.level && level_from(*a.level) != ckpt.config.level)
    throw UsageError("checkpoint was trained at level '" +
                     std::string(tokenize::level_name(ckpt.config.level)) + "', not '" + *a.level +
                     "'");
  const corpus::Dataset d = corpus::load_tsv(a.data);
  const auto encoded = tokenize::encode_dataset(d, ckpt.vocab, ckpt.config.seq_len);
  const train::ConfusionMatrix cm = train::evaluate(ckpt.params, ckpt.config, encoded, a.threads);

  ordered_json j;
  j["tp"] = cm.tp;
  j["tn"] = cm.tn;
  j["fp"] = cm.fp;
  j["fn"] = cm.fn;
  j["accuracy"] = train::accuracy(cm);
  out << j.dump(2) << '\n';
  if (!a.manifest.empty()) {
    auto m = manifest_base("evaluate", args);
    m["inputs"] = {{"checkpoint", input_entry(a.checkpoint)}, {"dataset", input_entry(a.data)}};
    m["outputs"] = {{"result", j}};
    write_manifest(m, a.manifest);
  }
  return kExitOk;
}

// --- gradcheck --------------------------------------------------------------

struct GradcheckArgs {
  std::string preset;
  std::string manifest;
};

int cmd_gradcheck(const GradcheckArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const auto checks = nn::preset_checks(a.preset);
  if (!checks) throw UsageError("unknown preset '" + a.preset + "' (expected layers or full-model)");
  const nn::SuiteResult result = nn::run_suite(*checks);
  out << nn::format_suite(result);
  out << (result.all_pass() ? "gradcheck PASS" : "gradcheck FAIL") << '\n';
  if (!a.manifest.empty()) {
    auto m = manifest_base("gradcheck", args);
    m["config"] = {{"preset", a.preset}, {"tolerance", nn::kGradCheckTolerance}};
    ordered_json rows = ordered_json::array();
    for (const auto& r : result.rows)
      rows.push_back({{"component", r.component},
                      {"max_rel_error", r.report.max_rel_error()},
                      {"pass", r.pass}});
    m["outputs"] = {{"components", rows}};
    write_manifest(m, a.manifest);
  }
  return result.all_pass() ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CNN-LSTM sentiment classifier for short texts"};
  app.name(args.empty() ? "cnnlstm" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Print dataset statistics as JSON");
  s->add_option("dataset", stats.dataset, "Dataset TSV (label<TAB>text)")->required();
  s->add_option("--gram-len", stats.gram_len, "N-gram width (default: average word length)");
  s->add_option("--manifest", stats.manifest, "Write a run manifest here");

  TokenizeArgs tok;
  auto* t = app.add_subcommand("tokenize", "Print tokens one per line");
  t->add_option("text", tok.text, "Text to tokenize");
  t->add_option("--file", tok.file, "Read the text from a file");
  t->add_option("--level", tok.level, "char, ch5gram or word")
      ->required()
      ->check(CLI::IsMember(kLevelNames));
  t->add_option("--gram-len", tok.gram_len, "N-gram width for ch5gram")->capture_default_str();
  t->add_option("--manifest", tok.manifest, "Write a run manifest here");

  TrainArgs tr;
  auto* r = app.add_subcommand("train", "Train on a dataset and write metrics and a checkpoint");
  r->add_option("--config", tr.config, "Flat JSON config");
  r->add_option("--data", tr.data, "Dataset TSV")->required();
  r->add_option("--out", tr.out, "Output directory")->required();
  r->add_option("--level", tr.level, "Override level")->check(CLI::IsMember(kLevelNames));
  r->add_option("--epochs", tr.epochs, "Override epochs");
  r->add_option("--batch-size", tr.batch_size, "Override batch size");
  r->add_option("--seed", tr.seed, "Set model, train and split seeds");
  r->add_option("--threads", tr.threads, "Worker threads (0 = all cores)");
  r->add_option("--learning-rate", tr.learning_rate, "Override learning rate");
  r->add_option("--optimizer", tr.optimizer, "adam or sgd")->check(CLI::IsMember({"adam", "sgd"}));
  r->add_option("--gram-len", tr.gram_len, "Fix the n-gram width instead of the average word length");
  r->add_flag("--gram-from-train-only", tr.gram_from_train_only,
              "Average word length over the training split only");
  r->add_flag("--quiet", tr.quiet, "No per-epoch progress on stderr");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Confusion matrix and accuracy of a checkpoint");
  e->add_option("--checkpoint", ev.checkpoint, "Checkpoint file")->required();
  e->add_option("--data", ev.data, "Dataset TSV")->required();
  e->add_option("--level", ev.level, "Expected level; must match the checkpoint")
      ->check(CLI::IsMember(kLevelNames));
  e->add_option("--threads", ev.threads, "Worker threads (0 = all cores)");
  e->add_option("--manifest", ev.manifest, "Write a run manifest here");

  GradcheckArgs gc;
  auto* g = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  g->add_option("preset", gc.preset, "layers or full-model")->required();
  g->add_option("--manifest", gc.manifest, "Write a run manifest here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_stats(stats, args, out);
    if (*t) return cmd_tokenize(tok, args, out);
    if (*r) return cmd_train(tr, args, out, err);
    if (*e) return cmd_evaluate(ev, args, out);
    if (*g) return cmd_gradcheck(gc, args, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const FileNotFoundError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cnnlstm::cli
