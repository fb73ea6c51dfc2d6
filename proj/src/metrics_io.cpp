#include "cnnlstm/metrics_io.hpp"

#include <cstdio>
#include <fstream>

#include "cnnlstm/checkpoint.hpp"
#include "cnnlstm/config.hpp"
#include "cnnlstm/error.hpp"
#include "cnnlstm/rng.hpp"

namespace cnnlstm::train {
namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw Error("write failed: " + path.string());
}

nlohmann::ordered_json confusion_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}};
}

}  // namespace

std::string metrics_csv(std::span<const EpochMetrics> epochs) {
  std::string out = "epoch,train_loss,train_acc,test_acc\n";
  char line[128];
  for (const auto& m : epochs) {
    std::snprintf(line, sizeof line, "%zu,%.10f,%.10f,%.10f\n", m.epoch, m.train_loss, m.train_acc,
                  m.test_acc);
    out += line;
  }
  return out;
}

nlohmann::json run_metadata(const ExperimentConfig& cfg, const TrainingResult& result) {
  nlohmann::ordered_json j;
  j["config"] = experiment_to_json(cfg);
  j["model"] = model::config_to_json(result.model_config);
  j["prng"] = kPrngName;
  j["dataset"] = {{"train_size", result.split.train.size()},
                  {"test_size", result.split.test.size()}};
  j["vocab_size"] = result.vocab.size();
  j["vocab_source"] = "train split";
  j["seq_len"] = result.model_config.seq_len;
  j["seq_len_source"] = "full dataset";
  j["gram_len"] = result.gram_len;
  j["gram_len_source"] = cfg.tokenization.gram_len ? "config"
                         : cfg.tokenization.gram_from_train_only ? "train split"
                                                                 : "full dataset";
  j["parameter_count"] = model::parameter_count(result.model_config);
  j["epochs_run"] = result.epochs.size();
  j["best_test_acc"] = result.best_test_acc;
  j["best_epoch"] = result.best_epoch;
  j["final_test_acc"] = result.final_test_acc;
  j["final_confusion"] = confusion_json(result.final_confusion);
  return j;
}

RunPaths write_run_outputs(const ExperimentConfig& cfg, const TrainingResult& result,
                           const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunPaths paths{out_dir / "metrics.csv", out_dir / "metrics.json", out_dir / "model.ckpt",
                 out_dir / "train_split.tsv", out_dir / "test_split.tsv"};
  write_text(paths.metrics_csv, metrics_csv(result.epochs));
  write_text(paths.metrics_json, run_metadata(cfg, result).dump(2) + "\n");
  model::save_checkpoint(result.params, result.model_config, result.vocab, paths.checkpoint);
  corpus::write_tsv(result.split.train, paths.train_split);
  corpus::write_tsv(result.split.test, paths.test_split);
  return paths;
}

}  // namespace cnnlstm::train
