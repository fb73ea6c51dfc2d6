#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "json.hpp"

#include "cnnlstm/train.hpp"

namespace cnnlstm::train {

/// Header `epoch,train_loss,train_acc,test_acc`, one row per epoch.
std::string metrics_csv(std::span<const EpochMetrics> epochs);

/// Everything needed to interpret a metrics file: configs, seeds, PRNG name,
/// vocabulary size, seq_len, best and final accuracies.
nlohmann::json run_metadata(const ExperimentConfig& cfg, const TrainingResult& result);

struct RunPaths {
  std::filesystem::path metrics_csv;
  std::filesystem::path metrics_json;
  std::filesystem::path checkpoint;
  std::filesystem::path train_split;
  std::filesystem::path test_split;
};

/// Writes metrics.csv, metrics.json, model.ckpt and the two split files into
/// out_dir (created if needed).
RunPaths write_run_outputs(const ExperimentConfig& cfg, const TrainingResult& result,
                           const std::filesystem::path& out_dir);

}  // namespace cnnlstm::train
