#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "cnnlstm/model.hpp"
#include "cnnlstm/vocabulary.hpp"

namespace cnnlstm::model {

inline constexpr int kCheckpointVersion = 1;
inline constexpr std::string_view kCheckpointFormat = "cnnlstm-checkpoint";

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  tokenize::Vocabulary vocab;
};

nlohmann::json config_to_json(const ModelConfig& cfg);
/// Throws ParseError on missing or mistyped fields.
ModelConfig config_from_json(const nlohmann::json& j);

/// Writes one JSON document holding the format version, config, vocabulary,
/// PRNG name, every tensor, and a digest over all of it. The file is written
/// to a temporary sibling and renamed into place.
void save_checkpoint(const ModelParams& params, const ModelConfig& cfg,
                     const tokenize::Vocabulary& vocab, const std::filesystem::path& path);

/// Throws FileNotFoundError, VersionError for an unknown version, and
/// IntegrityError for truncated/corrupt files or digest mismatches.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace cnnlstm::model
