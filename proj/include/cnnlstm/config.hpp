#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cnnlstm/train.hpp"

namespace cnnlstm::train {

/// Reads a flat JSON object of ModelConfig, TrainConfig and SplitSpec keys on
/// top of the defaults for its level. Unknown keys and invalid values are all
/// collected into one ConfigError.
ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig parse_experiment_config(std::string_view json_text);

/// Flat JSON echo of a resolved config, readable by experiment_from_json.
nlohmann::json experiment_to_json(const ExperimentConfig& cfg);

/// Throws ConfigError listing every invalid field.
/// Every range problem in `cfg`, one message per offending key.
std::vector<std::string> validation_problems(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

}  // namespace cnnlstm::train
