#include "cnnlstm/dataset_stats.hpp"

#include "json.hpp"

namespace cnnlstm::corpus {

DatasetStats dataset_stats(const Dataset& d, std::size_t gram_len) {
  DatasetStats s;
  s.total = d.size();
  s.positives = d.count(Label::Positive);
  s.negatives = d.count(Label::Negative);
  for (auto level : tokenize::kAllLevels)
    s.max_tokens_per_level[level] = tokenize::max_token_count(d, level, gram_len);
  s.avg_word_length = tokenize::avg_word_length(d);
  return s;
}

std::string stats_to_json(const DatasetStats& stats, int indent) {
  nlohmann::ordered_json max_tokens;
  for (auto level : tokenize::kAllLevels)
    max_tokens[std::string(tokenize::level_name(level))] = stats.max_tokens_per_level.at(level);
  nlohmann::ordered_json j;
  j["total"] = stats.total;
  j["positives"] = stats.positives;
  j["negatives"] = stats.negatives;
  j["max_tokens"] = max_tokens;
  j["avg_word_length"] = stats.avg_word_length;
  return j.dump(indent);
}

}  // namespace cnnlstm::corpus
