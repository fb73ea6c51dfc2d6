#pragma once

#include <map>
#include <string>

#include "cnnlstm/corpus.hpp"
#include "cnnlstm/tokenize.hpp"

namespace cnnlstm::corpus {

struct DatasetStats {
  std::size_t total = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::map<tokenize::Level, std::size_t> max_tokens_per_level;
  std::size_t avg_word_length = 0;
};

DatasetStats dataset_stats(const Dataset& d, std::size_t gram_len);

/// {total, positives, negatives, max_tokens: {char, ch5gram, word}, avg_word_length}
std::string stats_to_json(const DatasetStats& stats, int indent = 2);

}  // namespace cnnlstm::corpus
