#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cnnlstm::corpus {

enum class Label : int { Negative = 0, Positive = 1 };

struct LabeledTweet {
  std::string text;  // NFC-normalized UTF-8, trimmed, non-empty
  Label label = Label::Negative;

  friend bool operator==(const LabeledTweet&, const LabeledTweet&) = default;
};

struct Dataset {
  std::string name;
  std::vector<LabeledTweet> tweets;

  std::size_t size() const noexcept { return tweets.size(); }
  bool empty() const noexcept { return tweets.empty(); }
  std::size_t count(Label label) const noexcept;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  // Shuffle each class separately and take train_fraction of each.
  bool stratified = false;
};

struct Split {
  Dataset train;
  Dataset test;
};

/// Parses a label token: pos|neg|1|0.
std::optional<Label> parse_label(std::string_view token);

/// Reads a `label<TAB>text` file. Blank lines are skipped, CRLF and a leading
/// BOM are accepted, text is trimmed and NFC-normalized. Errors name the
/// 1-based line number.
Dataset load_tsv(const std::filesystem::path& path);

/// Same grammar as load_tsv over an in-memory buffer.
Dataset parse_tsv(std::string_view content, std::string name);

/// Serializes as `pos|neg<TAB>text` lines, LF terminated.
std::string to_tsv(const Dataset& d);
void write_tsv(const Dataset& d, const std::filesystem::path& path);

/// Number of training examples: floor(train_fraction * n).
std::size_t train_size(std::size_t n, double train_fraction);

/// Deterministic shuffled split. Throws if either side would be empty.
Split split_dataset(const Dataset& d, const SplitSpec& spec);

}  // namespace cnnlstm::corpus
