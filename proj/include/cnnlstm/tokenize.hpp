#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnnlstm/corpus.hpp"

namespace cnnlstm::tokenize {

enum class Level { Char, Ch5gram, Word };

inline constexpr Level kAllLevels[] = {Level::Char, Level::Ch5gram, Level::Word};

/// "char", "ch5gram", "word".
std::string_view level_name(Level level);
std::optional<Level> parse_level(std::string_view name);

using Tokens = std::vector<std::string>;

/// Tokenizes NFC text at the given level.
///  Char:    every non-whitespace scalar value.
///  Word:    maximal runs of non-whitespace.
///  Ch5gram: words of at most gram_len scalars pass through; longer words
///           become their overlapping gram_len-wide windows, stride 1.
/// Throws ParseError if the text has no tokens (empty or all whitespace).
Tokens tokenize_text(std::string_view text, Level level, std::size_t gram_len = 5);

/// Mean scalar length of all whitespace-delimited words, rounded half-up.
std::size_t avg_word_length(const corpus::Dataset& d);

/// Longest token sequence in the dataset at the given level.
std::size_t max_token_count(const corpus::Dataset& d, Level level, std::size_t gram_len);

}  // namespace cnnlstm::tokenize
