#include "cnnlstm/tokenize.hpp"

#include <algorithm>

#include "cnnlstm/error.hpp"
#include "cnnlstm/unicode.hpp"

namespace cnnlstm::tokenize {

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Char:
      return "char";
    case Level::Ch5gram:
      return "ch5gram";
    case Level::Word:
      return "word";
  }
  return "?";
}

std::optional<Level> parse_level(std::string_view name) {
  for (Level l : kAllLevels)
    if (level_name(l) == name) return l;
  return std::nullopt;
}

Tokens tokenize_text(std::string_view text, Level level, std::size_t gram_len) {
  if (gram_len == 0) throw Error("gram_len must be at least 1");
  const auto words = unicode::split_whitespace(text);
  if (words.empty()) throw ParseError("text has no tokens");

  Tokens tokens;
  switch (level) {
    case Level::Word:
      return words;
    case Level::Char:
      for (const auto& w : words) {
        auto chars = unicode::scalars(w);
        std::move(chars.begin(), chars.end(), std::back_inserter(tokens));
      }
      break;
    case Level::Ch5gram:
      for (const auto& w : words) {
        const auto chars = unicode::scalars(w);
        if (chars.size() <= gram_len) {
          tokens.push_back(w);
          continue;
        }
        for (std::size_t start = 0; start + gram_len <= chars.size(); ++start) {
          std::string gram;
          for (std::size_t k = start; k < start + gram_len; ++k) gram += chars[k];
          tokens.push_back(std::move(gram));
        }
      }
      break;
  }
  return tokens;
}

std::size_t avg_word_length(const corpus::Dataset& d) {
  if (d.empty()) throw Error("average word length of an empty dataset");
  std::size_t words = 0;
  std::size_t chars = 0;
  for (const auto& t : d.tweets) {
    for (const auto& w : unicode::split_whitespace(t.text)) {
      ++words;
      chars += unicode::length(w);
    }
  }
  if (words == 0) throw Error("dataset has no words");
  // round(chars / words) with halves going up, in integers.
  return (2 * chars + words) / (2 * words);
}

std::size_t max_token_count(const corpus::Dataset& d, Level level, std::size_t gram_len) {
  std::size_t longest = 0;
  for (const auto& t : d.tweets)
    longest = std::max(longest, tokenize_text(t.text, level, gram_len).size());
  return longest;
}

}  // namespace cnnlstm::tokenize
