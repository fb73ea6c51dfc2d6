#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cnnlstm/corpus.hpp"
#include "cnnlstm/tokenize.hpp"

namespace cnnlstm::tokenize {

using TokenId = std::int32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr std::string_view kPadToken = "<Pad>";
inline constexpr std::string_view kUnkToken = "<Unk>";

/// Dense token <-> id map. Ids 0 and 1 are always <Pad> and <Unk>; the rest
/// follow first-occurrence order in the data the vocabulary was built from.
/// Immutable once built.
class Vocabulary {
 public:
  /// Rebuilds from an id-ordered token list. Throws ParseError if entries 0
  /// and 1 are not the reserved tokens or if a token repeats.
  Vocabulary(Level level, std::size_t gram_len, std::vector<std::string> tokens);

  Level level() const noexcept { return level_; }
  /// The n-gram width the tokens were produced with (used for Ch5gram).
  std::size_t gram_len() const noexcept { return gram_len_; }
  std::size_t size() const noexcept { return id_to_token_.size(); }

  /// Id of token, or kUnkId.
  TokenId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  const std::vector<std::string>& tokens() const noexcept { return id_to_token_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.level_ == b.level_ && a.gram_len_ == b.gram_len_ &&
           a.id_to_token_ == b.id_to_token_;
  }

 private:
  Level level_;
  std::size_t gram_len_;
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

Vocabulary build_vocab(const corpus::Dataset& train, Level level, std::size_t gram_len);

using IdSequence = std::vector<TokenId>;

/// Maps tokens to ids, right-pads with kPadId or truncates to seq_len.
IdSequence encode_sequence(const Tokens& tokens, const Vocabulary& vocab, std::size_t seq_len);

struct EncodedTweet {
  IdSequence ids;
  corpus::Label label = corpus::Label::Negative;
};

/// Tokenizes with the vocabulary's level and gram length, then encodes.
std::vector<EncodedTweet> encode_dataset(const corpus::Dataset& d, const Vocabulary& vocab,
                                         std::size_t seq_len);

/// Vocabulary file: a JSON array of tokens in id order.
std::string vocab_to_json(const Vocabulary& vocab);
Vocabulary vocab_from_json(std::string_view json, Level level, std::size_t gram_len);
void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocab(const std::filesystem::path& path, Level level, std::size_t gram_len);

}  // namespace cnnlstm::tokenize
