#include "cnnlstm/vocabulary.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cnnlstm/error.hpp"

namespace cnnlstm::tokenize {

Vocabulary::Vocabulary(Level level, std::size_t gram_len, std::vector<std::string> tokens)
    : level_(level), gram_len_(gram_len), id_to_token_(std::move(tokens)) {
  if (id_to_token_.size() < 2 || id_to_token_[0] != kPadToken || id_to_token_[1] != kUnkToken)
    throw ParseError("vocabulary must start with <Pad>, <Unk>");
  token_to_id_.reserve(id_to_token_.size());
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) {
    if (!token_to_id_.emplace(id_to_token_[i], static_cast<TokenId>(i)).second)
      throw ParseError("duplicate vocabulary token at id " + std::to_string(i));
  }
}

TokenId Vocabulary::id(std::string_view token) const {
  const auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.contains(std::string(token));
}

const std::string& Vocabulary::token(TokenId id) const {
  return id_to_token_.at(static_cast<std::size_t>(id));
}

Vocabulary build_vocab(const corpus::Dataset& train, Level level, std::size_t gram_len) {
  if (train.empty()) throw Error("cannot build a vocabulary from an empty dataset");
  std::vector<std::string> tokens{std::string(kPadToken), std::string(kUnkToken)};
  std::unordered_map<std::string, TokenId> seen{{tokens[0], kPadId}, {tokens[1], kUnkId}};
  for (const auto& t : train.tweets) {
    for (auto& tok : tokenize_text(t.text, level, gram_len)) {
      if (seen.emplace(tok, static_cast<TokenId>(tokens.size())).second)
        tokens.push_back(std::move(tok));
    }
  }
  return Vocabulary(level, gram_len, std::move(tokens));
}

IdSequence encode_sequence(const Tokens& tokens, const Vocabulary& vocab, std::size_t seq_len) {
  if (seq_len == 0) throw Error("seq_len must be at least 1");
  IdSequence ids(seq_len, kPadId);
  const auto n = std::min(seq_len, tokens.size());
  for (std::size_t i = 0; i < n; ++i) ids[i] = vocab.id(tokens[i]);
  return ids;
}

std::vector<EncodedTweet> encode_dataset(const corpus::Dataset& d, const Vocabulary& vocab,
                                         std::size_t seq_len) {
  std::vector<EncodedTweet> out;
  out.reserve(d.size());
  for (const auto& t : d.tweets) {
    out.push_back({encode_sequence(tokenize_text(t.text, vocab.level(), vocab.gram_len()), vocab,
                                   seq_len),
                   t.label});
  }
  return out;
}

std::string vocab_to_json(const Vocabulary& vocab) {
  return nlohmann::json(vocab.tokens()).dump();
}

Vocabulary vocab_from_json(std::string_view json, Level level, std::size_t gram_len) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("vocabulary JSON: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("vocabulary JSON must be an array");
  std::vector<std::string> tokens;
  tokens.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError("vocabulary entries must be strings");
    tokens.push_back(e.get<std::string>());
  }
  return Vocabulary(level, gram_len, std::move(tokens));
}

void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << vocab_to_json(vocab) << '\n';
}

Vocabulary load_vocab(const std::filesystem::path& path, Level level, std::size_t gram_len) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("no such file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return vocab_from_json(buf.str(), level, gram_len);
}

}  // namespace cnnlstm::tokenize
