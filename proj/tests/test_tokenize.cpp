#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "cnnlstm/corpus.hpp"
#include "cnnlstm/error.hpp"
#include "cnnlstm/tokenize.hpp"
#include "cnnlstm/unicode.hpp"
#include "cnnlstm/vocabulary.hpp"

using namespace cnnlstm;
using tokenize::Level;
using tokenize::Tokens;

namespace {

const std::string kExample = "Health services are generally good";

corpus::Dataset dataset_of(std::initializer_list<std::string> lines) {
  corpus::Dataset d;
  for (const auto& l : lines) d.tweets.push_back({l, corpus::Label::Positive});
  return d;
}

std::string random_word(std::mt19937_64& gen, std::size_t len) {
  static const char* alphabet[] = {"a", "b", "z", "\xC3\xA9", "\xD8\xB3", "\xD9\x84", "7", "!"};
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w += alphabet[gen() % 8];
  return w;
}

}  // namespace

TEST(Tokenize, WordLevelExample) {
  EXPECT_EQ(tokenize::tokenize_text(kExample, Level::Word),
            (Tokens{"Health", "services", "are", "generally", "good"}));
}

TEST(Tokenize, Ch5gramLevelExample) {
  EXPECT_EQ(tokenize::tokenize_text(kExample, Level::Ch5gram, 5),
            (Tokens{"Healt", "ealth", "servi", "ervic", "rvice", "vices", "are", "gener", "enera",
                    "neral", "erall", "rally", "good"}));
}

TEST(Tokenize, CharLevelExample) {
  const Tokens expected = {"H", "e", "a", "l", "t", "h", "s", "e", "r", "v", "i", "c", "e", "s", "a",
                           "r", "e", "g", "e", "n", "e", "r", "a", "l", "l", "y", "g", "o", "o", "d"};
  const auto got = tokenize::tokenize_text(kExample, Level::Char);
  EXPECT_EQ(got.size(), 30u);
  EXPECT_EQ(got, expected);
}

TEST(Tokenize, CharLevelSplitsMultibyteScalars) {
  EXPECT_EQ(tokenize::tokenize_text("\xD8\xB3\xD9\x84 \xC3\xA9", Level::Char),
            (Tokens{"\xD8\xB3", "\xD9\x84", "\xC3\xA9"}));
}

TEST(Tokenize, UnicodeWhitespaceSeparatesWords) {
  // U+00A0 no-break space and U+3000 ideographic space.
  EXPECT_EQ(tokenize::tokenize_text("a\xC2\xA0" "b\xE3\x80\x80" "c\td", Level::Word),
            (Tokens{"a", "b", "c", "d"}));
}

TEST(Tokenize, PunctuationStaysAttached) {
  EXPECT_EQ(tokenize::tokenize_text("good, really!", Level::Word), (Tokens{"good,", "really!"}));
}

TEST(Tokenize, AllWhitespaceIsAnError) {
  EXPECT_THROW(tokenize::tokenize_text("   ", Level::Word), ParseError);
  EXPECT_THROW(tokenize::tokenize_text("", Level::Char), ParseError);
  EXPECT_THROW(tokenize::tokenize_text("abc", Level::Ch5gram, 0), Error);
}

TEST(Tokenize, LevelNames) {
  for (auto level : tokenize::kAllLevels)
    EXPECT_EQ(tokenize::parse_level(tokenize::level_name(level)), level);
  EXPECT_EQ(tokenize::level_name(Level::Ch5gram), "ch5gram");
  EXPECT_FALSE(tokenize::parse_level("Word").has_value());
}

TEST(TokenizeProperty, Ch5gramCountLaw) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t len = 1 + gen() % 14;
    const std::size_t g = 1 + gen() % 8;
    const auto word = random_word(gen, len);
    const auto grams = tokenize::tokenize_text(word, Level::Ch5gram, g);
    const std::size_t expected = len > g ? len - g + 1 : 1;
    ASSERT_EQ(grams.size(), expected) << word << " g=" << g;
    const auto scalars = unicode::scalars(word);
    if (len > g) {
      for (std::size_t s = 0; s < grams.size(); ++s) {
        std::string want;
        for (std::size_t i = s; i < s + g; ++i) want += scalars[i];
        EXPECT_EQ(grams[s], want);
      }
    } else {
      EXPECT_EQ(grams[0], word);
    }
  }
}

TEST(TokenizeProperty, CharCountAndWordReconstruction) {
  std::mt19937_64 gen(23);
  const char* spaces[] = {" ", "  ", "\t", "\xC2\xA0"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    std::size_t scalars = 0;
    const std::size_t words = 1 + gen() % 6;
    for (std::size_t w = 0; w < words; ++w) {
      const std::size_t len = 1 + gen() % 9;
      text += random_word(gen, len);
      scalars += len;
      text += spaces[gen() % 4];
    }
    EXPECT_EQ(tokenize::tokenize_text(text, Level::Char).size(), scalars);
    const auto tokens = tokenize::tokenize_text(text, Level::Word);
    EXPECT_EQ(tokens.size(), words);
    std::string joined;
    for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
    EXPECT_EQ(tokenize::tokenize_text(joined, Level::Word), tokens);
  }
}

TEST(AvgWordLength, RoundsHalfUp) {
  EXPECT_EQ(tokenize::avg_word_length(dataset_of({"abcde fghij klmno"})), 5u);
  EXPECT_EQ(tokenize::avg_word_length(dataset_of({"abcd efghi"})), 5u);
  EXPECT_EQ(tokenize::avg_word_length(dataset_of({"abcd", "efgh ijk"})), 4u);  // 11/3
  EXPECT_EQ(tokenize::avg_word_length(dataset_of({"a"})), 1u);
}

TEST(Vocabulary, FirstOccurrenceOrder) {
  const auto v = tokenize::build_vocab(dataset_of({"ab ab", "cd"}), Level::Word, 5);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"<Pad>", "<Unk>", "ab", "cd"}));
  EXPECT_EQ(v.id("ab"), 2);
  EXPECT_EQ(v.id("cd"), 3);
  EXPECT_EQ(v.id("zz"), tokenize::kUnkId);
}

TEST(Vocabulary, CharDedup) {
  EXPECT_EQ(tokenize::build_vocab(dataset_of({"aa"}), Level::Char, 5).size(), 3u);
}

TEST(Vocabulary, DeterministicAndBijective) {
  const auto d = dataset_of({"the cat sat", "on the mat", "a cat"});
  const auto a = tokenize::build_vocab(d, Level::Ch5gram, 2);
  const auto b = tokenize::build_vocab(d, Level::Ch5gram, 2);
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto id = static_cast<tokenize::TokenId>(i);
    EXPECT_EQ(a.id(a.token(id)), id);
  }
  EXPECT_EQ(a.token(tokenize::kPadId), "<Pad>");
  EXPECT_EQ(a.token(tokenize::kUnkId), "<Unk>");
}

TEST(Vocabulary, RejectsBadTokenLists) {
  EXPECT_THROW(tokenize::Vocabulary(Level::Word, 5, {"a", "<Unk>"}), ParseError);
  EXPECT_THROW(tokenize::Vocabulary(Level::Word, 5, {"<Pad>", "<Unk>", "x", "x"}), ParseError);
}

TEST(Vocabulary, JsonRoundTrip) {
  const auto v = tokenize::build_vocab(dataset_of({"ab cd", "\xD8\xB3\xD9\x84"}), Level::Word, 5);
  EXPECT_EQ(tokenize::vocab_to_json(v), R"(["<Pad>","<Unk>","ab","cd","سل"])");
  EXPECT_EQ(tokenize::vocab_from_json(tokenize::vocab_to_json(v), Level::Word, 5), v);
  const auto path = std::filesystem::temp_directory_path() / "cnnlstm_vocab.json";
  tokenize::save_vocab(v, path);
  EXPECT_EQ(tokenize::load_vocab(path, Level::Word, 5), v);
  std::filesystem::remove(path);
}

TEST(Encode, PadsAndMapsUnknown) {
  const tokenize::Vocabulary v(Level::Word, 5, {"<Pad>", "<Unk>", "ab"});
  EXPECT_EQ(tokenize::encode_sequence({"ab"}, v, 4), (tokenize::IdSequence{2, 0, 0, 0}));
  EXPECT_EQ(tokenize::encode_sequence({"zz"}, v, 2), (tokenize::IdSequence{1, 0}));
  EXPECT_EQ(tokenize::encode_sequence({"ab", "zz", "ab"}, v, 2), (tokenize::IdSequence{2, 1}));
}

TEST(EncodeProperty, LengthIsAlwaysSeqLen) {
  std::mt19937_64 gen(5);
  const tokenize::Vocabulary v(Level::Word, 5, {"<Pad>", "<Unk>", "a", "b"});
  for (int trial = 0; trial < 200; ++trial) {
    Tokens tokens(gen() % 12, "a");
    const std::size_t seq_len = 1 + gen() % 10;
    const auto ids = tokenize::encode_sequence(tokens, v, seq_len);
    ASSERT_EQ(ids.size(), seq_len);
    for (std::size_t i = 0; i < seq_len; ++i)
      EXPECT_EQ(ids[i], i < tokens.size() ? 2 : tokenize::kPadId);
  }
}
