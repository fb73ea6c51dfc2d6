#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "cnnlstm/corpus.hpp"
#include "cnnlstm/dataset_stats.hpp"
#include "cnnlstm/error.hpp"
#include "cnnlstm/rng.hpp"
#include "cnnlstm/tokenize.hpp"

using namespace cnnlstm;
using corpus::Label;

namespace {

corpus::Dataset make_dataset(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  corpus::Dataset d;
  d.name = "synthetic";
  for (std::size_t i = 0; i < n; ++i)
    d.tweets.push_back({"tweet number " + std::to_string(i),
                        gen() % 3 == 0 ? Label::Positive : Label::Negative});
  return d;
}

std::vector<std::string> texts(const corpus::Dataset& d) {
  std::vector<std::string> out;
  for (const auto& t : d.tweets) out.push_back(t.text);
  return out;
}

// Fisher-Yates over raw 64-bit draws, written out independently of the library helpers.
std::vector<std::size_t> reference_permutation(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t max = ~std::uint64_t{0};
    const std::uint64_t limit = max - max % i;
    std::uint64_t x = gen();
    while (x >= limit) x = gen();
    std::swap(perm[i - 1], perm[x % i]);
  }
  return perm;
}

}  // namespace

TEST(Corpus, ParsesLabelsAndText) {
  const auto d = corpus::parse_tsv("pos\tgood service\nneg\tbad service\n", "t");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.tweets[0].label, Label::Positive);
  EXPECT_EQ(d.tweets[1].label, Label::Negative);
  EXPECT_EQ(d.tweets[0].text, "good service");
  EXPECT_EQ(static_cast<int>(d.tweets[0].label), 1);
  EXPECT_EQ(static_cast<int>(d.tweets[1].label), 0);
}

TEST(Corpus, AcceptsNumericLabelsCrlfBomAndBlankLines) {
  const auto d = corpus::parse_tsv("\xEF\xBB\xBF" "1\tyes\r\n\r\n0\tno\r\n\n", "t");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.tweets[0].text, "yes");
  EXPECT_EQ(d.tweets[0].label, Label::Positive);
  EXPECT_EQ(d.tweets[1].text, "no");
  EXPECT_EQ(d.tweets[1].label, Label::Negative);
}

TEST(Corpus, UnknownLabelNamesTheLine) {
  try {
    corpus::parse_tsv("maybe\ttext\n", "t");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown label at line 1"), std::string::npos)
        << e.what();
  }
}

TEST(Corpus, RejectsMalformedLines) {
  EXPECT_THROW(corpus::parse_tsv("pos good\n", "t"), ParseError);
  EXPECT_THROW(corpus::parse_tsv("pos\tgood\tmore\n", "t"), ParseError);
  EXPECT_THROW(corpus::parse_tsv("pos\t   \n", "t"), ParseError);
  EXPECT_THROW(corpus::parse_tsv("pos\tbad \xC3\x28 byte\n", "t"), ParseError);
  EXPECT_THROW(corpus::parse_tsv("\n\n", "t"), ParseError);
}

TEST(Corpus, NormalizesToNfc) {
  const auto d = corpus::parse_tsv("pos\tcafe\xCC\x81\n", "t");
  EXPECT_EQ(d.tweets[0].text, "caf\xC3\xA9");
}

TEST(Corpus, MissingFileIsReported) {
  try {
    corpus::load_tsv("/definitely/not/here.tsv");
    FAIL() << "expected FileNotFoundError";
  } catch (const FileNotFoundError& e) {
    EXPECT_NE(std::string(e.what()).find("no such file"), std::string::npos);
  }
}

TEST(Corpus, TsvRoundTrip) {
  const auto d = make_dataset(40, 3);
  const auto path = std::filesystem::temp_directory_path() / "cnnlstm_roundtrip.tsv";
  corpus::write_tsv(d, path);
  auto back = corpus::load_tsv(path);
  back.name = d.name;
  EXPECT_EQ(back, d);
  EXPECT_EQ(corpus::parse_tsv(corpus::to_tsv(d), d.name), d);
  std::filesystem::remove(path);
}

TEST(Split, TrainSizeUsesFloor) {
  EXPECT_EQ(corpus::train_size(2026, 0.8), 1620u);
  EXPECT_EQ(2026u - corpus::train_size(2026, 0.8), 406u);
  EXPECT_EQ(corpus::train_size(10, 0.8), 8u);
  EXPECT_EQ(corpus::train_size(7, 0.5), 3u);
}

TEST(Split, SizesForLargeDataset) {
  const auto s = corpus::split_dataset(make_dataset(2026, 1), {0.8, 11, false});
  EXPECT_EQ(s.train.size(), 1620u);
  EXPECT_EQ(s.test.size(), 406u);
}

TEST(Split, MatchesIndependentPermutation) {
  const auto d = make_dataset(10, 2);
  const auto a = corpus::split_dataset(d, {0.8, 7, false});
  const auto b = corpus::split_dataset(d, {0.8, 7, false});
  EXPECT_EQ(texts(a.test), texts(b.test));
  EXPECT_EQ(texts(a.train), texts(b.train));

  const auto perm = reference_permutation(10, 7);
  std::vector<std::string> expected_test = {d.tweets[perm[8]].text, d.tweets[perm[9]].text};
  EXPECT_EQ(texts(a.test), expected_test);
  for (const auto& t : texts(a.test)) {
    const auto tr = texts(a.train);
    EXPECT_EQ(std::count(tr.begin(), tr.end(), t), 0);
  }
}

TEST(Split, PrngIsStandardMt19937_64) {
  // The 10000th draw of a default-seeded mt19937_64 is fixed by the C++ standard.
  Rng rng;
  rng.discard(9999);
  EXPECT_EQ(rng(), 9981545732273789042ULL);
  EXPECT_EQ(kPrngName, "mt19937_64");
}

TEST(Split, PartitionPropertyOverRandomDatasets) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 5 + gen() % 200;
    const double fraction = 0.2 + 0.6 * std::uniform_real_distribution<double>(0, 1)(gen);
    const bool stratified = trial % 2 == 1;
    const auto d = make_dataset(n, gen());
    corpus::Split s;
    try {
      s = corpus::split_dataset(d, {fraction, gen(), stratified});
    } catch (const Error&) {
      continue;  // tiny class in stratified mode can leave a side empty
    }
    ASSERT_EQ(s.train.size() + s.test.size(), n);
    if (!stratified) {
      EXPECT_EQ(s.train.size(), corpus::train_size(n, fraction));
    }
    auto all = texts(s.train);
    const auto t = texts(s.test);
    all.insert(all.end(), t.begin(), t.end());
    auto orig = texts(d);
    std::sort(all.begin(), all.end());
    std::sort(orig.begin(), orig.end());
    EXPECT_EQ(all, orig);
  }
}

TEST(Split, StratifiedKeepsClassProportions) {
  const auto d = make_dataset(300, 5);
  const auto s = corpus::split_dataset(d, {0.8, 1, true});
  EXPECT_EQ(s.train.count(Label::Positive), corpus::train_size(d.count(Label::Positive), 0.8));
  EXPECT_EQ(s.train.count(Label::Negative), corpus::train_size(d.count(Label::Negative), 0.8));
}

TEST(Split, EmptySideIsAnError) {
  EXPECT_THROW(corpus::split_dataset(make_dataset(1, 1), {0.8, 1, false}), Error);
  EXPECT_THROW(corpus::split_dataset(make_dataset(4, 1), {0.1, 1, false}), Error);
}

TEST(Stats, SmallDataset) {
  const auto d = corpus::parse_tsv("pos\tab cd\n", "t");
  const auto s = corpus::dataset_stats(d, 5);
  EXPECT_EQ(s.total, 1u);
  EXPECT_EQ(s.positives, 1u);
  EXPECT_EQ(s.negatives, 0u);
  EXPECT_EQ(s.max_tokens_per_level.at(tokenize::Level::Word), 2u);
  EXPECT_EQ(s.max_tokens_per_level.at(tokenize::Level::Char), 4u);
  EXPECT_EQ(s.max_tokens_per_level.at(tokenize::Level::Ch5gram), 2u);
  EXPECT_EQ(s.avg_word_length, 2u);
}

TEST(Stats, JsonLayout) {
  const auto d = corpus::parse_tsv("pos\tab cd\nneg\tefghijk\n", "t");
  const std::string json = corpus::stats_to_json(corpus::dataset_stats(d, 5), -1);
  EXPECT_EQ(json,
            R"({"total":2,"positives":1,"negatives":1,"max_tokens":{"char":7,"ch5gram":3,"word":2},"avg_word_length":4})");
}
