#include "cnnlstm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cnnlstm/error.hpp"
#include "cnnlstm/rng.hpp"
#include "cnnlstm/unicode.hpp"

namespace cnnlstm::corpus {
namespace {

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw ParseError(what + " at line " + std::to_string(line));
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

Dataset subset(const Dataset& d, std::span<const std::size_t> idx, std::string suffix) {
  Dataset out{d.name + suffix, {}};
  out.tweets.reserve(idx.size());
  for (auto i : idx) out.tweets.push_back(d.tweets[i]);
  return out;
}

}  // namespace

std::size_t Dataset::count(Label label) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      tweets.begin(), tweets.end(), [label](const LabeledTweet& t) { return t.label == label; }));
}

std::optional<Label> parse_label(std::string_view token) {
  if (token == "pos" || token == "1") return Label::Positive;
  if (token == "neg" || token == "0") return Label::Negative;
  return std::nullopt;
}

Dataset parse_tsv(std::string_view content, std::string name) {
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);

  Dataset d{std::move(name), {}};
  std::size_t line_no = 0;
  while (!content.empty()) {
    ++line_no;
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content.remove_prefix(nl == std::string_view::npos ? content.size() : nl + 1);
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (is_blank(line)) continue;

    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) fail_at(line_no, "missing tab");
    const auto label = parse_label(line.substr(0, tab));
    if (!label) fail_at(line_no, "unknown label");
    const std::string_view raw = line.substr(tab + 1);
    if (raw.find('\t') != std::string_view::npos) fail_at(line_no, "tab inside text");
    if (!unicode::is_valid_utf8(raw)) fail_at(line_no, "invalid UTF-8");

    std::string text = unicode::trim(unicode::nfc(raw));
    if (text.empty()) fail_at(line_no, "empty text");
    d.tweets.push_back({std::move(text), *label});
  }
  if (d.tweets.empty()) throw ParseError("dataset is empty");
  return d;
}

Dataset load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("no such file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_tsv(buf.str(), path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string to_tsv(const Dataset& d) {
  std::string out;
  for (const auto& t : d.tweets) {
    out += t.label == Label::Positive ? "pos\t" : "neg\t";
    out += t.text;
    out += '\n';
  }
  return out;
}

void write_tsv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_tsv(d);
  if (!out) throw Error("write failed: " + path.string());
}

std::size_t train_size(std::size_t n, double train_fraction) {
  // The small slack keeps products like 0.29 * 100 from flooring to 28.
  return static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 1e-9));
}

Split split_dataset(const Dataset& d, const SplitSpec& spec) {
  if (d.empty()) throw Error("cannot split an empty dataset");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw Error("train_fraction must be in (0, 1)");

  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  if (!spec.stratified) {
    const auto perm = seeded_permutation(d.size(), spec.seed);
    const auto n_train = train_size(d.size(), spec.train_fraction);
    train_idx.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_idx.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  } else {
    Rng rng(spec.seed);
    for (Label cls : {Label::Negative, Label::Positive}) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < d.size(); ++i)
        if (d.tweets[i].label == cls) members.push_back(i);
      shuffle(std::span<std::size_t>(members), rng);
      const auto n_train = train_size(members.size(), spec.train_fraction);
      train_idx.insert(train_idx.end(), members.begin(),
                       members.begin() + static_cast<std::ptrdiff_t>(n_train));
      test_idx.insert(test_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train),
                      members.end());
    }
  }
  if (train_idx.empty() || test_idx.empty())
    throw Error("split of " + std::to_string(d.size()) + " tweets at fraction " +
                std::to_string(spec.train_fraction) + " leaves an empty side");
  return {subset(d, train_idx, ".train"), subset(d, test_idx, ".test")};
}

}  // namespace cnnlstm::corpus
