#include "cnnlstm/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "cnnlstm/digest.hpp"
#include "cnnlstm/error.hpp"
#include "cnnlstm/rng.hpp"
#include "cnnlstm/tensor_json.hpp"

namespace cnnlstm::model {
namespace {

using nlohmann::json;

std::string payload_digest(const json& config, const std::vector<std::string>& tokens,
                           const std::vector<const Parameter*>& params) {
  Fnv1a64 h;
  h.update(config.dump());
  for (const auto& t : tokens) {
    h.update(t);
    h.update(std::string_view("\0", 1));
  }
  for (const Parameter* p : params) {
    h.update(p->name);
    h.update(nn::shape_string(p->value.shape()));
    h.update(p->value.data());
  }
  return "fnv1a64:" + h.hex();
}

}  // namespace

json config_to_json(const ModelConfig& cfg) {
  return {{"level", std::string(tokenize::level_name(cfg.level))},
          {"embed_dim", cfg.embed_dim},
          {"filter_sizes", cfg.filter_sizes},
          {"num_filters", cfg.num_filters},
          {"pool_width", cfg.pool_width},
          {"dropout_rate", cfg.dropout_rate},
          {"lstm_units", cfg.lstm_units},
          {"seq_len", cfg.seq_len},
          {"vocab_size", cfg.vocab_size},
          {"seed", cfg.seed}};
}

ModelConfig config_from_json(const json& j) {
  try {
    ModelConfig cfg;
    const auto level = tokenize::parse_level(j.at("level").get<std::string>());
    if (!level) throw ParseError("unknown level in model config");
    cfg.level = *level;
    cfg.embed_dim = j.at("embed_dim").get<std::size_t>();
    cfg.filter_sizes = j.at("filter_sizes").get<std::vector<std::size_t>>();
    cfg.num_filters = j.at("num_filters").get<std::size_t>();
    cfg.pool_width = j.at("pool_width").get<std::size_t>();
    cfg.dropout_rate = j.at("dropout_rate").get<double>();
    cfg.lstm_units = j.at("lstm_units").get<std::size_t>();
    cfg.seq_len = j.at("seq_len").get<std::size_t>();
    cfg.vocab_size = j.at("vocab_size").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model config: ") + e.what());
  }
}

void save_checkpoint(const ModelParams& params, const ModelConfig& cfg,
                     const tokenize::Vocabulary& vocab, const std::filesystem::path& path) {
  if (vocab.level() != cfg.level) throw Error("vocabulary level does not match model level");
  if (vocab.size() != cfg.vocab_size) throw Error("vocabulary size does not match model config");

  const auto ps = params.parameters();
  json tensors = json::array();
  for (const Parameter* p : ps) {
    json t = nn::tensor_to_json(p->value);
    t["name"] = p->name;
    tensors.push_back(std::move(t));
  }
  const json config = config_to_json(cfg);

  json doc;
  doc["format"] = kCheckpointFormat;
  doc["version"] = kCheckpointVersion;
  doc["prng"] = kPrngName;
  doc["config"] = config;
  doc["vocab"] = {{"level", std::string(tokenize::level_name(vocab.level()))},
                  {"gram_len", vocab.gram_len()},
                  {"tokens", vocab.tokens()}};
  doc["tensors"] = std::move(tensors);
  doc["digest"] = payload_digest(config, vocab.tokens(), ps);

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint " + tmp.string());
    out << doc.dump() << '\n';
    if (!out.flush()) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("no such file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();

  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::exception&) {
    throw IntegrityError("checkpoint " + path.string() + " is truncated or corrupt");
  }
  if (!doc.is_object() || doc.value("format", "") != kCheckpointFormat)
    throw IntegrityError(path.string() + " is not a cnnlstm checkpoint");
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kCheckpointVersion)
    throw VersionError("unsupported checkpoint version " +
                       (doc.contains("version") ? doc["version"].dump() : std::string("(none)")) +
                       ", expected " + std::to_string(kCheckpointVersion));

  try {
    const json& config_json = doc.at("config");
    ModelConfig cfg = config_from_json(config_json);
    const json& vj = doc.at("vocab");
    const auto vocab_level = tokenize::parse_level(vj.at("level").get<std::string>());
    if (!vocab_level) throw ParseError("unknown vocabulary level");
    tokenize::Vocabulary vocab(*vocab_level, vj.at("gram_len").get<std::size_t>(),
                               vj.at("tokens").get<std::vector<std::string>>());
    if (vocab.level() != cfg.level || vocab.size() != cfg.vocab_size)
      throw IntegrityError("checkpoint vocabulary does not match its model config");

    ModelParams params = build_model(cfg);
    auto ps = params.parameters();
    const json& tensors = doc.at("tensors");
    if (tensors.size() != ps.size())
      throw IntegrityError("checkpoint holds " + std::to_string(tensors.size()) +
                           " tensors, config implies " + std::to_string(ps.size()));
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (tensors[i].at("name").get<std::string>() != ps[i]->name)
        throw IntegrityError("unexpected tensor " + tensors[i].at("name").dump() + ", wanted " +
                             ps[i]->name);
      Tensor t = nn::tensor_from_json(tensors[i]);
      if (t.shape() != ps[i]->value.shape())
        throw IntegrityError("tensor " + ps[i]->name + " has shape " + nn::shape_string(t.shape()) +
                             ", config implies " + nn::shape_string(ps[i]->value.shape()));
      ps[i]->value = std::move(t);
      ps[i]->zero_grad();
    }

    const std::vector<const Parameter*> cps(ps.begin(), ps.end());
    if (doc.at("digest").get<std::string>() != payload_digest(config_json, vocab.tokens(), cps))
      throw IntegrityError("checkpoint digest mismatch: " + path.string());
    return {std::move(cfg), std::move(params), std::move(vocab)};
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("checkpoint is corrupt: ") + e.what());
  } catch (const ParseError& e) {
    throw IntegrityError(std::string("checkpoint is corrupt: ") + e.what());
  } catch (const ConfigError& e) {
    throw IntegrityError(std::string("checkpoint config is invalid: ") + e.what());
  }
}

}  // namespace cnnlstm::model
