#include "gw/agents/oracle.hpp"

#include "gw/ad/init.hpp"
#include "gw/ad/ops.hpp"
#include "gw/core/error.hpp"
#include "gw/core/geometry.hpp"

namespace gw::agents {

using ad::Graph;
using ad::Var;
using nlohmann::json;

std::size_t OracleConfig::input_size() const {
  std::size_t n = 0;
  if (features.has(Feature::Image)) n += image_dim;
  if (features.has(Feature::Crop)) n += image_dim;
  if (features.has(Feature::Spatial)) n += 8;
  if (features.has(Feature::Category)) n += category_dim;
  if (features.has(Feature::Question)) n += hidden;
  return n;
}

json to_json(const OracleConfig& c) {
  return {{"features", c.features.to_string()}, {"word_dim", c.word_dim},
          {"hidden", c.hidden},                 {"category_dim", c.category_dim},
          {"mlp_hidden", c.mlp_hidden},         {"image_dim", c.image_dim},
          {"num_categories", c.num_categories}};
}

OracleConfig oracle_config_from_json(const json& j) {
  OracleConfig c;
  c.features = FeatureSet::parse(j.at("features").get<std::string>());
  c.word_dim = j.value("word_dim", c.word_dim);
  c.hidden = j.value("hidden", c.hidden);
  c.category_dim = j.value("category_dim", c.category_dim);
  c.mlp_hidden = j.value("mlp_hidden", c.mlp_hidden);
  c.image_dim = j.value("image_dim", c.image_dim);
  c.num_categories = j.value("num_categories", c.num_categories);
  return c;
}

json vocab_to_json(const data::Vocabulary& v) {
  return {{"tokens", v.tokens()}, {"min_count", v.min_count()}};
}

data::Vocabulary vocab_from_json(const json& j) {
  return data::Vocabulary::from_tokens(j.at("tokens").get<std::vector<std::string>>(),
                                       j.value("min_count", 1));
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

OracleModel::OracleModel(OracleConfig config, data::Vocabulary vocab, std::uint64_t seed)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
  if (config_.features.empty()) throw ConfigError("oracle feature set is empty");
  Rng rng(seed);
  if (config_.features.has(Feature::Question)) {
    word_embedding_ = &store_.add("oracle.emb", {vocab_.size(), config_.word_dim});
    ad::glorot_uniform(word_embedding_->value, rng);
    question_lstm_ = ad::make_lstm(store_, "oracle.lstm", config_.word_dim, config_.hidden, rng);
  }
  if (config_.features.has(Feature::Category)) {
    category_embedding_ = &store_.add("oracle.cat", {config_.num_categories, config_.category_dim});
    ad::glorot_uniform(category_embedding_->value, rng);
  }
  hidden_ = make_linear(store_, "oracle.mlp1", config_.input_size(), config_.mlp_hidden, rng);
  output_ = make_linear(store_, "oracle.mlp2", config_.mlp_hidden, kAnswerCount, rng);
}

Var OracleModel::logits(Graph& g, std::span<const TokenId> question, const ObjectRef& object,
                        const ImageMeta& image) const {
  const FeatureSet& fs = config_.features;
  std::vector<Var> parts;
  if (fs.has(Feature::Image)) parts.push_back(image_row(g, image.features, config_.image_dim));
  if (fs.has(Feature::Crop)) parts.push_back(image_row(g, object.crop_features, config_.image_dim));
  if (fs.has(Feature::Spatial)) {
    const SpatialVec8 s = spatial_features(object.bbox, image);
    parts.push_back(g.constant(ad::Tensor({1, 8}, std::vector<double>(s.begin(), s.end()))));
  }
  if (fs.has(Feature::Category)) {
    if (object.category_id < 0 ||
        static_cast<std::size_t>(object.category_id) >= config_.num_categories) {
      throw ValidationError("category_id", "category " + std::to_string(object.category_id) +
                                               " outside the oracle's range");
    }
    const TokenId id = object.category_id;
    parts.push_back(ad::embedding_lookup(g, *category_embedding_, std::span(&id, 1)));
  }
  if (fs.has(Feature::Question)) {
    if (question.empty()) throw ValidationError("question", "empty question");
    parts.push_back(encode_tokens(g, *word_embedding_, question_lstm_, question));
  }
  Var x = parts.size() == 1 ? parts.front() : ad::concat(parts, 1);
  return apply(g, output_, ad::relu(apply(g, hidden_, x)));
}

AnswerDistribution OracleModel::distribution(std::span<const TokenId> question,
                                             const ObjectRef& object,
                                             const ImageMeta& image) const {
  Graph g;
  const Var l = logits(g, question, object, image);
  AnswerDistribution p{};
  ad::softmax_row(l.value().values(), p);
  return p;
}

Answer OracleModel::predict(std::span<const TokenId> question, const ObjectRef& object,
                            const ImageMeta& image) const {
  const auto p = distribution(question, object, image);
  return static_cast<Answer>(argmax(p));
}

Answer OracleModel::answer(std::string_view question, const ObjectRef& object,
                           const ImageMeta& image) const {
  const auto tokens = vocab_.encode(question);
  return predict(tokens, object, image);
}

ad::Checkpoint OracleModel::to_checkpoint() const {
  return ad::make_checkpoint("oracle", {{"config", to_json(config_)}, {"vocab", vocab_to_json(vocab_)}},
                             store_);
}

OracleModel OracleModel::from_checkpoint(const ad::Checkpoint& ckpt) {
  ad::require_kind(ckpt, "oracle");
  OracleModel m(oracle_config_from_json(ckpt.metadata.at("config")),
                vocab_from_json(ckpt.metadata.at("vocab")), 0);
  ad::load_into(ckpt, m.store_);
  return m;
}

}  // namespace gw::agents
