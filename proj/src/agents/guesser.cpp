#include "gw/agents/guesser.hpp"

#include "gw/ad/init.hpp"
#include "gw/ad/ops.hpp"
#include "gw/agents/oracle.hpp"
#include "gw/core/error.hpp"
#include "gw/core/geometry.hpp"

namespace gw::agents {

using ad::Graph;
using ad::Var;
using nlohmann::json;

json to_json(const GuesserConfig& c) {
  return {{"encoder", to_string(c.encoder)},
          {"word_dim", c.word_dim},
          {"hidden", c.hidden},
          {"utterance_hidden", c.utterance_hidden},
          {"use_image", c.use_image},
          {"image_dim", c.image_dim},
          {"category_dim", c.category_dim},
          {"object_hidden", c.object_hidden},
          {"num_categories", c.num_categories}};
}

GuesserConfig guesser_config_from_json(const json& j) {
  GuesserConfig c;
  c.encoder = parse_encoder(j.at("encoder").get<std::string>());
  c.word_dim = j.value("word_dim", c.word_dim);
  c.hidden = j.value("hidden", c.hidden);
  c.utterance_hidden = j.value("utterance_hidden", c.utterance_hidden);
  c.use_image = j.value("use_image", c.use_image);
  c.image_dim = j.value("image_dim", c.image_dim);
  c.category_dim = j.value("category_dim", c.category_dim);
  c.object_hidden = j.value("object_hidden", c.object_hidden);
  c.num_categories = j.value("num_categories", c.num_categories);
  return c;
}

GuesserModel::GuesserModel(GuesserConfig config, data::Vocabulary vocab, std::uint64_t seed)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
  Rng rng(seed);
  if (config_.encoder == EncoderKind::LstmFlat) {
    flat_ = std::make_unique<FlatEncoder>(store_, "guesser.enc", vocab_.size(), config_.word_dim,
                                          config_.hidden, rng);
  } else {
    hred_ = std::make_unique<HredEncoder>(store_, "guesser.enc", vocab_.size(), config_.word_dim,
                                          config_.utterance_hidden, config_.hidden, rng);
  }
  category_embedding_ = &store_.add("guesser.cat", {config_.num_categories, config_.category_dim});
  ad::glorot_uniform(category_embedding_->value, rng);
  object_hidden_ =
      make_linear(store_, "guesser.obj1", 8 + config_.category_dim, config_.object_hidden, rng);
  object_output_ =
      make_linear(store_, "guesser.obj2", config_.object_hidden, config_.state_size(), rng);
}

Var GuesserModel::dialogue_state(Graph& g, std::span<const EncodedQA> dialogue,
                                 const ImageMeta& image) const {
  Var d = flat_ ? flat_->encode(g, dialogue) : hred_->encode(g, dialogue);
  if (config_.use_image) d = ad::concat({d, image_row(g, image.features, config_.image_dim)}, 1);
  return d;
}

Var GuesserModel::object_embeddings(Graph& g, std::span<const ObjectRef> objects,
                                    const ImageMeta& image) const {
  ad::Tensor spatial({objects.size(), 8});
  std::vector<TokenId> cats;
  cats.reserve(objects.size());
  for (std::size_t k = 0; k < objects.size(); ++k) {
    const SpatialVec8 s = spatial_features(objects[k].bbox, image);
    for (std::size_t i = 0; i < 8; ++i) spatial.at(k, i) = s[i];
    const CategoryId c = objects[k].category_id;
    if (c < 0 || static_cast<std::size_t>(c) >= config_.num_categories) {
      throw ValidationError("category_id",
                            "category " + std::to_string(c) + " outside the guesser's range");
    }
    cats.push_back(c);
  }
  Var x = ad::concat(
      {g.constant(std::move(spatial)), ad::embedding_lookup(g, *category_embedding_, cats)}, 1);
  return apply(g, object_output_, ad::relu(apply(g, object_hidden_, x)));
}

Var GuesserModel::logits(Graph& g, std::span<const EncodedQA> dialogue,
                         std::span<const ObjectRef> objects, const ImageMeta& image) const {
  if (objects.empty()) throw ValidationError("objects", "guesser needs at least one object");
  Var d = dialogue_state(g, dialogue, image);
  return ad::transpose(ad::matmul(object_embeddings(g, objects, image), ad::transpose(d)));
}

std::vector<double> GuesserModel::distribution(std::span<const EncodedQA> dialogue,
                                               std::span<const ObjectRef> objects,
                                               const ImageMeta& image) const {
  Graph g;
  const Var l = logits(g, dialogue, objects, image);
  std::vector<double> p(objects.size());
  ad::softmax_row(l.value().values(), p);
  return p;
}

std::size_t GuesserModel::predict(std::span<const EncodedQA> dialogue,
                                  std::span<const ObjectRef> objects,
                                  const ImageMeta& image) const {
  Graph g;
  const Var l = logits(g, dialogue, objects, image);
  return argmax(l.value().values());
}

std::size_t GuesserModel::predict(std::span<const QAPair> dialogue,
                                  std::span<const ObjectRef> objects,
                                  const ImageMeta& image) const {
  const auto encoded = encode_dialogue(dialogue, vocab_);
  return predict(encoded, objects, image);
}

ad::Checkpoint GuesserModel::to_checkpoint() const {
  return ad::make_checkpoint("guesser",
                             {{"config", to_json(config_)}, {"vocab", vocab_to_json(vocab_)}},
                             store_);
}

GuesserModel GuesserModel::from_checkpoint(const ad::Checkpoint& ckpt) {
  ad::require_kind(ckpt, "guesser");
  GuesserModel m(guesser_config_from_json(ckpt.metadata.at("config")),
                 vocab_from_json(ckpt.metadata.at("vocab")), 0);
  ad::load_into(ckpt, m.store_);
  return m;
}

}  // namespace gw::agents
