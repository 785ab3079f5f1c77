#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gw/ad/checkpoint.hpp"
#include "gw/agents/encoders.hpp"

namespace gw::agents {

struct GuesserConfig {
  EncoderKind encoder = EncoderKind::LstmFlat;
  std::size_t word_dim = 64;
  std::size_t hidden = 128;            // flat LSTM, or HRED context
  std::size_t utterance_hidden = 128;  // HRED only
  bool use_image = false;
  std::size_t image_dim = kDefaultImageFeatureDim;
  std::size_t category_dim = 64;
  std::size_t object_hidden = 128;
  std::size_t num_categories = 91;

  std::size_t state_size() const { return hidden + (use_image ? image_dim : 0); }
};

nlohmann::json to_json(const GuesserConfig& c);
GuesserConfig guesser_config_from_json(const nlohmann::json& j);

// Scores each candidate by the dot product of the dialogue state with a
// shared MLP embedding of (spatial, category).
class GuesserModel {
 public:
  GuesserModel(GuesserConfig config, data::Vocabulary vocab, std::uint64_t seed);
  GuesserModel(const GuesserModel&) = delete;
  GuesserModel& operator=(const GuesserModel&) = delete;
  GuesserModel(GuesserModel&&) = default;
  GuesserModel& operator=(GuesserModel&&) = default;

  const GuesserConfig& config() const { return config_; }
  const data::Vocabulary& vocab() const { return vocab_; }
  ad::ParameterStore& parameters() { return store_; }
  const ad::ParameterStore& parameters() const { return store_; }

  ad::Var dialogue_state(ad::Graph& g, std::span<const EncodedQA> dialogue,
                         const ImageMeta& image) const;
  ad::Var object_embeddings(ad::Graph& g, std::span<const ObjectRef> objects,
                            const ImageMeta& image) const;  // K x state_size
  // 1 x K scores.
  ad::Var logits(ad::Graph& g, std::span<const EncodedQA> dialogue,
                 std::span<const ObjectRef> objects, const ImageMeta& image) const;

  std::vector<double> distribution(std::span<const EncodedQA> dialogue,
                                   std::span<const ObjectRef> objects,
                                   const ImageMeta& image) const;
  // Index into objects; lowest index among equal scores.
  std::size_t predict(std::span<const EncodedQA> dialogue, std::span<const ObjectRef> objects,
                      const ImageMeta& image) const;
  std::size_t predict(std::span<const QAPair> dialogue, std::span<const ObjectRef> objects,
                      const ImageMeta& image) const;

  ad::Checkpoint to_checkpoint() const;
  static GuesserModel from_checkpoint(const ad::Checkpoint& ckpt);

 private:
  GuesserConfig config_;
  data::Vocabulary vocab_;
  ad::ParameterStore store_;
  std::unique_ptr<FlatEncoder> flat_;
  std::unique_ptr<HredEncoder> hred_;
  ad::Parameter* category_embedding_ = nullptr;
  Linear object_hidden_;
  Linear object_output_;
};

}  // namespace gw::agents
