#pragma once

#include <array>
#include <cstdint>
#include <span>

#include <json.hpp>

#include "gw/ad/checkpoint.hpp"
#include "gw/agents/encoders.hpp"
#include "gw/agents/feature_set.hpp"

namespace gw::agents {

struct OracleConfig {
  FeatureSet features{Feature::Question, Feature::Category, Feature::Spatial};
  std::size_t word_dim = 64;
  std::size_t hidden = 128;
  std::size_t category_dim = 64;
  std::size_t mlp_hidden = 128;
  std::size_t image_dim = kDefaultImageFeatureDim;
  std::size_t num_categories = 91;  // ids 0..num_categories-1

  std::size_t input_size() const;
};

nlohmann::json to_json(const OracleConfig& c);
OracleConfig oracle_config_from_json(const nlohmann::json& j);

using AnswerDistribution = std::array<double, kAnswerCount>;

// Answers a question about one object with a single hidden layer MLP over
// the concatenation (image, crop, spatial, category, question).
class OracleModel {
 public:
  OracleModel(OracleConfig config, data::Vocabulary vocab, std::uint64_t seed);
  OracleModel(const OracleModel&) = delete;
  OracleModel& operator=(const OracleModel&) = delete;
  OracleModel(OracleModel&&) = default;
  OracleModel& operator=(OracleModel&&) = default;

  const OracleConfig& config() const { return config_; }
  const data::Vocabulary& vocab() const { return vocab_; }
  ad::ParameterStore& parameters() { return store_; }
  const ad::ParameterStore& parameters() const { return store_; }

  // 1 x 3 logits ordered Yes, No, N/A.
  ad::Var logits(ad::Graph& g, std::span<const TokenId> question, const ObjectRef& object,
                 const ImageMeta& image) const;

  AnswerDistribution distribution(std::span<const TokenId> question, const ObjectRef& object,
                                  const ImageMeta& image) const;
  Answer predict(std::span<const TokenId> question, const ObjectRef& object,
                 const ImageMeta& image) const;
  Answer answer(std::string_view question, const ObjectRef& object, const ImageMeta& image) const;

  ad::Checkpoint to_checkpoint() const;
  static OracleModel from_checkpoint(const ad::Checkpoint& ckpt);

 private:
  OracleConfig config_;
  data::Vocabulary vocab_;
  ad::ParameterStore store_;
  ad::Parameter* word_embedding_ = nullptr;
  ad::LstmWeights question_lstm_;
  ad::Parameter* category_embedding_ = nullptr;
  Linear hidden_;
  Linear output_;
};

// Index of the largest entry, lowest index on ties.
std::size_t argmax(std::span<const double> values);

nlohmann::json vocab_to_json(const data::Vocabulary& v);
data::Vocabulary vocab_from_json(const nlohmann::json& j);

}  // namespace gw::agents
