#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "gw/ad/checkpoint.hpp"
#include "gw/agents/beam_search.hpp"
#include "gw/agents/encoders.hpp"

namespace gw::agents {

struct QGenConfig {
  std::size_t word_dim = 64;
  std::size_t utterance_hidden = 128;
  std::size_t context_hidden = 128;
  std::size_t decoder_hidden = 128;
  bool use_image = true;
  std::size_t image_dim = kDefaultImageFeatureDim;
  std::size_t max_len = 12;
  std::size_t beam_width = 5;
};

nlohmann::json to_json(const QGenConfig& c);
QGenConfig qgen_config_from_json(const nlohmann::json& j);

// Tokens the decoder may never emit.
std::vector<TokenId> qgen_banned_tokens();

// HRED question generator: the context state after the previous pairs and
// the image features set the decoder's initial hidden state.
class QGenModel {
 public:
  QGenModel(QGenConfig config, data::Vocabulary vocab, std::uint64_t seed);
  QGenModel(const QGenModel&) = delete;
  QGenModel& operator=(const QGenModel&) = delete;
  QGenModel(QGenModel&&) = default;
  QGenModel& operator=(QGenModel&&) = default;

  const QGenConfig& config() const { return config_; }
  const data::Vocabulary& vocab() const { return vocab_; }
  ad::ParameterStore& parameters() { return store_; }
  const ad::ParameterStore& parameters() const { return store_; }

  const HredEncoder& encoder() const { return encoder_; }

  // Decoder h0 (1 x decoder_hidden) from a context row and the image.
  ad::Var initial_hidden(ad::Graph& g, ad::Var context, const ImageMeta& image) const;

  // Teacher forced logits: inputs START w1..wn, one row per step (n+1 x V).
  ad::Var question_logits(ad::Graph& g, ad::Var context, const ImageMeta& image,
                          std::span<const TokenId> question) const;

  // Sum over questions j of -log P(q_j | pairs before j, image). Targets
  // always come from dialogue[j].question; answers from dialogue[j].answer
  // only condition later questions.
  ad::Var dialogue_loss(ad::Graph& g, std::span<const EncodedQA> dialogue,
                        const ImageMeta& image) const;

  // Per-token teacher forced argmax mistakes over the dialogue.
  struct TokenErrors {
    std::size_t wrong = 0;
    std::size_t total = 0;
  };
  TokenErrors token_errors(std::span<const EncodedQA> dialogue, const ImageMeta& image) const;

  // Per-step probabilities for question given the dialogue so far.
  std::vector<std::vector<double>> step_distributions(std::span<const EncodedQA> history,
                                                      const ImageMeta& image,
                                                      std::span<const TokenId> question) const;

  double log_likelihood(std::span<const EncodedQA> history, const ImageMeta& image,
                        std::span<const TokenId> question) const;

  DecoderState decoder_state(std::span<const EncodedQA> history, const ImageMeta& image) const;

  // One decoder step, used by beam search.
  class Stepper : public StepModel {
   public:
    explicit Stepper(const QGenModel& m) : model_(m) {}
    std::size_t vocab_size() const override { return model_.vocab_.size(); }
    void step(const DecoderState& state, TokenId input, DecoderState& next,
              std::vector<double>& log_probs) const override;

   private:
    const QGenModel& model_;
  };

  // Question tokens without START/STOP.
  std::vector<TokenId> generate(std::span<const EncodedQA> history, const ImageMeta& image,
                                std::size_t beam_width, std::size_t max_len) const;
  std::vector<TokenId> generate(std::span<const EncodedQA> history, const ImageMeta& image) const {
    return generate(history, image, config_.beam_width, config_.max_len);
  }

  ad::Checkpoint to_checkpoint() const;
  static QGenModel from_checkpoint(const ad::Checkpoint& ckpt);

 private:
  QGenConfig config_;
  data::Vocabulary vocab_;
  ad::ParameterStore store_;
  Rng init_rng_;
  HredEncoder encoder_;
  Linear projection_;
  ad::LstmWeights decoder_;
  Linear output_;
};

}  // namespace gw::agents
