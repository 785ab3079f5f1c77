#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gw/ad/graph.hpp"
#include "gw/ad/lstm.hpp"
#include "gw/ad/parameters.hpp"
#include "gw/core/rng.hpp"
#include "gw/core/types.hpp"
#include "gw/data/vocabulary.hpp"

namespace gw::agents {

using data::TokenId;

struct EncodedQA {
  std::vector<TokenId> question;
  Answer answer = Answer::NA;
};

std::vector<EncodedQA> encode_dialogue(std::span<const QAPair> qas, const data::Vocabulary& vocab);

// q1 tokens, answer token, q2 tokens, answer token, ...
std::vector<TokenId> flatten_dialogue(std::span<const EncodedQA> dialogue);

// Question tokens followed by the answer token.
std::vector<TokenId> utterance_tokens(const EncodedQA& qa);

// Affine map x * W + b, W is in x out.
struct Linear {
  ad::Parameter* weight = nullptr;
  ad::Parameter* bias = nullptr;
};

Linear make_linear(ad::ParameterStore& store, const std::string& prefix, std::size_t in,
                   std::size_t out, Rng& rng);
ad::Var apply(ad::Graph& g, const Linear& layer, ad::Var x);

// Token sequence -> embedding rows (T x word_dim).
ad::Var embed(ad::Graph& g, ad::Parameter& table, std::span<const TokenId> tokens);

// Final hidden state of an LSTM run over an embedded token sequence; zeros
// for an empty sequence.
ad::Var encode_tokens(ad::Graph& g, ad::Parameter& table, const ad::LstmWeights& lstm,
                      std::span<const TokenId> tokens);

enum class EncoderKind { LstmFlat, Hred };

std::string_view to_string(EncoderKind k);
EncoderKind parse_encoder(std::string_view s);  // "lstm" | "hred"

// Dialogue encoder reading the whole flattened dialogue with one LSTM.
class FlatEncoder {
 public:
  FlatEncoder(ad::ParameterStore& store, const std::string& prefix, std::size_t vocab_size,
              std::size_t word_dim, std::size_t hidden, Rng& rng);

  ad::Var encode(ad::Graph& g, std::span<const EncodedQA> dialogue) const;
  std::size_t output_size() const { return lstm_.hidden; }

 private:
  ad::Parameter* embedding_;
  ad::LstmWeights lstm_;
};

// Two-level encoder: an utterance LSTM reads each question with its answer,
// and a context LSTM consumes one utterance vector per step.
class HredEncoder {
 public:
  HredEncoder(ad::ParameterStore& store, const std::string& prefix, std::size_t vocab_size,
              std::size_t word_dim, std::size_t utterance_hidden, std::size_t context_hidden,
              Rng& rng);

  ad::Var utterance(ad::Graph& g, const EncodedQA& qa) const;
  ad::LstmState step(ad::Graph& g, const ad::LstmState& prev, const EncodedQA& qa) const;
  ad::LstmState initial(ad::Graph& g) const;

  // Context hidden state after 0, 1, ..., J pairs (J + 1 entries).
  std::vector<ad::Var> states(ad::Graph& g, std::span<const EncodedQA> dialogue) const;
  ad::Var encode(ad::Graph& g, std::span<const EncodedQA> dialogue) const;

  std::size_t output_size() const { return context_.hidden; }
  ad::Parameter& embedding() const { return *embedding_; }

 private:
  ad::Parameter* embedding_;
  ad::LstmWeights utterance_;
  ad::LstmWeights context_;
};

// Image feature row (1 x dim), zeros when the image carries none.
ad::Var image_row(ad::Graph& g, const std::optional<std::vector<float>>& features,
                  std::size_t dim);

}  // namespace gw::agents
