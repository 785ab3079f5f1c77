#include "gw/agents/encoders.hpp"

#include "gw/ad/init.hpp"
#include "gw/ad/ops.hpp"
#include "gw/core/error.hpp"

namespace gw::agents {

using ad::Graph;
using ad::Var;

std::vector<EncodedQA> encode_dialogue(std::span<const QAPair> qas, const data::Vocabulary& vocab) {
  std::vector<EncodedQA> out;
  out.reserve(qas.size());
  for (const QAPair& qa : qas) out.push_back({vocab.encode(qa.question), qa.answer});
  return out;
}

std::vector<TokenId> flatten_dialogue(std::span<const EncodedQA> dialogue) {
  std::vector<TokenId> out;
  for (const EncodedQA& qa : dialogue) {
    out.insert(out.end(), qa.question.begin(), qa.question.end());
    out.push_back(data::answer_token(qa.answer));
  }
  return out;
}

std::vector<TokenId> utterance_tokens(const EncodedQA& qa) {
  std::vector<TokenId> out = qa.question;
  out.push_back(data::answer_token(qa.answer));
  return out;
}

Linear make_linear(ad::ParameterStore& store, const std::string& prefix, std::size_t in,
                   std::size_t out, Rng& rng) {
  Linear l;
  l.weight = &store.add(prefix + ".w", {in, out});
  l.bias = &store.add(prefix + ".b", {1, out});
  ad::glorot_uniform(l.weight->value, rng);
  return l;
}

Var apply(Graph& g, const Linear& layer, Var x) {
  return ad::add(ad::matmul(x, g.parameter(*layer.weight)), g.parameter(*layer.bias));
}

Var embed(Graph& g, ad::Parameter& table, std::span<const TokenId> tokens) {
  return ad::embedding_lookup(g, table, tokens);
}

Var encode_tokens(Graph& g, ad::Parameter& table, const ad::LstmWeights& lstm,
                  std::span<const TokenId> tokens) {
  if (tokens.empty()) return g.constant(ad::Tensor({1, lstm.hidden}));
  return ad::lstm_sequence(embed(g, table, tokens), ad::lstm_zero_state(g, lstm.hidden), lstm)
      .last.h;
}

std::string_view to_string(EncoderKind k) {
  return k == EncoderKind::LstmFlat ? "lstm" : "hred";
}

EncoderKind parse_encoder(std::string_view s) {
  if (s == "lstm" || s == "lstm-flat" || s == "LSTM") return EncoderKind::LstmFlat;
  if (s == "hred" || s == "HRED") return EncoderKind::Hred;
  throw ConfigError("unknown dialogue encoder '" + std::string(s) + "'");
}

FlatEncoder::FlatEncoder(ad::ParameterStore& store, const std::string& prefix,
                         std::size_t vocab_size, std::size_t word_dim, std::size_t hidden,
                         Rng& rng) {
  embedding_ = &store.add(prefix + ".emb", {vocab_size, word_dim});
  ad::glorot_uniform(embedding_->value, rng);
  lstm_ = ad::make_lstm(store, prefix + ".lstm", word_dim, hidden, rng);
}

Var FlatEncoder::encode(Graph& g, std::span<const EncodedQA> dialogue) const {
  const auto tokens = flatten_dialogue(dialogue);
  return encode_tokens(g, *embedding_, lstm_, tokens);
}

HredEncoder::HredEncoder(ad::ParameterStore& store, const std::string& prefix,
                         std::size_t vocab_size, std::size_t word_dim,
                         std::size_t utterance_hidden, std::size_t context_hidden, Rng& rng) {
  embedding_ = &store.add(prefix + ".emb", {vocab_size, word_dim});
  ad::glorot_uniform(embedding_->value, rng);
  utterance_ = ad::make_lstm(store, prefix + ".utt", word_dim, utterance_hidden, rng);
  context_ = ad::make_lstm(store, prefix + ".ctx", utterance_hidden, context_hidden, rng);
}

Var HredEncoder::utterance(Graph& g, const EncodedQA& qa) const {
  const auto tokens = utterance_tokens(qa);
  return encode_tokens(g, *embedding_, utterance_, tokens);
}

ad::LstmState HredEncoder::initial(Graph& g) const {
  return ad::lstm_zero_state(g, context_.hidden);
}

ad::LstmState HredEncoder::step(Graph& g, const ad::LstmState& prev, const EncodedQA& qa) const {
  return ad::lstm_cell(utterance(g, qa), prev, context_);
}

std::vector<Var> HredEncoder::states(Graph& g, std::span<const EncodedQA> dialogue) const {
  std::vector<Var> out;
  ad::LstmState s = initial(g);
  out.push_back(s.h);
  for (const EncodedQA& qa : dialogue) {
    s = step(g, s, qa);
    out.push_back(s.h);
  }
  return out;
}

Var HredEncoder::encode(Graph& g, std::span<const EncodedQA> dialogue) const {
  return states(g, dialogue).back();
}

Var image_row(Graph& g, const std::optional<std::vector<float>>& features, std::size_t dim) {
  ad::Tensor t({1, dim});
  if (features) {
    if (features->size() != dim) {
      throw DimensionError("image_row", "feature vector of length " +
                                            std::to_string(features->size()) + ", expected " +
                                            std::to_string(dim));
    }
    for (std::size_t i = 0; i < dim; ++i) t[i] = (*features)[i];
  }
  return g.constant(std::move(t));
}

}  // namespace gw::agents
