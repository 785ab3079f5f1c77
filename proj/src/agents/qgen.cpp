#include "gw/agents/qgen.hpp"

#include <cmath>

#include "gw/ad/ops.hpp"
#include "gw/agents/oracle.hpp"
#include "gw/core/error.hpp"

namespace gw::agents {

using ad::Graph;
using ad::Var;
using nlohmann::json;
namespace sp = data::special;

json to_json(const QGenConfig& c) {
  return {{"word_dim", c.word_dim},         {"utterance_hidden", c.utterance_hidden},
          {"context_hidden", c.context_hidden}, {"decoder_hidden", c.decoder_hidden},
          {"use_image", c.use_image},       {"image_dim", c.image_dim},
          {"max_len", c.max_len},           {"beam_width", c.beam_width}};
}

QGenConfig qgen_config_from_json(const json& j) {
  QGenConfig c;
  c.word_dim = j.value("word_dim", c.word_dim);
  c.utterance_hidden = j.value("utterance_hidden", c.utterance_hidden);
  c.context_hidden = j.value("context_hidden", c.context_hidden);
  c.decoder_hidden = j.value("decoder_hidden", c.decoder_hidden);
  c.use_image = j.value("use_image", c.use_image);
  c.image_dim = j.value("image_dim", c.image_dim);
  c.max_len = j.value("max_len", c.max_len);
  c.beam_width = j.value("beam_width", c.beam_width);
  return c;
}

std::vector<TokenId> qgen_banned_tokens() {
  return {sp::kPad, sp::kStart, sp::kYes, sp::kNo, sp::kNA};
}

QGenModel::QGenModel(QGenConfig config, data::Vocabulary vocab, std::uint64_t seed)
    : config_(std::move(config)),
      vocab_(std::move(vocab)),
      init_rng_(seed),
      encoder_(store_, "qgen.enc", vocab_.size(), config_.word_dim, config_.utterance_hidden,
               config_.context_hidden, init_rng_) {
  const std::size_t cond = config_.context_hidden + (config_.use_image ? config_.image_dim : 0);
  projection_ = make_linear(store_, "qgen.proj", cond, config_.decoder_hidden, init_rng_);
  decoder_ = ad::make_lstm(store_, "qgen.dec", config_.word_dim, config_.decoder_hidden, init_rng_);
  output_ = make_linear(store_, "qgen.out", config_.decoder_hidden, vocab_.size(), init_rng_);
}

Var QGenModel::initial_hidden(Graph& g, Var context, const ImageMeta& image) const {
  Var cond = context;
  if (config_.use_image) cond = ad::concat({context, image_row(g, image.features, config_.image_dim)}, 1);
  return ad::tanh(apply(g, projection_, cond));
}

Var QGenModel::question_logits(Graph& g, Var context, const ImageMeta& image,
                               std::span<const TokenId> question) const {
  std::vector<TokenId> inputs;
  inputs.reserve(question.size() + 1);
  inputs.push_back(sp::kStart);
  inputs.insert(inputs.end(), question.begin(), question.end());
  ad::LstmState s0{initial_hidden(g, context, image),
                   g.constant(ad::Tensor({1, config_.decoder_hidden}))};
  auto run = ad::lstm_sequence(embed(g, encoder_.embedding(), inputs), s0, decoder_);
  return apply(g, output_, run.hidden_rows);
}

namespace {

std::vector<std::size_t> targets_of(std::span<const TokenId> question) {
  std::vector<std::size_t> t(question.begin(), question.end());
  t.push_back(static_cast<std::size_t>(sp::kStop));
  return t;
}

}  // namespace

Var QGenModel::dialogue_loss(Graph& g, std::span<const EncodedQA> dialogue,
                             const ImageMeta& image) const {
  if (dialogue.empty()) throw ValidationError("qas", "qgen needs at least one question");
  ad::LstmState ctx = encoder_.initial(g);
  std::vector<Var> losses;
  for (const EncodedQA& qa : dialogue) {
    const auto targets = targets_of(qa.question);
    losses.push_back(ad::cross_entropy(question_logits(g, ctx.h, image, qa.question), targets));
    ctx = encoder_.step(g, ctx, qa);
  }
  Var total = losses.front();
  for (std::size_t i = 1; i < losses.size(); ++i) total = ad::add(total, losses[i]);
  return total;
}

QGenModel::TokenErrors QGenModel::token_errors(std::span<const EncodedQA> dialogue,
                                               const ImageMeta& image) const {
  Graph g;
  TokenErrors e;
  ad::LstmState ctx = encoder_.initial(g);
  for (const EncodedQA& qa : dialogue) {
    const auto targets = targets_of(qa.question);
    const Var l = question_logits(g, ctx.h, image, qa.question);
    const ad::Tensor& v = l.value();
    for (std::size_t r = 0; r < targets.size(); ++r) {
      const std::span<const double> row(v.data() + r * v.cols(), v.cols());
      if (argmax(row) != targets[r]) ++e.wrong;
      ++e.total;
    }
    ctx = encoder_.step(g, ctx, qa);
  }
  return e;
}

std::vector<std::vector<double>> QGenModel::step_distributions(
    std::span<const EncodedQA> history, const ImageMeta& image,
    std::span<const TokenId> question) const {
  Graph g;
  const Var l = question_logits(g, encoder_.encode(g, history), image, question);
  const ad::Tensor& v = l.value();
  std::vector<std::vector<double>> out(v.rows(), std::vector<double>(v.cols()));
  for (std::size_t r = 0; r < v.rows(); ++r) {
    ad::softmax_row(std::span<const double>(v.data() + r * v.cols(), v.cols()), out[r]);
  }
  return out;
}

double QGenModel::log_likelihood(std::span<const EncodedQA> history, const ImageMeta& image,
                                 std::span<const TokenId> question) const {
  Graph g;
  const Var l = question_logits(g, encoder_.encode(g, history), image, question);
  const auto targets = targets_of(question);
  return -ad::cross_entropy(l, targets).item();
}

DecoderState QGenModel::decoder_state(std::span<const EncodedQA> history,
                                      const ImageMeta& image) const {
  Graph g;
  const Var h = initial_hidden(g, encoder_.encode(g, history), image);
  DecoderState s;
  s.h.assign(h.value().values().begin(), h.value().values().end());
  s.c.assign(config_.decoder_hidden, 0.0);
  return s;
}

void QGenModel::Stepper::step(const DecoderState& state, TokenId input, DecoderState& next,
                              std::vector<double>& log_probs) const {
  const std::size_t hd = model_.config_.decoder_hidden;
  Graph g;
  ad::LstmState prev{g.constant(ad::Tensor({1, hd}, state.h)),
                     g.constant(ad::Tensor({1, hd}, state.c))};
  const ad::LstmState s =
      ad::lstm_cell(embed(g, model_.encoder_.embedding(), std::span(&input, 1)), prev,
                    model_.decoder_);
  const Var l = apply(g, model_.output_, s.h);
  const auto logits = l.value().values();
  const double lse = ad::log_sum_exp(logits);
  log_probs.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) log_probs[i] = logits[i] - lse;
  next.h.assign(s.h.value().values().begin(), s.h.value().values().end());
  next.c.assign(s.c.value().values().begin(), s.c.value().values().end());
}

std::vector<TokenId> QGenModel::generate(std::span<const EncodedQA> history,
                                         const ImageMeta& image, std::size_t beam_width,
                                         std::size_t max_len) const {
  BeamConfig bc;
  bc.width = beam_width;
  bc.max_len = max_len;
  bc.banned = qgen_banned_tokens();
  const auto best = beam_search(Stepper(*this), decoder_state(history, image), bc);
  std::vector<TokenId> out;
  for (TokenId t : best.tokens) {
    if (t != sp::kStop) out.push_back(t);
  }
  return out;
}

ad::Checkpoint QGenModel::to_checkpoint() const {
  return ad::make_checkpoint("qgen", {{"config", to_json(config_)}, {"vocab", vocab_to_json(vocab_)}},
                             store_);
}

QGenModel QGenModel::from_checkpoint(const ad::Checkpoint& ckpt) {
  ad::require_kind(ckpt, "qgen");
  QGenModel m(qgen_config_from_json(ckpt.metadata.at("config")),
              vocab_from_json(ckpt.metadata.at("vocab")), 0);
  ad::load_into(ckpt, m.store_);
  return m;
}

}  // namespace gw::agents
