#include "gw/train/tasks.hpp"

#include <array>
#include <cmath>

#include "gw/ad/ops.hpp"
#include "gw/core/error.hpp"
#include "gw/core/rng.hpp"

namespace gw::train {

using agents::encode_dialogue;

namespace {

std::vector<OracleTask::Example> oracle_examples(std::span<const GameRecord> games,
                                                 const data::Vocabulary& vocab) {
  std::vector<OracleTask::Example> out;
  for (const GameRecord& g : games) {
    for (const QAPair& qa : g.qas) {
      auto tokens = vocab.encode(qa.question);
      if (tokens.empty()) continue;
      out.push_back({&g, std::move(tokens), qa.answer});
    }
  }
  return out;
}

std::vector<GuesserTask::Example> guesser_examples(std::span<const GameRecord> games,
                                                   const data::Vocabulary& vocab) {
  std::vector<GuesserTask::Example> out;
  for (const GameRecord& g : games) {
    if (g.objects.empty()) continue;
    out.push_back({&g, encode_dialogue(g.qas, vocab), g.target_index()});
  }
  return out;
}

std::vector<QGenTask::Example> qgen_examples(std::span<const GameRecord> games,
                                             const data::Vocabulary& vocab) {
  std::vector<QGenTask::Example> out;
  for (const GameRecord& g : games) {
    if (g.qas.empty()) continue;
    out.push_back({&g, encode_dialogue(g.qas, vocab)});
  }
  return out;
}

}  // namespace

OracleTask::OracleTask(agents::OracleModel& model, std::span<const GameRecord> train,
                       std::span<const GameRecord> valid)
    : model_(model),
      train_(oracle_examples(train, model.vocab())),
      valid_(oracle_examples(valid, model.vocab())) {}

ad::Var OracleTask::loss(ad::Graph& g, std::size_t index) const {
  const Example& e = train_.at(index);
  return ad::cross_entropy(model_.logits(g, e.question, e.game->target(), e.game->image),
                           static_cast<std::size_t>(e.answer));
}

ErrorCount OracleTask::errors(Part part, std::size_t index) const {
  const Example& e = examples(part).at(index);
  const Answer a = model_.predict(e.question, e.game->target(), e.game->image);
  return {a == e.answer ? 0u : 1u, 1};
}

ErrorCount oracle_errors(const agents::OracleModel& model, std::span<const GameRecord> games) {
  OracleTask task(const_cast<agents::OracleModel&>(model), games, {});
  return evaluate(task, Part::Train);
}

GuesserTask::GuesserTask(agents::GuesserModel& model, std::span<const GameRecord> train,
                         std::span<const GameRecord> valid)
    : model_(model),
      train_(guesser_examples(train, model.vocab())),
      valid_(guesser_examples(valid, model.vocab())) {}

ad::Var GuesserTask::loss(ad::Graph& g, std::size_t index) const {
  const Example& e = train_.at(index);
  return ad::cross_entropy(model_.logits(g, e.dialogue, e.game->objects, e.game->image), e.target);
}

ErrorCount GuesserTask::errors(Part part, std::size_t index) const {
  const Example& e = examples(part).at(index);
  const std::size_t k = model_.predict(std::span<const agents::EncodedQA>(e.dialogue),
                                       e.game->objects, e.game->image);
  return {k == e.target ? 0u : 1u, 1};
}

ErrorCount guesser_errors(const agents::GuesserModel& model, std::span<const GameRecord> games) {
  GuesserTask task(const_cast<agents::GuesserModel&>(model), games, {});
  return evaluate(task, Part::Train);
}

std::string_view to_string(QGenMode m) { return m == QGenMode::GroundTruth ? "gt" : "oracle"; }

QGenMode parse_qgen_mode(std::string_view s) {
  if (s == "gt" || s == "GT") return QGenMode::GroundTruth;
  if (s == "oracle" || s == "ORACLE") return QGenMode::Oracle;
  throw ConfigError("unknown qgen mode '" + std::string(s) + "'");
}

std::vector<GameRecord> oracle_conditioned(std::span<const GameRecord> games,
                                           const agents::OracleModel& oracle) {
  std::vector<GameRecord> out(games.begin(), games.end());
  for (GameRecord& g : out) {
    const ObjectRef& target = g.target();
    for (QAPair& qa : g.qas) {
      const auto tokens = oracle.vocab().encode(qa.question);
      if (tokens.empty() && oracle.config().features.has(agents::Feature::Question)) continue;
      qa.answer = oracle.predict(tokens, target, g.image);
    }
  }
  return out;
}

QGenTask::QGenTask(agents::QGenModel& model, std::span<const GameRecord> train,
                   std::span<const GameRecord> valid)
    : model_(model),
      train_(qgen_examples(train, model.vocab())),
      valid_(qgen_examples(valid, model.vocab())) {}

ad::Var QGenTask::loss(ad::Graph& g, std::size_t index) const {
  const Example& e = train_.at(index);
  return model_.dialogue_loss(g, e.dialogue, e.game->image);
}

ErrorCount QGenTask::errors(Part part, std::size_t index) const {
  const Example& e = examples(part).at(index);
  const auto t = model_.token_errors(e.dialogue, e.game->image);
  return {t.wrong, t.total};
}

Answer majority_answer(std::span<const GameRecord> games) {
  std::array<std::size_t, kAnswerCount> counts{};
  for (const GameRecord& g : games) {
    for (const QAPair& qa : g.qas) ++counts[static_cast<std::size_t>(qa.answer)];
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < kAnswerCount; ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  return static_cast<Answer>(best);
}

ErrorCount constant_answer_errors(std::span<const GameRecord> games, Answer answer) {
  ErrorCount e;
  for (const GameRecord& g : games) {
    for (const QAPair& qa : g.qas) {
      e.wrong += qa.answer != answer;
      ++e.total;
    }
  }
  return e;
}

double random_guesser_expected_error(std::span<const GameRecord> games) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const GameRecord& g : games) {
    if (g.objects.empty()) continue;
    sum += 1.0 / static_cast<double>(g.objects.size());
    ++n;
  }
  if (n == 0) throw InsufficientData("no games with objects");
  return 1.0 - sum / static_cast<double>(n);
}

double random_guesser_error_stddev(std::span<const GameRecord> games) {
  double var = 0.0;
  std::size_t n = 0;
  for (const GameRecord& g : games) {
    if (g.objects.empty()) continue;
    const double p = 1.0 / static_cast<double>(g.objects.size());
    var += p * (1.0 - p);
    ++n;
  }
  if (n == 0) throw InsufficientData("no games with objects");
  return std::sqrt(var) / static_cast<double>(n);
}

ErrorCount random_guesser_errors(std::span<const GameRecord> games, std::uint64_t seed) {
  ErrorCount e;
  for (const GameRecord& g : games) {
    if (g.objects.empty()) continue;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(g.game_id)));
    const std::size_t pick = rng.below(g.objects.size());
    e.wrong += pick != g.target_index();
    ++e.total;
  }
  return e;
}

}  // namespace gw::train
