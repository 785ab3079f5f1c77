#include "gw/game/self_play.hpp"

#include <exception>

#include "gw/core/error.hpp"
#include "gw/game/session.hpp"

namespace gw::game {

GameRecord self_play(const GameRecord& context, const Asker& asker, const Answerer& answerer,
                     const Guesser& guesser, const SelfPlayConfig& config) {
  if (config.n_questions < 1) throw ConfigError("self-play needs at least one question");
  SessionState s = new_session(context.image, context.objects, context.target_id);
  for (std::size_t j = 0; j < config.n_questions; ++j) {
    const auto history = s.qas();
    s = apply_event(s, Role::Questioner, Event::ask(asker.ask(s.image, history)));
    s = apply_event(s, Role::Oracle,
                    Event::give(answerer.answer(s.transcript.back().question, s.target(), s.image)));
  }
  s = apply_event(s, Role::Questioner, Event::ready());
  const auto qas = s.qas();
  const std::size_t k = guesser.guess({qas, s.objects, s.image, context.game_id});
  s = apply_event(s, Role::Questioner, Event::guess(s.objects.at(k).object_id));
  return to_record(s, context.game_id);
}

PipelineResult eval_pipeline(std::span<const GameRecord> games, const Asker* asker,
                             const Answerer* answerer, const Guesser& guesser,
                             DialogueSource source, const SelfPlayConfig& config) {
  if (games.empty()) throw InsufficientData("evaluation split is empty");
  if (source == DialogueSource::Generated && (!asker || !answerer)) {
    throw ConfigError("generated dialogues need an asker and an answerer");
  }
  PipelineResult result;
  result.records.resize(games.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(games.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const GameRecord& g = games[static_cast<std::size_t>(i)];
      if (source == DialogueSource::Generated) {
        result.records[i] = self_play(g, *asker, *answerer, guesser, config);
      } else {
        GameRecord r = g;
        const std::size_t k = guesser.guess({g.qas, g.objects, g.image, g.game_id});
        r.guess_id = g.objects.at(k).object_id;
        r.status = *r.guess_id == g.target_id ? GameStatus::Success : GameStatus::Failure;
        result.records[i] = std::move(r);
      }
    } catch (...) {
#pragma omp critical(gw_pipeline_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (const GameRecord& r : result.records) {
    result.errors.wrong += r.status != GameStatus::Success;
    ++result.errors.total;
  }
  return result;
}

}  // namespace gw::game
