#pragma once

#include <span>
#include <vector>

#include "gw/game/agents.hpp"
#include "gw/train/trainer.hpp"

namespace gw::game {

struct SelfPlayConfig {
  std::size_t n_questions = 5;
};

// Plays one game on the image, objects and target of context through the
// session state machine. The returned record keeps context's game id.
GameRecord self_play(const GameRecord& context, const Asker& asker, const Answerer& answerer,
                     const Guesser& guesser, const SelfPlayConfig& config = {});

enum class DialogueSource { Generated, Human };

struct PipelineResult {
  train::ErrorCount errors;
  std::vector<GameRecord> records;  // in input order
};

// Guesser error over games. Generated mode plays every game with the three
// agents; Human mode feeds the recorded dialogue straight to the guesser
// (asker and answerer unused and may be null).
PipelineResult eval_pipeline(std::span<const GameRecord> games, const Asker* asker,
                             const Answerer* answerer, const Guesser& guesser,
                             DialogueSource source, const SelfPlayConfig& config = {});

}  // namespace gw::game
