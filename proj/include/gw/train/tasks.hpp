#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "gw/agents/guesser.hpp"
#include "gw/agents/oracle.hpp"
#include "gw/agents/qgen.hpp"
#include "gw/train/trainer.hpp"

namespace gw::train {

// One example per question with a non-empty token sequence; the object is
// the game's target.
class OracleTask : public TrainTask {
 public:
  OracleTask(agents::OracleModel& model, std::span<const GameRecord> train,
             std::span<const GameRecord> valid);

  std::string kind() const override { return "oracle"; }
  ad::ParameterStore& parameters() override { return model_.parameters(); }
  std::size_t size(Part part) const override { return examples(part).size(); }
  ad::Var loss(ad::Graph& g, std::size_t index) const override;
  ErrorCount errors(Part part, std::size_t index) const override;

  struct Example {
    const GameRecord* game;
    std::vector<data::TokenId> question;
    Answer answer;
  };
  const std::vector<Example>& examples(Part part) const {
    return part == Part::Train ? train_ : valid_;
  }

 private:
  agents::OracleModel& model_;
  std::vector<Example> train_, valid_;
};

// Oracle question-level errors over games with a trained model.
ErrorCount oracle_errors(const agents::OracleModel& model, std::span<const GameRecord> games);

// One example per game with at least one object.
class GuesserTask : public TrainTask {
 public:
  GuesserTask(agents::GuesserModel& model, std::span<const GameRecord> train,
              std::span<const GameRecord> valid);

  std::string kind() const override { return "guesser"; }
  ad::ParameterStore& parameters() override { return model_.parameters(); }
  std::size_t size(Part part) const override { return examples(part).size(); }
  ad::Var loss(ad::Graph& g, std::size_t index) const override;
  ErrorCount errors(Part part, std::size_t index) const override;

  struct Example {
    const GameRecord* game;
    std::vector<agents::EncodedQA> dialogue;
    std::size_t target;
  };
  const std::vector<Example>& examples(Part part) const {
    return part == Part::Train ? train_ : valid_;
  }

 private:
  agents::GuesserModel& model_;
  std::vector<Example> train_, valid_;
};

ErrorCount guesser_errors(const agents::GuesserModel& model, std::span<const GameRecord> games);

enum class QGenMode { GroundTruth, Oracle };

std::string_view to_string(QGenMode m);
QGenMode parse_qgen_mode(std::string_view s);  // "gt" | "oracle"

// Replaces every answer with the oracle's prediction for the game's target.
std::vector<GameRecord> oracle_conditioned(std::span<const GameRecord> games,
                                           const agents::OracleModel& oracle);

// One example per game with at least one question. Errors are per-token
// teacher forced mispredictions.
class QGenTask : public TrainTask {
 public:
  QGenTask(agents::QGenModel& model, std::span<const GameRecord> train,
           std::span<const GameRecord> valid);

  std::string kind() const override { return "qgen"; }
  ad::ParameterStore& parameters() override { return model_.parameters(); }
  std::size_t size(Part part) const override { return examples(part).size(); }
  ad::Var loss(ad::Graph& g, std::size_t index) const override;
  ErrorCount errors(Part part, std::size_t index) const override;

  struct Example {
    const GameRecord* game;
    std::vector<agents::EncodedQA> dialogue;
  };
  const std::vector<Example>& examples(Part part) const {
    return part == Part::Train ? train_ : valid_;
  }

 private:
  agents::QGenModel& model_;
  std::vector<Example> train_, valid_;
};

// Most frequent answer (ties: Yes, No, N/A order).
Answer majority_answer(std::span<const GameRecord> games);
ErrorCount constant_answer_errors(std::span<const GameRecord> games, Answer answer);

// 1 - mean(1/K) over games with K >= 1 objects.
double random_guesser_expected_error(std::span<const GameRecord> games);
double random_guesser_error_stddev(std::span<const GameRecord> games);
// Uniform guesses from a per-game seed.
ErrorCount random_guesser_errors(std::span<const GameRecord> games, std::uint64_t seed);

}  // namespace gw::train
