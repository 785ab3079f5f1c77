#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gw/core/types.hpp"

namespace gw::game {

enum class Phase { Questioning, AwaitingAnswer, Guessing, Finished };
enum class Role { Questioner, Oracle, System };

std::string_view to_string(Phase p);
std::string_view to_string(Role r);
Role parse_role(std::string_view s);

struct Event {
  enum class Type { AskQuestion, GiveAnswer, ReadyToGuess, Guess, Timeout };
  Type type = Type::AskQuestion;
  std::string text;                 // AskQuestion
  Answer answer = Answer::NA;       // GiveAnswer
  ObjectId object_id = 0;           // Guess

  static Event ask(std::string q) { return {Type::AskQuestion, std::move(q), Answer::NA, 0}; }
  static Event give(Answer a) { return {Type::GiveAnswer, {}, a, 0}; }
  static Event ready() { return {Type::ReadyToGuess, {}, Answer::NA, 0}; }
  static Event guess(ObjectId id) { return {Type::Guess, {}, Answer::NA, id}; }
  static Event timeout() { return {Type::Timeout, {}, Answer::NA, 0}; }
};

std::string_view to_string(Event::Type t);
nlohmann::json to_json(const Event& e);
Event event_from_json(const nlohmann::json& j);

struct Turn {
  std::string question;
  std::optional<Answer> answer;  // empty while awaiting the oracle
};

struct SessionState {
  Phase phase = Phase::Questioning;
  ImageMeta image;
  std::vector<ObjectRef> objects;
  ObjectId target_id = 0;
  std::vector<Turn> transcript;
  std::optional<ObjectId> guess_id;
  std::optional<GameStatus> outcome;  // set once Finished

  const ObjectRef& target() const;
  std::size_t answered() const;
  std::vector<QAPair> qas() const;  // answered turns only
};

// Throws ValidationError when the target is not among the objects.
SessionState new_session(ImageMeta image, std::vector<ObjectRef> objects, ObjectId target_id);

// Legal moves:
//   Questioner AskQuestion   Questioning    -> AwaitingAnswer
//   Oracle     GiveAnswer    AwaitingAnswer -> Questioning
//   Questioner ReadyToGuess  Questioning    -> Guessing (after >= 1 answer)
//   Questioner Guess         Guessing       -> Finished
//   System     Timeout       any but Finished -> Finished (incomplete)
// Anything else throws ProtocolError; the input state is never modified.
SessionState apply_event(const SessionState& state, Role actor, const Event& event);

// Corpus record of the session; status incomplete unless Finished with a guess.
GameRecord to_record(const SessionState& state, GameId game_id);

// State as seen by a role. The questioner sees objects only from Guessing on
// and the target only once Finished.
nlohmann::json view(const SessionState& state, Role role);

}  // namespace gw::game
