#include "gw/game/session.hpp"

#include <algorithm>
#include <cctype>

#include "gw/core/error.hpp"
#include "gw/data/records.hpp"

namespace gw::game {

using nlohmann::json;

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Questioning: return "questioning";
    case Phase::AwaitingAnswer: return "awaiting_answer";
    case Phase::Guessing: return "guessing";
    case Phase::Finished: return "finished";
  }
  return "?";
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::Questioner: return "questioner";
    case Role::Oracle: return "oracle";
    case Role::System: return "system";
  }
  return "?";
}

Role parse_role(std::string_view s) {
  if (s == "questioner" || s == "Questioner") return Role::Questioner;
  if (s == "oracle" || s == "Oracle") return Role::Oracle;
  if (s == "system") return Role::System;
  throw ValidationError("role", "unknown role '" + std::string(s) + "'");
}

std::string_view to_string(Event::Type t) {
  switch (t) {
    case Event::Type::AskQuestion: return "question";
    case Event::Type::GiveAnswer: return "answer";
    case Event::Type::ReadyToGuess: return "ready";
    case Event::Type::Guess: return "guess";
    case Event::Type::Timeout: return "timeout";
  }
  return "?";
}

json to_json(const Event& e) {
  json j{{"type", to_string(e.type)}};
  switch (e.type) {
    case Event::Type::AskQuestion: j["payload"] = e.text; break;
    case Event::Type::GiveAnswer: j["payload"] = to_string(e.answer); break;
    case Event::Type::Guess: j["payload"] = e.object_id; break;
    default: break;
  }
  return j;
}

namespace {

// payload may be the bare value or an object holding it under key.
const json& payload_value(const json& j, const char* key) {
  if (!j.contains("payload")) throw ValidationError("payload", "missing event payload");
  const json& p = j.at("payload");
  if (p.is_object()) {
    if (!p.contains(key)) throw ValidationError("payload", std::string("missing ") + key);
    return p.at(key);
  }
  return p;
}

}  // namespace

Event event_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ValidationError("type", "event needs a string type");
  }
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "question") {
      const json& p = payload_value(j, "text");
      if (!p.is_string()) throw ValidationError("payload", "question text must be a string");
      return Event::ask(p.get<std::string>());
    }
    if (type == "answer") {
      const json& p = payload_value(j, "answer");
      if (!p.is_string()) throw ValidationError("payload", "answer must be a string");
      return Event::give(parse_answer(p.get<std::string>()));
    }
    if (type == "ready") return Event::ready();
    if (type == "guess") {
      const json& p = payload_value(j, "object_id");
      if (!p.is_number_integer()) throw ValidationError("payload", "object_id must be an integer");
      return Event::guess(p.get<ObjectId>());
    }
    if (type == "timeout") return Event::timeout();
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError("payload", e.what());
  }
  throw ValidationError("type", "unknown event type '" + type + "'");
}

const ObjectRef& SessionState::target() const {
  for (const ObjectRef& o : objects) {
    if (o.object_id == target_id) return o;
  }
  throw ValidationError("target_id", "target not among the objects");
}

std::size_t SessionState::answered() const {
  return static_cast<std::size_t>(
      std::count_if(transcript.begin(), transcript.end(), [](const Turn& t) { return t.answer.has_value(); }));
}

std::vector<QAPair> SessionState::qas() const {
  std::vector<QAPair> out;
  for (const Turn& t : transcript) {
    if (t.answer) out.push_back({t.question, *t.answer});
  }
  return out;
}

SessionState new_session(ImageMeta image, std::vector<ObjectRef> objects, ObjectId target_id) {
  SessionState s;
  s.image = std::move(image);
  s.objects = std::move(objects);
  s.target_id = target_id;
  s.target();
  return s;
}

namespace {

[[noreturn]] void reject(const std::string& reason, const std::string& message) {
  throw ProtocolError(reason, message);
}

void require(Role actor, Role needed, const Event& e) {
  if (actor != needed) {
    reject("wrong-role", std::string(to_string(e.type)) + " must come from the " +
                             std::string(to_string(needed)) + ", not the " +
                             std::string(to_string(actor)));
  }
}

void require(const SessionState& s, Phase needed, const Event& e) {
  if (s.phase != needed) {
    reject("wrong-phase", std::string(to_string(e.type)) + " is not allowed while " +
                              std::string(to_string(s.phase)));
  }
}

}  // namespace

SessionState apply_event(const SessionState& state, Role actor, const Event& event) {
  if (state.phase == Phase::Finished) reject("finished", "the game is over");
  SessionState next = state;
  switch (event.type) {
    case Event::Type::AskQuestion: {
      require(actor, Role::Questioner, event);
      require(state, Phase::Questioning, event);
      const bool blank = std::all_of(event.text.begin(), event.text.end(),
                                     [](unsigned char c) { return std::isspace(c); });
      if (blank) reject("empty-question", "question text is empty");
      next.transcript.push_back({event.text, std::nullopt});
      next.phase = Phase::AwaitingAnswer;
      break;
    }
    case Event::Type::GiveAnswer:
      require(actor, Role::Oracle, event);
      require(state, Phase::AwaitingAnswer, event);
      next.transcript.back().answer = event.answer;
      next.phase = Phase::Questioning;
      break;
    case Event::Type::ReadyToGuess:
      require(actor, Role::Questioner, event);
      require(state, Phase::Questioning, event);
      if (state.answered() == 0) reject("no-questions", "ask at least one question first");
      next.phase = Phase::Guessing;
      break;
    case Event::Type::Guess: {
      require(actor, Role::Questioner, event);
      require(state, Phase::Guessing, event);
      const bool known = std::any_of(state.objects.begin(), state.objects.end(),
                                     [&](const ObjectRef& o) { return o.object_id == event.object_id; });
      if (!known) reject("unknown-object", "no object " + std::to_string(event.object_id));
      next.guess_id = event.object_id;
      next.outcome = event.object_id == state.target_id ? GameStatus::Success : GameStatus::Failure;
      next.phase = Phase::Finished;
      break;
    }
    case Event::Type::Timeout:
      require(actor, Role::System, event);
      if (next.phase == Phase::AwaitingAnswer) next.transcript.pop_back();
      next.outcome = GameStatus::Incomplete;
      next.phase = Phase::Finished;
      break;
  }
  return next;
}

GameRecord to_record(const SessionState& state, GameId game_id) {
  GameRecord r;
  r.game_id = game_id;
  r.image = state.image;
  r.objects = state.objects;
  r.target_id = state.target_id;
  r.qas = state.qas();
  r.status = state.outcome.value_or(GameStatus::Incomplete);
  if (r.status != GameStatus::Incomplete) r.guess_id = state.guess_id;
  return r;
}

namespace {

json object_json(const ObjectRef& o) {
  return {{"object_id", o.object_id},
          {"category_id", o.category_id},
          {"category", o.category_name},
          {"bbox", {o.bbox.x, o.bbox.y, o.bbox.w, o.bbox.h}},
          {"area", o.area}};
}

}  // namespace

json view(const SessionState& s, Role role) {
  json image{{"image_id", s.image.image_id}, {"width", s.image.width}, {"height", s.image.height}};
  if (s.image.file_name) image["file_name"] = *s.image.file_name;
  json transcript = json::array();
  for (const Turn& t : s.transcript) {
    json turn{{"question", t.question}};
    turn["answer"] = t.answer ? json(std::string(to_string(*t.answer))) : json(nullptr);
    transcript.push_back(std::move(turn));
  }
  json j{{"phase", to_string(s.phase)},
         {"image", std::move(image)},
         {"transcript", std::move(transcript)},
         {"questions_answered", s.answered()}};
  const bool reveal_objects = role != Role::Questioner || s.phase == Phase::Guessing ||
                              s.phase == Phase::Finished;
  json objects = json::array();
  if (reveal_objects && role != Role::Oracle) {
    for (const ObjectRef& o : s.objects) objects.push_back(object_json(o));
  }
  j["objects"] = std::move(objects);
  if (role != Role::Questioner || s.phase == Phase::Finished) j["target"] = object_json(s.target());
  if (s.outcome) j["outcome"] = to_string(*s.outcome);
  if (s.guess_id) j["guess_id"] = *s.guess_id;
  return j;
}

}  // namespace gw::game
