#include "gw/service/play_service.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "gw/core/error.hpp"
#include "gw/core/geometry.hpp"
#include "gw/core/rng.hpp"
#include "gw/data/records.hpp"

namespace gw::service {

using game::Event;
using game::Role;
using game::SessionState;
using nlohmann::json;

namespace {

std::int64_t to_ms(std::chrono::system_clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

std::chrono::system_clock::time_point from_ms(std::int64_t ms) {
  return std::chrono::system_clock::time_point(std::chrono::milliseconds(ms));
}

std::string hex_id(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

PlayService::PlayService(std::span<const GameRecord> corpus, AgentSet agents,
                         ServiceOptions options)
    : agents_(std::move(agents)), options_(std::move(options)) {
  for (const GameRecord& g : corpus) {
    if (!scenes_.count(g.image.image_id)) scenes_[g.image.image_id] = {g.image, g.objects};
  }
  if (scenes_.empty()) throw InsufficientData("play service needs a non-empty corpus");
  if (options_.n_questions < 1) throw ConfigError("n_questions must be at least 1");
  std::filesystem::create_directories(options_.data_dir);
  id_counter_ = std::random_device{}();
  load_existing();
}

std::filesystem::path PlayService::log_path(const std::string& id) const {
  return options_.data_dir / (id + ".jsonl");
}

void PlayService::append(const Live& s, const json& line) const {
  std::ofstream out(log_path(s.id), std::ios::app);
  out << line.dump() << '\n';
  out.flush();
  if (!out) throw IoError("cannot append to the log of session " + s.id);
}

std::shared_ptr<PlayService::Live> PlayService::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("no session '" + id + "'");
  return it->second;
}

void PlayService::apply(Live& s, Role actor, const Event& e, json* agent_log) {
  SessionState next = game::apply_event(s.state, actor, e);
  const auto now = options_.clock();
  append(s, {{"ts", to_ms(now)}, {"actor", game::to_string(actor)}, {"event", game::to_json(e)}});
  s.state = std::move(next);
  s.last_activity = now;
  if (agent_log && actor != s.human) {
    json entry = game::to_json(e);
    entry["actor"] = game::to_string(actor);
    agent_log->push_back(std::move(entry));
  }
}

void PlayService::agent_turns(Live& s, json* agent_log) {
  using game::Phase;
  if (s.human == Role::Questioner) {
    if (s.state.phase == Phase::AwaitingAnswer) {
      const Answer a =
          agents_.answerer->answer(s.state.transcript.back().question, s.state.target(), s.state.image);
      apply(s, Role::Oracle, Event::give(a), agent_log);
    }
    return;
  }
  if (s.state.phase != Phase::Questioning) return;
  if (s.state.answered() < options_.n_questions) {
    const auto history = s.state.qas();
    apply(s, Role::Questioner, Event::ask(agents_.asker->ask(s.state.image, history)), agent_log);
    return;
  }
  apply(s, Role::Questioner, Event::ready(), agent_log);
  const auto qas = s.state.qas();
  const std::size_t k = agents_.guesser->guess({qas, s.state.objects, s.state.image, s.game_id});
  apply(s, Role::Questioner, Event::guess(s.state.objects.at(k).object_id), agent_log);
}

json PlayService::describe(const Live& s) const {
  return {{"session_id", s.id}, {"role", game::to_string(s.human)}, {"state", game::view(s.state, s.human)}};
}

json PlayService::create_session(Role role, std::optional<ImageId> image_id,
                                 std::optional<std::uint64_t> seed) {
  if (role == Role::System) throw ValidationError("role", "humans play questioner or oracle");
  const std::uint64_t used_seed = seed.value_or(std::random_device{}());
  Rng rng(used_seed);
  const Scene* scene = nullptr;
  if (image_id) {
    auto it = scenes_.find(*image_id);
    if (it == scenes_.end()) throw NotFound("no image " + std::to_string(*image_id));
    scene = &it->second;
  } else {
    auto it = scenes_.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(rng.below(scenes_.size())));
    scene = &it->second;
  }
  std::vector<const ObjectRef*> pool;
  for (const ObjectRef& o : scene->objects) {
    if (is_eligible_object(o)) pool.push_back(&o);
  }
  if (pool.empty()) {
    for (const ObjectRef& o : scene->objects) pool.push_back(&o);
  }
  if (pool.empty()) throw InsufficientData("image has no objects");
  const ObjectId target = pool[rng.below(pool.size())]->object_id;

  auto s = std::make_shared<Live>();
  s->human = role;
  s->state = game::new_session(scene->image, scene->objects, target);
  s->last_activity = options_.clock();
  {
    std::lock_guard lock(mu_);
    do {
      s->id = hex_id(mix_seed(id_counter_++, used_seed));
    } while (sessions_.count(s->id) || std::filesystem::exists(log_path(s->id)));
    s->game_id = next_game_id_++;
    sessions_[s->id] = s;
  }
  std::lock_guard lock(s->mu);
  append(*s, {{"ts", to_ms(s->last_activity)},
              {"kind", "create"},
              {"session_id", s->id},
              {"game_id", s->game_id},
              {"role", game::to_string(role)},
              {"image_id", scene->image.image_id},
              {"target_id", target},
              {"seed", used_seed}});
  json agent_log = json::array();
  agent_turns(*s, &agent_log);
  json out = describe(*s);
  out["agent_events"] = std::move(agent_log);
  return out;
}

bool PlayService::expire_if_idle(Live& s) {
  if (s.state.phase == game::Phase::Finished) return false;
  if (options_.clock() - s.last_activity < options_.idle_timeout) return false;
  apply(s, Role::System, Event::timeout(), nullptr);
  return true;
}

json PlayService::state(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  expire_if_idle(*s);
  return describe(*s);
}

json PlayService::post_event(const std::string& id, const json& body) {
  auto s = find(id);
  const Event e = game::event_from_json(body);
  if (e.type == Event::Type::Timeout) throw ProtocolError("wrong-role", "timeout is not a player move");
  std::lock_guard lock(s->mu);
  expire_if_idle(*s);
  apply(*s, s->human, e, nullptr);
  json agent_log = json::array();
  agent_turns(*s, &agent_log);
  json out = describe(*s);
  out["agent_events"] = std::move(agent_log);
  return out;
}

json PlayService::transcript(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return game::view(s->state, s->human).at("transcript");
}

std::string PlayService::export_sessions(bool finished_only) {
  std::vector<std::shared_ptr<Live>> all;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, s] : sessions_) all.push_back(s);
  }
  std::vector<GameRecord> records;
  for (const auto& s : all) {
    std::lock_guard lock(s->mu);
    const auto& outcome = s->state.outcome;
    const bool finished = outcome && *outcome != GameStatus::Incomplete;
    if (finished_only && !finished) continue;
    records.push_back(game::to_record(s->state, s->game_id));
  }
  std::sort(records.begin(), records.end(),
            [](const GameRecord& a, const GameRecord& b) { return a.game_id < b.game_id; });
  std::ostringstream out;
  data::write_games(records, out);
  return out.str();
}

std::size_t PlayService::expire_idle() {
  std::vector<std::shared_ptr<Live>> all;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, s] : sessions_) all.push_back(s);
  }
  std::size_t n = 0;
  for (const auto& s : all) {
    std::lock_guard lock(s->mu);
    n += expire_if_idle(*s);
  }
  return n;
}

std::size_t PlayService::size() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

std::vector<std::string> PlayService::session_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  for (const auto& entry : sessions_) ids.push_back(entry.first);
  return ids;
}

SessionState PlayService::current(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->state;
}

SessionState PlayService::replay(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return replay_file(log_path(id), nullptr, nullptr, nullptr, nullptr);
}

SessionState PlayService::replay_file(const std::filesystem::path& path, std::string* id,
                                      GameId* game_id, Role* human,
                                      std::chrono::system_clock::time_point* last) const {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  SessionState state;
  bool created = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, path.string() + ": " + e.what());
    }
    if (!created) {
      if (j.value("kind", "") != "create") throw ParseError(line_no, "log does not start with create");
      const auto it = scenes_.find(j.at("image_id").get<ImageId>());
      if (it == scenes_.end()) throw NotFound("log refers to an image missing from the corpus");
      state = game::new_session(it->second.image, it->second.objects, j.at("target_id").get<ObjectId>());
      if (id) *id = j.at("session_id").get<std::string>();
      if (game_id) *game_id = j.at("game_id").get<GameId>();
      if (human) *human = game::parse_role(j.at("role").get<std::string>());
      created = true;
    } else {
      state = game::apply_event(state, game::parse_role(j.at("actor").get<std::string>()),
                                game::event_from_json(j.at("event")));
    }
    if (last) *last = from_ms(j.at("ts").get<std::int64_t>());
  }
  if (!created) throw ParseError(line_no, "empty session log " + path.string());
  return state;
}

void PlayService::load_existing() {
  for (const auto& entry : std::filesystem::directory_iterator(options_.data_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    auto s = std::make_shared<Live>();
    try {
      s->state = replay_file(entry.path(), &s->id, &s->game_id, &s->human, &s->last_activity);
    } catch (const Error& e) {
      std::cerr << "skipping session log " << entry.path() << ": " << e.what() << '\n';
      continue;
    }
    next_game_id_ = std::max(next_game_id_, s->game_id + 1);
    sessions_[s->id] = std::move(s);
  }
}

}  // namespace gw::service
