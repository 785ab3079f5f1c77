#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gw/game/agents.hpp"
#include "gw/game/session.hpp"

namespace gw::service {

struct AgentSet {
  std::shared_ptr<const game::Asker> asker;
  std::shared_ptr<const game::Answerer> answerer;
  std::shared_ptr<const game::Guesser> guesser;
};

using Clock = std::function<std::chrono::system_clock::time_point()>;

struct ServiceOptions {
  std::filesystem::path data_dir;
  std::size_t n_questions = 5;
  std::chrono::seconds idle_timeout{30 * 60};
  Clock clock = [] { return std::chrono::system_clock::now(); };
};

// Live games between a human and agents. Every event is appended to
// <data_dir>/<session_id>.jsonl before the agents reply; existing logs are
// replayed on construction.
class PlayService {
 public:
  PlayService(std::span<const GameRecord> corpus, AgentSet agents, ServiceOptions options);

  // {session_id, role, state}. Throws NotFound for an unknown image id.
  nlohmann::json create_session(game::Role role, std::optional<ImageId> image_id,
                                std::optional<std::uint64_t> seed);
  nlohmann::json state(const std::string& id);
  // body: {type, payload}; the actor is the session's human role.
  nlohmann::json post_event(const std::string& id, const nlohmann::json& body);
  nlohmann::json transcript(const std::string& id);

  // One record line per session; finished_only keeps sessions with an outcome
  // of success or failure.
  std::string export_sessions(bool finished_only);

  // Finishes idle sessions as incomplete; returns how many.
  std::size_t expire_idle();

  std::size_t size() const;
  std::vector<std::string> session_ids() const;

  // Current state and the state rebuilt from the session's log file.
  game::SessionState current(const std::string& id);
  game::SessionState replay(const std::string& id) const;

  const std::filesystem::path& data_dir() const { return options_.data_dir; }

 private:
  struct Live {
    std::mutex mu;
    std::string id;
    GameId game_id = 0;
    game::Role human = game::Role::Questioner;
    game::SessionState state;
    std::chrono::system_clock::time_point last_activity;
  };

  struct Scene {
    ImageMeta image;
    std::vector<ObjectRef> objects;
  };

  std::shared_ptr<Live> find(const std::string& id) const;
  std::filesystem::path log_path(const std::string& id) const;
  void append(const Live& s, const nlohmann::json& line) const;
  void apply(Live& s, game::Role actor, const game::Event& e, nlohmann::json* agent_log);
  void agent_turns(Live& s, nlohmann::json* agent_log);
  bool expire_if_idle(Live& s);
  nlohmann::json describe(const Live& s) const;
  game::SessionState replay_file(const std::filesystem::path& path, std::string* id,
                                 GameId* game_id, game::Role* human,
                                 std::chrono::system_clock::time_point* last) const;
  void load_existing();

  std::map<ImageId, Scene> scenes_;
  AgentSet agents_;
  ServiceOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Live>> sessions_;
  GameId next_game_id_ = 1;
  std::uint64_t id_counter_ = 0;
};

}  // namespace gw::service
