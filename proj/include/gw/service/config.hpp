#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

namespace gw::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "gw-sessions";
  std::filesystem::path corpus;
  std::filesystem::path oracle_checkpoint;
  std::filesystem::path qgen_checkpoint;
  std::filesystem::path guesser_checkpoint;
  std::optional<std::filesystem::path> static_dir;
  std::size_t n_questions = 5;
  std::chrono::seconds idle_timeout{30 * 60};
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Process environment.
std::optional<std::string> getenv_lookup(const std::string& name);

// Keys: listen ("host:port"), host, port, data_dir, corpus, oracle_checkpoint,
// qgen_checkpoint, guesser_checkpoint, static_dir, n_questions,
// idle_timeout_s. Unknown keys throw ConfigError.
void merge_config(ServiceConfig& c, const nlohmann::json& j);

// GW_LISTEN, GW_DATA_DIR, GW_CORPUS, GW_ORACLE_CKPT, GW_QGEN_CKPT,
// GW_GUESSER_CKPT, GW_STATIC_DIR, GW_N_QUESTIONS, GW_IDLE_TIMEOUT_S.
void merge_env(ServiceConfig& c, const EnvLookup& env);

// Defaults, then the file when given, then env.
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file,
                                  const EnvLookup& env = getenv_lookup);

void parse_listen(const std::string& text, std::string& host, int& port);

nlohmann::json to_json(const ServiceConfig& c);

}  // namespace gw::service
