#include "gw/service/config.hpp"

#include <cstdlib>
#include <fstream>

#include "gw/core/error.hpp"

namespace gw::service {

using nlohmann::json;

std::optional<std::string> getenv_lookup(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

void parse_listen(const std::string& text, std::string& host, int& port) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw ConfigError("listen address '" + text + "' lacks a port");
  try {
    std::size_t used = 0;
    const std::string digits = text.substr(colon + 1);
    const int p = std::stoi(digits, &used);
    if (used != digits.size() || p < 0 || p > 65535) throw std::out_of_range("port");
    port = p;
  } catch (const std::exception&) {
    throw ConfigError("bad port in listen address '" + text + "'");
  }
  host = text.substr(0, colon);
}

namespace {

std::size_t positive(const json& v, const char* key) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ConfigError(std::string(key) + " must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::size_t positive(const std::string& v, const char* key) {
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used == v.size() && n >= 1) return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string(key) + " must be a positive integer");
}

void merge_key(ServiceConfig& c, const std::string& key, const json& v);

}  // namespace

void merge_config(ServiceConfig& c, const json& j) {
  if (!j.is_object()) throw ConfigError("service config must be an object");
  for (const auto& [key, v] : j.items()) {
    try {
      merge_key(c, key, v);
    } catch (const json::exception& e) {
      throw ConfigError("service config key '" + key + "': " + e.what());
    }
  }
}

namespace {

void merge_key(ServiceConfig& c, const std::string& key, const json& v) {
  if (key == "listen") {
    parse_listen(v.get<std::string>(), c.host, c.port);
  } else if (key == "host") {
    c.host = v.get<std::string>();
  } else if (key == "port") {
    c.port = static_cast<int>(positive(v, "port"));
  } else if (key == "data_dir") {
    c.data_dir = v.get<std::string>();
  } else if (key == "corpus") {
    c.corpus = v.get<std::string>();
  } else if (key == "oracle_checkpoint") {
    c.oracle_checkpoint = v.get<std::string>();
  } else if (key == "qgen_checkpoint") {
    c.qgen_checkpoint = v.get<std::string>();
  } else if (key == "guesser_checkpoint") {
    c.guesser_checkpoint = v.get<std::string>();
  } else if (key == "static_dir") {
    c.static_dir = v.get<std::string>();
  } else if (key == "n_questions") {
    c.n_questions = positive(v, "n_questions");
  } else if (key == "idle_timeout_s") {
    c.idle_timeout = std::chrono::seconds(positive(v, "idle_timeout_s"));
  } else {
    throw ConfigError("unknown service config key '" + key + "'");
  }
}

}  // namespace

void merge_env(ServiceConfig& c, const EnvLookup& env) {
  if (auto v = env("GW_LISTEN")) parse_listen(*v, c.host, c.port);
  if (auto v = env("GW_DATA_DIR")) c.data_dir = *v;
  if (auto v = env("GW_CORPUS")) c.corpus = *v;
  if (auto v = env("GW_ORACLE_CKPT")) c.oracle_checkpoint = *v;
  if (auto v = env("GW_QGEN_CKPT")) c.qgen_checkpoint = *v;
  if (auto v = env("GW_GUESSER_CKPT")) c.guesser_checkpoint = *v;
  if (auto v = env("GW_STATIC_DIR")) c.static_dir = *v;
  if (auto v = env("GW_N_QUESTIONS")) c.n_questions = positive(*v, "GW_N_QUESTIONS");
  if (auto v = env("GW_IDLE_TIMEOUT_S")) {
    c.idle_timeout = std::chrono::seconds(positive(*v, "GW_IDLE_TIMEOUT_S"));
  }
}

ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file,
                                  const EnvLookup& env) {
  ServiceConfig c;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw IoError("cannot open config " + file->string());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config " + file->string() + ": " + e.what());
    }
    merge_config(c, j);
  }
  merge_env(c, env);
  return c;
}

json to_json(const ServiceConfig& c) {
  json j{{"host", c.host},
         {"port", c.port},
         {"data_dir", c.data_dir.string()},
         {"corpus", c.corpus.string()},
         {"oracle_checkpoint", c.oracle_checkpoint.string()},
         {"qgen_checkpoint", c.qgen_checkpoint.string()},
         {"guesser_checkpoint", c.guesser_checkpoint.string()},
         {"n_questions", c.n_questions},
         {"idle_timeout_s", c.idle_timeout.count()}};
  if (c.static_dir) j["static_dir"] = c.static_dir->string();
  return j;
}

}  // namespace gw::service
