#pragma once

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "gw/service/play_service.hpp"

namespace httplib {
class Server;
}

namespace gw::service {

// JSON over HTTP in front of a PlayService:
//   POST /api/sessions                 {role, image_id?, seed?}
//   GET  /api/sessions/{id}
//   POST /api/sessions/{id}/events     {type, payload}
//   GET  /api/sessions/{id}/transcript
//   GET  /api/export?status=finished|all
// Errors answer {"error": kind, "reason"?, "message"} with 400, 404 or 409.
class HttpServer {
 public:
  HttpServer(PlayService& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop(). Also sweeps idle sessions every sweep_interval.
  void serve(std::chrono::milliseconds sweep_interval = std::chrono::seconds(30));
  // bind + serve on a background thread.
  int start(const std::string& host, int port);
  void stop();

 private:
  void routes();

  PlayService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex sweep_mu_;
  std::condition_variable sweep_cv_;
  bool stopping_ = false;
};

}  // namespace gw::service
