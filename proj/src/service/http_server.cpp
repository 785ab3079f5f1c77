#include "gw/service/http_server.hpp"

#include <httplib.h>

#include <iostream>

#include "gw/core/error.hpp"

namespace gw::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const ProtocolError& e) {
    send_json(res, 409, {{"error", e.kind()}, {"reason", e.reason()}, {"message", e.what()}});
  } catch (const NotFound& e) {
    send_json(res, 404, {{"error", e.kind()}, {"message", e.what()}});
  } catch (const Error& e) {
    send_json(res, 400, {{"error", e.kind()}, {"message", e.what()}});
  } catch (const json::exception& e) {
    send_json(res, 400, {{"error", "parse"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    send_json(res, 500, {{"error", "internal"}, {"message", e.what()}});
  }
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw ParseError(1, std::string("request body: ") + e.what());
  }
}

}  // namespace

HttpServer::HttpServer(PlayService& service, std::optional<std::filesystem::path> static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  routes();
  if (static_dir && !server_->set_mount_point("/", static_dir->string())) {
    throw ConfigError("static directory " + static_dir->string() + " does not exist");
  }
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::routes() {
  server_->Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      if (!body.is_object() || !body.contains("role") || !body.at("role").is_string()) {
        throw ValidationError("role", "request needs a role");
      }
      const game::Role role = game::parse_role(body.at("role").get<std::string>());
      std::optional<ImageId> image;
      if (body.contains("image_id") && !body.at("image_id").is_null()) {
        image = body.at("image_id").get<ImageId>();
      }
      std::optional<std::uint64_t> seed;
      if (body.contains("seed") && !body.at("seed").is_null()) {
        seed = body.at("seed").get<std::uint64_t>();
      }
      send_json(res, 201, service_.create_session(role, image, seed));
    });
  });
  server_->Get(R"(/api/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service_.state(req.matches[1])); });
  });
  server_->Post(R"(/api/sessions/([^/]+)/events)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    send_json(res, 200, service_.post_event(req.matches[1], parse_body(req)));
                  });
                });
  server_->Get(R"(/api/sessions/([^/]+)/transcript)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] { send_json(res, 200, service_.transcript(req.matches[1])); });
               });
  server_->Get("/api/export", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string status = req.has_param("status") ? req.get_param_value("status") : "finished";
      if (status != "finished" && status != "all") {
        throw ValidationError("status", "status must be finished or all");
      }
      res.status = 200;
      res.set_content(service_.export_sessions(status == "finished"), "application/x-ndjson");
    });
  });
}

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw IoError("cannot bind " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::serve(std::chrono::milliseconds sweep_interval) {
  std::thread sweeper([this, sweep_interval] {
    std::unique_lock lock(sweep_mu_);
    while (!sweep_cv_.wait_for(lock, sweep_interval, [this] { return stopping_; })) {
      try {
        service_.expire_idle();
      } catch (const std::exception& e) {
        std::cerr << "idle sweep failed: " << e.what() << '\n';
      }
    }
  });
  server_->listen_after_bind();
  {
    std::lock_guard lock(sweep_mu_);
    stopping_ = true;
  }
  sweep_cv_.notify_all();
  sweeper.join();
}

int HttpServer::start(const std::string& host, int port) {
  const int p = bind(host, port);
  thread_ = std::thread([this] { serve(); });
  server_->wait_until_ready();
  return p;
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace gw::service
