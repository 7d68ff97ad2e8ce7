#pragma once

#include <memory>
#include <string>

#include "foodprompt/error.hpp"
#include "foodprompt/service.hpp"

namespace httplib {
class Server;
}

namespace foodprompt {

/// HTTP status used for each library error.
int http_status(ErrorCode code) noexcept;

/// JSON-over-HTTP front end for a SurveyService. Routes:
///   GET  /health
///   POST /sessions
///   POST /sessions/{id}/meals                  {"name"}
///   POST /sessions/{id}/meals/{m}/foods        {"food"}
///   POST /sessions/{id}/meals/{m}/finish
///   POST /sessions/{id}/events/{e}/accept      {"accepted": [...]}
///   POST /sessions/{id}/submit                 {"duration_minutes", "energy_kcal"?, ...}
///   GET  /foods?q=
///   GET  /metrics
class HttpServer {
 public:
  explicit HttpServer(SurveyService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds without serving yet; port 0 picks a free port. Returns the bound
  /// port, or -1.
  int bind(const std::string& host, int port);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  SurveyService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace foodprompt
