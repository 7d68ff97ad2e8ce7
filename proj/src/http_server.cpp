#include "foodprompt/http_server.hpp"

#include <httplib.h>

#include "foodprompt/persistence.hpp"

namespace foodprompt {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownMeal:
    case ErrorCode::UnknownEvent:
      return 404;
    case ErrorCode::SessionClosed:
    case ErrorCode::MealFinished:
    case ErrorCode::EventAnswered:
      return 409;
    case ErrorCode::ArmUnavailable:
      return 503;
    case ErrorCode::IoError:
      return 500;
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyFoodCode:
    case ErrorCode::InvalidFoodCode:
      return 400;
    default:
      return 422;
  }
}

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  reply(res, http_status(code), {{"error", std::string(to_string(code))}, {"message", message}});
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON body: ") + e.what());
  }
}

std::size_t index_param(const std::string& text) {
  try {
    return static_cast<std::size_t>(std::stoull(text));
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad index " + text);
  }
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      reply_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      reply_error(res, ErrorCode::ParseError, e.what());
    }
  };
}

json name_or_code(const SurveyService& service, const FoodCode& food) {
  const auto name = service.display_name(food);
  return name ? *name : food.str();
}

json immediate_json(const SurveyService& service, const ImmediatePrompts& prompts) {
  json items = json::array();
  for (const auto& p : prompts.prompts) {
    items.push_back({{"rule_id", p.rule_id},
                     {"food", p.food.str()},
                     {"name", name_or_code(service, p.food)},
                     {"text", p.prompt_text}});
  }
  return {{"event_id", prompts.event_id ? json(*prompts.event_id) : json(nullptr)}, {"prompts", std::move(items)}};
}

json foods_json(const std::vector<FoodCode>& foods) {
  json out = json::array();
  for (const auto& f : foods) out.push_back(f.str());
  return out;
}

}  // namespace

HttpServer::HttpServer(SurveyService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  auto& svc = service_;

  server_->Get("/health", guarded([&svc](const httplib::Request&, httplib::Response& res) {
                 reply(res, 200,
                       {{"status", "ok"},
                        {"model_loaded", svc.has_model()},
                        {"rules_loaded", svc.has_rules()},
                        {"active_sessions", svc.active_sessions()}});
               }));

  server_->Post("/sessions", guarded([&svc](const httplib::Request&, httplib::Response& res) {
                  const auto info = svc.create_session();
                  reply(res, 201, {{"session_id", info.session_id}, {"arm", std::string(to_string(info.arm))}});
                }));

  server_->Post(R"(/sessions/([^/]+)/meals)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                  const auto body = body_of(req);
                  const auto index = svc.add_meal(req.matches[1], body.value("name", std::string()));
                  reply(res, 201, {{"meal_index", index}});
                }));

  server_->Post(R"(/sessions/([^/]+)/meals/(\d+)/foods)",
                guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                  const auto body = body_of(req);
                  const FoodCode food(body.at("food").get<std::string>());
                  const auto prompts = svc.add_food(req.matches[1], index_param(req.matches[2]), food);
                  reply(res, 200, immediate_json(svc, prompts));
                }));

  server_->Post(R"(/sessions/([^/]+)/meals/(\d+)/finish)",
                guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                  const auto out = svc.finish_meal(req.matches[1], index_param(req.matches[2]));
                  json items = json::array();
                  for (const auto& r : out.prompts) {
                    items.push_back({{"food", r.food.str()},
                                     {"name", name_or_code(svc, r.food)},
                                     {"score_r", r.score_r},
                                     {"aggregate_c", r.aggregate_c},
                                     {"weight_w", r.weight_w}});
                  }
                  reply(res, 200,
                        {{"event_id", out.event_id ? json(*out.event_id) : json(nullptr)}, {"prompts", std::move(items)}});
                }));

  server_->Post(R"(/sessions/([^/]+)/events/(\d+)/accept)",
                guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                  const auto body = body_of(req);
                  std::vector<FoodCode> accepted;
                  if (body.contains("accepted")) {
                    for (const auto& item : body.at("accepted")) accepted.emplace_back(item.get<std::string>());
                  }
                  const auto out = svc.accept_prompts(req.matches[1], index_param(req.matches[2]), accepted);
                  reply(res, 200,
                        {{"meal_index", out.meal_index},
                         {"foods", foods_json(out.meal_foods)},
                         {"follow_up", immediate_json(svc, out.follow_up)}});
                }));

  server_->Post(R"(/sessions/([^/]+)/submit)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                  const auto body = body_of(req);
                  SubmitRequest request;
                  request.duration_minutes = body.at("duration_minutes").get<double>();
                  if (body.contains("energy_kcal") && !body.at("energy_kcal").is_null()) {
                    request.energy_kcal = body.at("energy_kcal").get<double>();
                  }
                  request.respondent_id = body.value("respondent_id", std::string());
                  const auto device = parse_device_class(body.value("device", std::string("unknown")));
                  if (!device) throw Error(ErrorCode::ParseError, "unknown device class");
                  request.device = *device;
                  reply(res, 201, recall_to_json(svc.submit_recall(req.matches[1], request)));
                }));

  server_->Get("/foods", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                 json results = json::array();
                 for (const auto& entry : svc.search_foods(req.get_param_value("q"))) {
                   results.push_back({{"code", entry.code.str()}, {"name", entry.display_name}});
                 }
                 reply(res, 200, {{"results", std::move(results)}});
               }));

  server_->Get("/metrics", guarded([&svc](const httplib::Request&, httplib::Response& res) {
                 reply(res, 200, arm_metrics_to_json(svc.metrics()));
               }));
}

bool HttpServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace foodprompt
