#include "dminr/http_api.hpp"

#include "dminr/error.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace dminr {

int http_status_for(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument:
    case Errc::parse:
    case Errc::length_mismatch: return 400;
    case Errc::not_found: return 404;
    case Errc::duplicate_id: return 409;
    case Errc::expired: return 410;
    case Errc::timeout: return 504;
    case Errc::protocol:
    case Errc::io: return 502;
    case Errc::internal: return 500;
    }
    return 500;
}

namespace {

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& stage, const std::string& message) {
    json err;
    err["error"] = {{"stage", stage}, {"message", message}};
    reply(res, status, err);
}

// Runs a handler, translating exceptions into the error envelope.
template <typename Fn>
void guarded(const char* operation, httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const StageError& e) {
        reply_error(res, e.code() == Errc::internal ? 500 : http_status_for(e.code()), e.stage(), e.what());
    } catch (const Error& e) {
        reply_error(res, http_status_for(e.code()), operation, e.what());
    } catch (const json::exception& e) {
        reply_error(res, 400, operation, std::string("malformed request: ") + e.what());
    } catch (const std::exception& e) {
        reply_error(res, 500, operation, e.what());
    }
}

json body_of(const httplib::Request& req) {
    auto body = json::parse(req.body);
    if (!body.is_object()) throw Error(Errc::invalid_argument, "request body must be a JSON object");
    return body;
}

std::string required(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string()) {
        throw Error(Errc::invalid_argument, std::string("'") + key + "' must be a string");
    }
    return it->get<std::string>();
}

} // namespace

void register_routes(httplib::Server& server, SessionService& service) {
    server.Post("/api/session", [&service](const httplib::Request& req, httplib::Response& res) {
        guarded("session", res, [&] {
            const auto body = body_of(req);
            const auto user = body.contains("user") ? required(body, "user") : std::string();
            reply(res, 200, service.create_session(user, required(body, "query")));
        });
    });
    server.Get(R"(/api/session/([^/]+)/graph)", [&service](const httplib::Request& req, httplib::Response& res) {
        guarded("graph", res, [&] { reply(res, 200, service.graph(req.matches[1])); });
    });
    server.Get(R"(/api/session/([^/]+)/tab/([^/]+))",
               [&service](const httplib::Request& req, httplib::Response& res) {
                   guarded("tab", res, [&] { reply(res, 200, service.tab(req.matches[1], req.matches[2])); });
               });
    server.Post(R"(/api/session/([^/]+)/expand)", [&service](const httplib::Request& req, httplib::Response& res) {
        guarded("expand", res, [&] {
            const auto body = body_of(req);
            reply(res, 200, service.expand(req.matches[1], required(body, "entity")));
        });
    });
    server.Post(R"(/api/session/([^/]+)/event)", [&service](const httplib::Request& req, httplib::Response& res) {
        guarded("event", res, [&] {
            const auto body = body_of(req);
            service.log_event(req.matches[1], required(body, "kind"), body.value("payload", json::object()));
            reply(res, 200, {{"ok", true}});
        });
    });
    server.Get("/api/metrics", [&service](const httplib::Request&, httplib::Response& res) {
        guarded("metrics", res, [&] { reply(res, 200, metrics_to_json(service.metrics())); });
    });
    server.Get(R"(/api/doc/([^/]+)/(.+))", [&service](const httplib::Request& req, httplib::Response& res) {
        guarded("doc", res, [&] { reply(res, 200, service.document(req.matches[1], req.matches[2])); });
    });
}

ApiServer::ApiServer(SessionService& service) : server_(std::make_unique<httplib::Server>()) {
    register_routes(*server_, service);
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = server_->bind_to_any_port(host);
    } else if (!server_->bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) throw Error(Errc::io, "cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

void ApiServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

void ApiServer::serve_forever(const std::string& host, int port) {
    spdlog::info("serving on {}:{}", host, port);
    if (!server_->listen(host, port)) throw Error(Errc::io, "cannot listen on " + host + ":" + std::to_string(port));
}

} // namespace dminr
