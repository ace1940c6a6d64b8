#pragma once

#include "dminr/service.hpp"

#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace dminr {

// Routes:
//   POST /api/session                  {user, query} -> {session_id, tabs, entities, graph}
//   GET  /api/session/{id}/graph       -> node-link JSON
//   GET  /api/session/{id}/tab/{src}   -> SourceResult JSON
//   POST /api/session/{id}/expand      {entity} -> node-link JSON
//   POST /api/session/{id}/event       {kind, payload} -> {ok: true}
//   GET  /api/metrics                  -> UsageMetrics JSON
//   GET  /api/doc/{session}/{doc_id}   -> Document JSON
// Failures answer {"error": {"stage", "message"}}.
void register_routes(httplib::Server& server, SessionService& service);

int http_status_for(Errc code) noexcept;

// Runs an httplib server on a background thread.
class ApiServer {
public:
    explicit ApiServer(SessionService& service);
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    // Binds host:port (port 0 picks a free port) and starts serving.
    // Returns the bound port. Throws Error(io) when binding fails.
    int start(const std::string& host, int port);
    void stop();

    // Blocks serving on the calling thread.
    void serve_forever(const std::string& host, int port);

private:
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

} // namespace dminr
