// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "tgl/session.hpp"

namespace tgl {

struct HttpResponse {
    int status = 200;
    nlohmann::ordered_json body;
};

/// In-memory game sessions behind a small JSON API:
///
///     POST   /sessions            {"left": text, "right": text, "relation" | "spec", "human"}
///     GET    /sessions/{id}
///     POST   /sessions/{id}/move  {"side", "label", "target"} or {"target"} for a defender
///     DELETE /sessions/{id}
///
/// Requests on different sessions run concurrently; requests on one session are serialized.
class SessionService {
public:
    SessionService();

    HttpResponse handle(const std::string& method, const std::string& path, const std::string& body);

    std::size_t size() const;

private:
    struct Entry {
        std::mutex mutex;
        std::unique_ptr<Session> session;
    };

    HttpResponse create(const std::string& body);
    HttpResponse get(const std::string& id);
    HttpResponse move(const std::string& id, const std::string& body);
    HttpResponse remove(const std::string& id);

    std::shared_ptr<Entry> find(const std::string& id) const;
    std::string fresh_id();

    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::mt19937_64 rng_;
};

/// Record of `s` plus its id and legal moves.
nlohmann::ordered_json session_view(const std::string& id, const Session& s);

/// HTTP front end for a SessionService with CORS headers on every response.
class HttpServer {
public:
    explicit HttpServer(SessionService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds `port`, or a free port when it is 0. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Accepts requests until stop() is called. Requires a successful bind().
    bool run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Serves `service` over HTTP until the process is stopped. Returns false if the port cannot
/// be bound.
bool serve_http(SessionService& service, const std::string& host, int port);

} // namespace tgl
