// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/service.hpp"

#include <cstdio>
#include <regex>

#include <httplib.h>

#include "tgl/parser.hpp"
#include "tgl/relations.hpp"

namespace tgl {

namespace {

HttpResponse error(int status, const std::string& message) {
    return {status, {{"error", message}}};
}

std::size_t as_node(const nlohmann::json& v) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw IllegalMove("target must be a node id");
    }
    return v.get<std::size_t>();
}

} // namespace

nlohmann::ordered_json session_view(const std::string& id, const Session& s) {
    nlohmann::ordered_json j;
    j["id"] = id;
    const nlohmann::ordered_json record = s.record();
    for (const auto& [k, v] : record.items()) {
        j[k] = v;
    }
    j["legalMoves"] = s.legal_moves_json();
    return j;
}

SessionService::SessionService() : rng_(std::random_device{}()) {}

std::size_t SessionService::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::string SessionService::fresh_id() {
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                  static_cast<unsigned long long>(rng_()));
    return buf;
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

HttpResponse SessionService::handle(const std::string& method, const std::string& path, const std::string& body) {
    static const std::regex one(R"(^/sessions/([0-9A-Za-z]+)$)");
    static const std::regex mv(R"(^/sessions/([0-9A-Za-z]+)/move$)");
    std::smatch m;
    try {
        if (path == "/sessions" || path == "/sessions/") {
            return method == "POST" ? create(body) : error(405, "method not allowed");
        }
        if (std::regex_match(path, m, one)) {
            if (method == "GET") {
                return get(m[1]);
            }
            if (method == "DELETE") {
                return remove(m[1]);
            }
            return error(405, "method not allowed");
        }
        if (std::regex_match(path, m, mv)) {
            return method == "POST" ? move(m[1], body) : error(405, "method not allowed");
        }
        return error(404, "no route for " + path);
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

HttpResponse SessionService::create(const std::string& body) {
    nlohmann::json req;
    try {
        req = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        return error(400, std::string("malformed JSON: ") + e.what());
    }
    if (!req.is_object() || !req.contains("left") || !req.contains("right") || !req["left"].is_string() ||
        !req["right"].is_string()) {
        return error(400, "expected automaton texts in \"left\" and \"right\"");
    }
    const auto role = parse_role(req.value("human", std::string("attacker")));
    if (!role) {
        return error(400, "\"human\" must be \"attacker\" or \"defender\"");
    }
    GameSpec spec;
    try {
        if (req.contains("spec")) {
            spec = GameSpec::from_json(req["spec"]);
        } else if (req.contains("relation") && req["relation"].is_string()) {
            const auto r = parse_relation(req["relation"].get<std::string>());
            if (!r) {
                return error(400, "unknown relation " + req["relation"].get<std::string>());
            }
            spec = game_for(*r);
        } else {
            return error(400, "expected \"relation\" or \"spec\"");
        }
    } catch (const std::exception& e) {
        return error(400, std::string("invalid game spec: ") + e.what());
    }

    std::optional<Process> left;
    std::optional<Process> right;
    try {
        left = parse_automaton(req["left"].get<std::string>());
    } catch (const std::exception& e) {
        return error(422, std::string("left automaton: ") + e.what());
    }
    try {
        right = parse_automaton(req["right"].get<std::string>());
    } catch (const std::exception& e) {
        return error(422, std::string("right automaton: ") + e.what());
    }

    auto entry = std::make_shared<Entry>();
    entry->session = std::make_unique<Session>(spec, *left, *right, *role);
    std::string id;
    {
        std::lock_guard lock(mutex_);
        do {
            id = fresh_id();
        } while (sessions_.count(id) != 0);
        sessions_[id] = entry;
    }
    std::lock_guard lock(entry->mutex);
    return {201, session_view(id, *entry->session)};
}

HttpResponse SessionService::get(const std::string& id) {
    auto entry = find(id);
    if (!entry) {
        return error(404, "unknown session " + id);
    }
    std::lock_guard lock(entry->mutex);
    return {200, session_view(id, *entry->session)};
}

HttpResponse SessionService::move(const std::string& id, const std::string& body) {
    auto entry = find(id);
    if (!entry) {
        return error(404, "unknown session " + id);
    }
    nlohmann::json req;
    try {
        req = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        return error(400, std::string("malformed JSON: ") + e.what());
    }
    std::lock_guard lock(entry->mutex);
    Session& s = *entry->session;
    try {
        if (!req.is_object()) {
            throw IllegalMove("expected a move object");
        }
        if (s.human() == Role::Attacker) {
            AttackerMove m;
            const std::string side = req.value("side", std::string());
            if (side != "left" && side != "right") {
                throw IllegalMove("side must be \"left\" or \"right\"");
            }
            m.side = side == "left" ? Side::Left : Side::Right;
            m.label = req.value("label", std::string());
            if (req.contains("target")) {
                m.target = as_node(req["target"]);
            } else {
                // A label with a single legal target may omit it.
                std::vector<std::size_t> targets;
                for (const auto& o : s.legal_moves()) {
                    if (o.move.side == m.side && o.move.label == m.label) {
                        targets.push_back(o.move.target);
                    }
                }
                if (targets.size() != 1) {
                    throw IllegalMove("move needs a target");
                }
                m.target = targets.front();
            }
            s.play(m);
        } else {
            if (!req.contains("target")) {
                throw IllegalMove("reply needs a target");
            }
            s.reply(as_node(req["target"]));
        }
    } catch (const IllegalMove& e) {
        nlohmann::ordered_json j{{"error", e.what()}, {"legalMoves", s.legal_moves_json()}};
        return {409, j};
    } catch (const GameOver& e) {
        nlohmann::ordered_json j{{"error", e.what()}, {"legalMoves", nlohmann::ordered_json::array()}};
        return {409, j};
    }
    return {200, session_view(id, s)};
}

HttpResponse SessionService::remove(const std::string& id) {
    std::lock_guard lock(mutex_);
    if (sessions_.erase(id) == 0) {
        return error(404, "unknown session " + id);
    }
    return {200, {{"deleted", id}}};
}

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>()) {
    const auto dispatch = [&service](const httplib::Request& req, httplib::Response& res) {
        const HttpResponse r = service.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body.dump(), "application/json");
    };
    auto& server = impl_->server;
    server.Get(R"(/sessions.*)", dispatch);
    server.Post(R"(/sessions.*)", dispatch);
    server.Delete(R"(/sessions.*)", dispatch);
    server.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        return impl_->server.bind_to_any_port(host);
    }
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

bool serve_http(SessionService& service, const std::string& host, int port) {
    HttpServer server(service);
    return server.bind(host, port) >= 0 && server.run();
}

} // namespace tgl
