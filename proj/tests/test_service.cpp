// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "tgl/parser.hpp"
#include "tgl/relations.hpp"
#include "tgl/service.hpp"
#include "tgl/session.hpp"
#include "witnesses.hpp"

using namespace tgl;
using nlohmann::json;

namespace {

std::string model_text(const std::string& name) {
    std::ifstream in(std::string(TGL_EXAMPLES_DIR) + "/" + name + ".ta");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json create_body(const std::string& left, const std::string& right, const std::string& relation,
                 const std::string& human) {
    return {{"left", model_text(left)}, {"right", model_text(right)}, {"relation", relation}, {"human", human}};
}

json move_body(const json& legal) {
    if (legal["role"] == "attacker") {
        return {{"side", legal["side"]}, {"label", legal["label"]}, {"target", legal["target"]}};
    }
    return {{"target", legal["target"]}};
}

// Plays uniformly random legal moves for the human until the game ends or `limit` moves.
std::vector<json> random_play(SessionService& svc, const std::string& id, std::uint64_t seed, int limit) {
    std::mt19937_64 rng(seed);
    std::vector<json> views;
    for (int i = 0; i < limit; ++i) {
        const HttpResponse cur = svc.handle("GET", "/sessions/" + id, "");
        REQUIRE(cur.status == 200);
        views.push_back(cur.body);
        const auto& legal = cur.body["legalMoves"];
        if (cur.body["status"] != "live" || legal.empty()) {
            break;
        }
        const json pick = legal[rng() % legal.size()];
        const HttpResponse r = svc.handle("POST", "/sessions/" + id + "/move", move_body(pick).dump());
        REQUIRE(r.status == 200);
    }
    return views;
}

std::string create(SessionService& svc, const json& body) {
    const HttpResponse r = svc.handle("POST", "/sessions", body.dump());
    REQUIRE(r.status == 201);
    return r.body["id"].get<std::string>();
}

}  // namespace

TEST_CASE("a human attacker cannot win on identical automata", "[service]") {
    SessionService svc;
    for (const std::string& rel : {"timed-bisim", "ta-obs-bisim", "timed-sim-equiv"}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const std::string fresh = create(svc, create_body("crossed_left", "crossed_left", rel, "attacker"));
            for (const auto& v : random_play(svc, fresh, seed, 40)) {
                CHECK(v["status"] != "attackerWon");
            }
            CHECK(svc.handle("DELETE", "/sessions/" + fresh, "").status == 200);
        }
    }
}

TEST_CASE("the engine attacker wins within its rank", "[service]") {
    const auto w = testkit::witness("prebisim");
    const BoardSet l = BoardSet::build(w.left);
    const BoardSet r = BoardSet::build(w.right);
    const SolvedGame g(game_for(RelationId::TimedBisim), *l.z, *r.z);
    const auto rank = g.rank(g.start_position());
    REQUIRE(rank.has_value());
    SessionService svc;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::string id = create(svc, create_body("prebisim_left", "prebisim_right", "timed-bisim", "defender"));
        const auto views = random_play(svc, id, seed, 50);
        const json& last = views.back();
        CHECK(last["status"] == "attackerWon");
        CHECK(last["config"]["roundsPlayed"].get<std::size_t>() <= *rank);
    }
}

TEST_CASE("a defender session in a disjunctive game", "[service]") {
    SessionService svc;
    const std::string id = create(svc, create_body("prebisim_left", "prebisim_right", "timed-prebisim", "attacker"));
    const auto views = random_play(svc, id, 3, 60);
    for (const auto& v : views) {
        CHECK(v["status"] != "attackerWon");
    }
    CHECK(views.front()["spec"].contains("or"));
}

TEST_CASE("illegal moves are rejected with the legal ones", "[service]") {
    SessionService svc;
    const std::string id = create(svc, create_body("prebisim_left", "prebisim_right", "timed-bisim", "attacker"));
    const HttpResponse bad =
        svc.handle("POST", "/sessions/" + id + "/move", json{{"side", "left"}, {"label", "zz"}, {"target", 0}}.dump());
    CHECK(bad.status == 409);
    CHECK(bad.body.contains("error"));
    CHECK_FALSE(bad.body["legalMoves"].empty());
    const HttpResponse side = svc.handle("POST", "/sessions/" + id + "/move", json{{"side", "up"}, {"label", "a"}}.dump());
    CHECK(side.status == 409);
    const HttpResponse reply = svc.handle("POST", "/sessions/" + id + "/move", json{{"target", 0}}.dump());
    CHECK(reply.status == 409);
    CHECK(svc.handle("GET", "/sessions/" + id, "").body["history"].empty());
}

TEST_CASE("error statuses", "[service]") {
    SessionService svc;
    CHECK(svc.handle("GET", "/sessions/0123abcd", "").status == 404);
    CHECK(svc.handle("POST", "/sessions/0123abcd/move", "{}").status == 404);
    CHECK(svc.handle("DELETE", "/sessions/0123abcd", "").status == 404);
    CHECK(svc.handle("GET", "/elsewhere", "").status == 404);
    json broken = create_body("prebisim_left", "prebisim_right", "timed-bisim", "attacker");
    broken["left"] = "clocks x\nautomaton A\ninit nowhere\n";
    const HttpResponse r = svc.handle("POST", "/sessions", broken.dump());
    CHECK(r.status == 422);
    CHECK(r.body["error"].get<std::string>().find("left") != std::string::npos);
    CHECK(svc.handle("POST", "/sessions", "{not json").status == 400);
    json unknown = create_body("prebisim_left", "prebisim_right", "no-such-relation", "attacker");
    CHECK(svc.handle("POST", "/sessions", unknown.dump()).status == 400);
    CHECK(svc.handle("PUT", "/sessions", "").status == 405);
    CHECK(svc.size() == 0);
}

TEST_CASE("moves after the game is over", "[service]") {
    SessionService svc;
    const std::string id = create(svc, create_body("prebisim_left", "prebisim_right", "timed-bisim", "defender"));
    const auto views = random_play(svc, id, 1, 50);
    REQUIRE(views.back()["status"] == "attackerWon");
    CHECK(views.back()["legalMoves"].empty());
    const HttpResponse r = svc.handle("POST", "/sessions/" + id + "/move", json{{"target", 0}}.dump());
    CHECK(r.status == 409);
}

TEST_CASE("replaying the same moves gives the same record", "[service]") {
    SessionService a;
    SessionService b;
    const json body = create_body("crossed_left", "crossed_right", "ta-bisim", "attacker");
    const auto va = random_play(a, create(a, body), 7, 30);
    const auto vb = random_play(b, create(b, body), 7, 30);
    REQUIRE(va.size() == vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
        json x = va[i];
        json y = vb[i];
        x.erase("id");
        y.erase("id");
        CHECK(x == y);
    }
}

TEST_CASE("deleted sessions are gone", "[service]") {
    SessionService svc;
    const std::string id = create(svc, create_body("delay_left", "delay_right", "ta-delay-bisim", "attacker"));
    CHECK(svc.size() == 1);
    CHECK(svc.handle("DELETE", "/sessions/" + id, "").status == 200);
    CHECK(svc.handle("GET", "/sessions/" + id, "").status == 404);
    CHECK(svc.size() == 0);
}

TEST_CASE("session records expose the boards and configuration", "[service]") {
    const auto w = testkit::witness("prebisim");
    Session s(game_for(RelationId::TimedBisim), w.left, w.right, Role::Attacker);
    CHECK(s.status() == SessionStatus::Live);
    CHECK(s.turn() == Role::Attacker);
    const auto rec = s.record();
    CHECK(rec["human"] == "attacker");
    CHECK(rec["boards"]["left"]["nodes"].size() == s.game().left().size());
    CHECK(rec["config"]["left"] == s.left());
    const auto moves = s.legal_moves();
    REQUIRE_FALSE(moves.empty());
    s.play(moves.front().move);
    CHECK(s.history().size() == 2);
    CHECK_FALSE(s.history()[0].to_json()["human"] == s.history()[1].to_json()["human"]);
    CHECK(parse_role("defender") == Role::Defender);
    CHECK_FALSE(parse_role("referee").has_value());
}

TEST_CASE("the HTTP server speaks the same protocol", "[service]") {
    SessionService svc;
    HttpServer server(svc);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread t([&server] { server.run(); });
    httplib::Client client("127.0.0.1", port);
    const auto created = client.Post("/sessions", create_body("prebisim_left", "prebisim_right", "timed-bisim", "attacker").dump(),
                                     "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
    const std::string id = json::parse(created->body)["id"];
    const auto got = client.Get("/sessions/" + id);
    REQUIRE(got);
    CHECK(got->status == 200);
    const json legal = json::parse(got->body)["legalMoves"].at(0);
    const auto moved = client.Post("/sessions/" + id + "/move", move_body(legal).dump(), "application/json");
    REQUIRE(moved);
    CHECK(moved->status == 200);
    CHECK(json::parse(moved->body)["history"].size() == 2);
    const auto missing = client.Get("/sessions/ffff");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    const auto options = client.Options("/sessions");
    REQUIRE(options);
    CHECK(options->status == 204);
    const auto del = client.Delete("/sessions/" + id);
    REQUIRE(del);
    CHECK(del->status == 200);
    server.stop();
    t.join();
}
