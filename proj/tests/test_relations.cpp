// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <map>

#include "generators.hpp"
#include "tgl/region_oracle.hpp"
#include "tgl/relations.hpp"
#include "witnesses.hpp"

using namespace tgl;

namespace {

using R = RelationId;

// Expected verdicts on the fixed witnesses, worked out by hand from the automata in models/.
// Order: ~t ~i <~ ~u ~y ~o ~t-sim ~u-sim ~y-sim ~o-sim.
const std::map<std::string, std::vector<bool>> kTable{
    {"prebisim", {false, false, true, true, true, true, false, true, true, true}},
    {"crossed", {false, false, false, true, true, true, false, true, true, true}},
    {"delay", {false, false, false, false, true, true, false, false, true, true}},
    {"interval", {false, true, true, true, true, true, false, true, true, true}},
    {"obs", {false, false, false, false, false, true, false, false, true, true}},
    {"simeq", {false, false, false, false, false, false, true, true, true, true}},
};

const std::vector<R> kOrder{R::TimedBisim,    R::IntervalBisim, R::TimedPrebisim,   R::TaBisim,
                            R::TaDelayBisim,  R::TaObsBisim,    R::TimedSimEquiv,   R::TaSimEquiv,
                            R::TaDelaySimEquiv, R::TaObsSimEquiv};

}  // namespace

TEST_CASE("relation names and symbols", "[relations]") {
    CHECK(all_relations().size() == 10);
    for (R r : all_relations()) {
        CHECK(parse_relation(to_string(r)) == r);
        CHECK_FALSE(symbol(r).empty());
    }
    CHECK(to_string(R::TimedPrebisim) == "timed-prebisim");
    CHECK_FALSE(parse_relation("timed").has_value());
    CHECK(implication_lattice().size() == 9);
}

TEST_CASE("verdicts on the fixed witnesses", "[relations]") {
    for (const auto& [name, expected] : kTable) {
        const auto w = testkit::witness(name);
        const BoardSet l = BoardSet::build(w.left);
        const BoardSet r = BoardSet::build(w.right);
        for (std::size_t i = 0; i < kOrder.size(); ++i) {
            INFO(name << " " << to_string(kOrder[i]));
            CHECK(check(kOrder[i], l, r).holds == expected[i]);
        }
    }
}

TEST_CASE("time-abstract verdicts agree with the region oracle on the witnesses", "[relations]") {
    for (const auto& w : testkit::witness_corpus()) {
        for (R r : {R::TaBisim, R::TaDelayBisim, R::TaObsBisim, R::TaSimEquiv, R::TaDelaySimEquiv, R::TaObsSimEquiv}) {
            INFO(w.name << " " << to_string(r));
            CHECK(check(r, w.left, w.right).holds == oracle_check(r, w.left, w.right));
        }
    }
}

TEST_CASE("every relation is symmetric", "[relations]") {
    auto corpus = testkit::random_corpus(17, 30);
    for (const auto& w : testkit::witness_corpus()) {
        corpus.push_back(w);
    }
    for (const auto& pair : corpus) {
        const BoardSet l = BoardSet::build(pair.left);
        const BoardSet r = BoardSet::build(pair.right);
        for (R rel : all_relations()) {
            INFO(pair.name << " " << to_string(rel));
            CHECK(check(rel, l, r).holds == check(rel, r, l).holds);
        }
    }
}

TEST_CASE("the prebisimulation reports the faster side", "[relations]") {
    const auto w = testkit::witness("prebisim");
    const Verdict v = check(R::TimedPrebisim, w.left, w.right);
    REQUIRE(v.holds);
    CHECK(v.faster_side == "left");
    CHECK(check(R::TimedPrebisim, w.right, w.left).faster_side == "right");
    CHECK(check(R::TaBisim, w.left, w.right).faster_side.empty());
    const auto j = v.to_json();
    CHECK(j["fasterSide"] == "left");
    CHECK(j["certificate"]["kind"] == "winning-pairs");
}

TEST_CASE("failed verdicts carry an attacker strategy", "[relations]") {
    const auto w = testkit::witness("prebisim");
    const Verdict v = check(R::TimedBisim, w.left, w.right);
    REQUIRE_FALSE(v.holds);
    const auto j = v.to_json();
    CHECK(j["holds"] == false);
    CHECK(j["certificate"]["kind"] == "attacker-strategy");
    CHECK(j["certificate"]["strategies"].size() == 1);
    CHECK_FALSE(v.to_table().empty());
}

TEST_CASE("one-directional simulation", "[relations]") {
    const auto obs = testkit::witness("obs");
    const BoardSet l = BoardSet::build(obs.left);
    const BoardSet r = BoardSet::build(obs.right);
    CHECK(simulates(R::TaSimEquiv, l, r));
    CHECK_FALSE(simulates(R::TaSimEquiv, r, l));
    const auto eq = testkit::witness("simeq");
    const BoardSet a = BoardSet::build(eq.left);
    const BoardSet b = BoardSet::build(eq.right);
    CHECK(simulates(R::TimedSimEquiv, a, b));
    CHECK(simulates(R::TimedSimEquiv, b, a));
}

TEST_CASE("the hierarchy audit over the witnesses", "[relations]") {
    const AuditReport report = hierarchy_audit(testkit::witness_corpus(), 2);
    CHECK(report.violations.empty());
    CHECK(report.rows.size() == kTable.size());
    REQUIRE(report.separations.size() == implication_lattice().size());
    for (const auto& [edge, names] : report.separations) {
        INFO(symbol(edge.from) << " => " << symbol(edge.to));
        CHECK_FALSE(names.empty());
    }
    CHECK(report.to_json()["pairs"].size() == kTable.size());
}
