// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <set>

#include "generators.hpp"
#include "tgl/game.hpp"
#include "tgl/relations.hpp"
#include "witnesses.hpp"

using namespace tgl;

namespace {

using PairSet = std::set<std::pair<std::size_t, std::size_t>>;

GameSpec spec(Budget n, DefenderPattern alpha, Beta beta, Variant g = Variant::Z) {
    GameSpec s;
    s.alternations = n;
    s.graph = g;
    s.defender = alpha;
    s.beta = beta;
    return s;
}

// Greatest fixpoint over node pairs, straight from the game rules. With `one_sided` the
// attacker only plays on the left board.
PairSet naive_winning(const ZvGraph& l, const ZvGraph& r, DefenderPattern alpha, Beta beta, bool one_sided) {
    PairSet w;
    for (std::size_t i = 0; i < l.size(); ++i) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (beta_holds(beta, l.node(i).span, r.node(j).span, false)) {
                w.insert({i, j});
            }
        }
    }
    auto labels = [](const ZvGraph& g) {
        std::vector<std::string> out = g.actions();
        out.emplace_back(kEpsilon);
        return out;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = w.begin(); it != w.end();) {
            const auto [i, j] = *it;
            bool ok = true;
            for (const auto& a : labels(l)) {
                for (auto t : l.successors(i, a)) {
                    bool answered = false;
                    for (auto u : defender_replies(r, j, a, alpha)) {
                        answered = answered || w.count({t, u}) > 0;
                    }
                    ok = ok && answered;
                }
            }
            if (!one_sided) {
                for (const auto& a : labels(r)) {
                    for (auto u : r.successors(j, a)) {
                        bool answered = false;
                        for (auto t : defender_replies(l, i, a, alpha)) {
                            answered = answered || w.count({t, u}) > 0;
                        }
                        ok = ok && answered;
                    }
                }
            }
            if (ok) {
                ++it;
            } else {
                it = w.erase(it);
                changed = true;
            }
        }
    }
    return w;
}

PairSet transpose(const PairSet& s) {
    PairSet out;
    for (auto [a, b] : s) {
        out.insert({b, a});
    }
    return out;
}

PairSet as_set(const std::vector<std::pair<std::size_t, std::size_t>>& v) { return {v.begin(), v.end()}; }

SolveOptions plain() {
    SolveOptions o;
    o.residual_start_spans = false;
    return o;
}

}  // namespace

TEST_CASE("beta conditions compare spans", "[game]") {
    const auto one = SymbolicValue::finite(Rational(1));
    const auto almost = SymbolicValue::finite(Rational(1), -1);
    const auto inf = SymbolicValue::infinity();
    CHECK(beta_holds(Beta::None, one, inf, false));
    CHECK(beta_holds(Beta::Eq, one, one, false));
    CHECK_FALSE(beta_holds(Beta::Eq, one, almost, false));
    CHECK(beta_holds(Beta::G1Leq, almost, one, false));
    CHECK_FALSE(beta_holds(Beta::G2Leq, almost, one, false));
    CHECK(beta_holds(Beta::G2Leq, inf, one, false));
    const auto a = SymbolicValue::finite(Rational(3, 5));
    const auto b = SymbolicValue::finite(Rational(2, 5));
    CHECK(beta_holds(Beta::FloorEq, a, b, true));
    CHECK_FALSE(beta_holds(Beta::FloorEq, a, b, false));
    CHECK_FALSE(beta_holds(Beta::FloorEq, SymbolicValue::finite(Rational(1)), a, true));
    CHECK_FALSE(beta_holds(Beta::FloorEq, inf, one, true));
}

TEST_CASE("solver agrees with the naive fixpoint", "[game]") {
    auto corpus = testkit::random_corpus(99, 40);
    for (const auto& w : testkit::witness_corpus()) {
        corpus.push_back(w);
    }
    for (const auto& pair : corpus) {
        const BoardSet l = BoardSet::build(pair.left);
        const BoardSet r = BoardSet::build(pair.right);
        for (auto alpha : {DefenderPattern::A, DefenderPattern::EA, DefenderPattern::EAE}) {
            for (auto beta : {Beta::None, Beta::Eq, Beta::G1Leq, Beta::G2Leq}) {
                INFO(pair.name << " " << to_string(alpha) << " " << to_string(beta));
                const SolvedGame inf(spec(std::nullopt, alpha, beta), *l.z, *r.z, plain());
                CHECK(as_set(inf.winning_pairs()) == naive_winning(*l.z, *r.z, alpha, beta, false));
                const SolvedGame zero(spec(0, alpha, beta), *l.z, *r.z, plain());
                const PairSet fwd = naive_winning(*l.z, *r.z, alpha, beta, true);
                Beta flipped = beta == Beta::G1Leq ? Beta::G2Leq : beta == Beta::G2Leq ? Beta::G1Leq : beta;
                const PairSet back = transpose(naive_winning(*r.z, *l.z, alpha, flipped, true));
                PairSet both;
                for (const auto& p : fwd) {
                    if (back.count(p) > 0) {
                        both.insert(p);
                    }
                }
                CHECK(as_set(zero.winning_pairs()) == both);
            }
        }
    }
}

TEST_CASE("identical processes are won by the defender", "[game]") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const Process p = testkit::random_automaton(rng);
        const BoardSet b = BoardSet::build(p);
        for (RelationId rel : all_relations()) {
            const GameSpec s = game_for(rel);
            const GameResult res = solve(s, b.get(s.graph), b.get(s.graph));
            CHECK(res.defender_wins);
            CHECK(validate_winning_region(res.parts.at(0)).ok);
        }
    }
}

TEST_CASE("the prebisimulation witness", "[game]") {
    const auto w = testkit::witness("prebisim");
    const BoardSet l = BoardSet::build(w.left);
    const BoardSet r = BoardSet::build(w.right);
    const GameResult pre = solve(game_for(RelationId::TimedPrebisim), *l.z, *r.z);
    CHECK(pre.defender_wins);
    REQUIRE(pre.parts.size() == 2);
    CHECK(pre.winning_disjunct == std::optional<std::size_t>(0));
    CHECK_FALSE(pre.parts[1].defender_wins());

    const SolvedGame eq(game_for(RelationId::TimedBisim), *l.z, *r.z);
    REQUIRE_FALSE(eq.defender_wins());
    const auto tree = eq.attacker_strategy();
    REQUIRE(tree.has_value());
    const CheckOutcome v = validate_attacker_strategy(eq, *tree);
    CHECK(v.ok);
    CHECK(tree->rank == eq.rank(eq.start_position()));
    CHECK(validate_winning_region(eq).ok);
}

TEST_CASE("a strategy with a wrong move is rejected", "[game]") {
    const auto w = testkit::witness("prebisim");
    const BoardSet l = BoardSet::build(w.left);
    const BoardSet r = BoardSet::build(w.right);
    const SolvedGame eq(game_for(RelationId::TimedBisim), *l.z, *r.z);
    auto tree = eq.attacker_strategy();
    REQUIRE(tree.has_value());
    REQUIRE(tree->move.has_value());
    StrategyNode bad = *tree;
    bad.move->target = 1000;
    CHECK_FALSE(validate_attacker_strategy(eq, bad).ok);
}

TEST_CASE("without alternations the attacker keeps its side", "[game]") {
    const auto w = testkit::witness("simeq");
    const BoardSet l = BoardSet::build(w.left);
    const BoardSet r = BoardSet::build(w.right);
    const SolvedGame g(spec(0, DefenderPattern::A, Beta::None), *l.z, *r.z);
    for (Side side : {Side::Left, Side::Right}) {
        Position p{l.z->initial(), r.z->initial(), side, 0};
        for (const auto& m : g.attacker_moves(p)) {
            CHECK(m.side == side);
        }
        AttackerMove sw{other(side), "a", 0};
        const ZvGraph& board = side == Side::Left ? *r.z : *l.z;
        const std::size_t from = side == Side::Left ? p.right : p.left;
        REQUIRE_FALSE(board.successors(from, "a").empty());
        sw.target = board.successors(from, "a").front();
        CHECK_THROWS_AS(g.replies(p, sw), IllegalMove);
    }
    // ta-bisim fails on the simulation-equivalence witness but both one-sided games are won.
    CHECK_FALSE(SolvedGame(game_for(RelationId::TaBisim), *l.z, *r.z).defender_wins());
    CHECK(g.defender_wins());
}

TEST_CASE("rounds bound the attacker by its rank", "[game]") {
    const auto w = testkit::witness("prebisim");
    const BoardSet l = BoardSet::build(w.left);
    const BoardSet r = BoardSet::build(w.right);
    const SolvedGame inf(game_for(RelationId::TimedBisim), *l.z, *r.z);
    const auto rank = inf.rank(inf.start_position());
    REQUIRE(rank.has_value());
    REQUIRE(*rank >= 1);
    GameSpec s = game_for(RelationId::TimedBisim);
    s.rounds = *rank - 1;
    CHECK(SolvedGame(s, *l.z, *r.z).defender_wins());
    s.rounds = *rank;
    CHECK_FALSE(SolvedGame(s, *l.z, *r.z).defender_wins());
}

TEST_CASE("the winning region does not depend on iteration order", "[game]") {
    const auto corpus = testkit::random_corpus(3, 30);
    for (const auto& pair : corpus) {
        const BoardSet l = BoardSet::build(pair.left);
        const BoardSet r = BoardSet::build(pair.right);
        for (RelationId rel : {RelationId::TaBisim, RelationId::TimedBisim, RelationId::TaObsBisim}) {
            const SolvedGame base(game_for(rel), *l.z, *r.z);
            for (std::uint64_t seed : {1u, 2u, 3u}) {
                SolveOptions o;
                o.shuffle_seed = seed;
                const SolvedGame shuffled(game_for(rel), *l.z, *r.z, o);
                CHECK(shuffled.winning_pairs() == base.winning_pairs());
                CHECK(shuffled.defender_wins() == base.defender_wins());
            }
        }
    }
}

TEST_CASE("boards must match the game's variant", "[game]") {
    const auto w = testkit::witness("prebisim");
    const BoardSet l = BoardSet::build(w.left);
    const BoardSet r = BoardSet::build(w.right);
    CHECK_THROWS_AS(solve(game_for(RelationId::TimedSimEquiv), *l.z, *r.z), std::invalid_argument);
}

TEST_CASE("game specs round-trip through JSON", "[game]") {
    for (RelationId rel : all_relations()) {
        const GameSpec s = game_for(rel);
        CHECK(GameSpec::from_json(s.to_json()) == s);
    }
    CHECK_THROWS_AS(GameSpec::from_json(nlohmann::json{{"G", "Q"}}), std::invalid_argument);
}
