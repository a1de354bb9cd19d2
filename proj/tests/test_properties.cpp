// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <random>

#include "generators.hpp"
#include "tgl/region_oracle.hpp"
#include "tgl/relations.hpp"
#include "tgl/zvg.hpp"

using namespace tgl;

namespace {

// Random reachable states: delays in quarters interleaved with random enabled actions.
std::vector<TimedState> random_walk(const Process& p, std::mt19937_64& rng, int steps) {
    std::vector<TimedState> out{p.state};
    TimedState s = p.state;
    for (int i = 0; i < steps; ++i) {
        if (rng() % 2 == 0) {
            const auto next = tlts_step(p.automaton, s, Rational(static_cast<std::int64_t>(rng() % 9), 4));
            if (!next.empty()) {
                s = next.front();
            }
        } else {
            const auto& acts = p.automaton.actions();
            if (acts.empty()) {
                continue;
            }
            const auto next = tlts_step(p.automaton, s, acts[rng() % acts.size()]);
            if (!next.empty()) {
                s = next[rng() % next.size()];
            }
        }
        out.push_back(s);
    }
    return out;
}

std::vector<Process> sample_processes(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<Process> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(testkit::random_automaton(rng));
    }
    return out;
}

}  // namespace

TEST_CASE("every reachable state lies in exactly one node", "[properties]") {
    std::mt19937_64 rng(31);
    for (const Process& p : sample_processes(30, 40)) {
        for (Variant v : {Variant::Z1, Variant::Z, Variant::Zsim}) {
            const ZvGraph g = build_graph(p, v);
            CHECK(g.node(g.initial()).contains(p.state));
            for (const auto& s : random_walk(p, rng, 30)) {
                std::size_t hits = 0;
                for (const auto& n : g.nodes()) {
                    hits += n.contains(s) ? 1 : 0;
                }
                REQUIRE(hits == 1);
            }
        }
    }
}

TEST_CASE("states sharing a node are time-abstract bisimilar", "[properties]") {
    std::mt19937_64 rng(41);
    for (const Process& p : sample_processes(40, 30)) {
        const ZvGraph g = build_graph(p, Variant::Z);
        std::vector<std::vector<TimedState>> by_node(g.size());
        for (int walk = 0; walk < 4; ++walk) {
            for (const auto& s : random_walk(p, rng, 12)) {
                by_node[*g.locate(s)].push_back(s);
            }
        }
        for (const auto& states : by_node) {
            for (std::size_t i = 1; i < states.size() && i < 4; ++i) {
                const Process u{p.automaton, states[0]};
                const Process w{p.automaton, states[i]};
                REQUIRE(oracle_check(RelationId::TaBisim, u, w));
            }
        }
    }
}

TEST_CASE("states in different Z nodes are not time-abstract bisimilar", "[properties]") {
    std::mt19937_64 rng(51);
    for (const Process& p : sample_processes(50, 20)) {
        const ZvGraph g = build_graph(p, Variant::Z);
        std::vector<std::optional<TimedState>> rep(g.size());
        for (const auto& s : random_walk(p, rng, 25)) {
            auto& r = rep[*g.locate(s)];
            if (!r) {
                r = s;
            }
        }
        for (std::size_t i = 0; i < rep.size(); ++i) {
            for (std::size_t j = i + 1; j < rep.size(); ++j) {
                if (rep[i] && rep[j]) {
                    REQUIRE_FALSE(oracle_check(RelationId::TaBisim, {p.automaton, *rep[i]}, {p.automaton, *rep[j]}));
                }
            }
        }
    }
}

TEST_CASE("Z graphs are bisimilar exactly when the processes are", "[properties]") {
    for (const auto& pair : testkit::random_corpus(61, 60)) {
        INFO(pair.name);
        CHECK(check(RelationId::TaBisim, pair.left, pair.right).holds ==
              oracle_check(RelationId::TaBisim, pair.left, pair.right));
    }
}

TEST_CASE("graph sizes are bounded by the region graph", "[properties]") {
    for (const Process& p : sample_processes(70, 40)) {
        const ZvGraph z1 = build_graph(p, Variant::Z1);
        const ZvGraph z = merge_bisimilar(z1);
        CHECK(z.size() <= z1.size());
        CHECK(z1.size() <= build_region_graph(p).size());
    }
}
