// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <random>

#include "tgl/lts.hpp"

using namespace tgl;

namespace {

// Naive greatest fixpoints over all state pairs.
std::vector<std::vector<bool>> naive_simulation(const Lts& l, bool symmetric) {
    const std::size_t n = l.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, true));
    bool changed = true;
    auto answered = [&](std::size_t p, std::size_t q) {
        for (auto [a, p2] : l.out(p)) {
            bool ok = false;
            for (auto [b, q2] : l.out(q)) {
                ok = ok || (a == b && r[p2][q2]);
            }
            if (!ok) {
                return false;
            }
        }
        return true;
    };
    while (changed) {
        changed = false;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                if (r[p][q] && !(answered(p, q) && (!symmetric || answered(q, p)))) {
                    r[p][q] = false;
                    changed = true;
                }
            }
        }
    }
    return r;
}

Lts random_lts(std::mt19937_64& rng) {
    const std::size_t n = 2 + rng() % 7;
    Lts l(n);
    const std::size_t edges = rng() % (2 * n + 1);
    for (std::size_t i = 0; i < edges; ++i) {
        l.add(rng() % n, rng() % 2, rng() % n);
    }
    return l;
}

}  // namespace

TEST_CASE("edges are stored sorted without duplicates", "[lts]") {
    Lts l(2);
    l.add(0, 1, 1);
    l.add(0, 0, 1);
    l.add(0, 1, 1);
    CHECK(l.out(0) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 1}});
}

TEST_CASE("a.b + a.c is not bisimilar to a.(b + c)", "[lts]") {
    // 0 -a-> 1 -b-> 2, 0 -a-> 3 -c-> 4 versus 5 -a-> 6 -b-> 7, 6 -c-> 8
    Lts l(9);
    l.add(0, 0, 1);
    l.add(1, 1, 2);
    l.add(0, 0, 3);
    l.add(3, 2, 4);
    l.add(5, 0, 6);
    l.add(6, 1, 7);
    l.add(6, 2, 8);
    const auto b = bisimulation_classes(l);
    CHECK(b[0] != b[5]);
    CHECK(b[2] == b[4]);
    CHECK(b[2] == b[8]);
    const auto sim = similarity(l);
    CHECK(sim[0][5]);
    CHECK_FALSE(sim[5][0]);
    const auto eq = simulation_equivalence_classes(l);
    CHECK(eq[0] != eq[5]);
    CHECK(b[0] == 0);
}

TEST_CASE("partition refinement agrees with the naive fixpoint", "[lts]") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 300; ++round) {
        const Lts l = random_lts(rng);
        const auto bis = naive_simulation(l, true);
        const auto sim = naive_simulation(l, false);
        const auto classes = bisimulation_classes(l);
        const auto fast_sim = similarity(l);
        const auto eq = simulation_equivalence_classes(l);
        for (std::size_t p = 0; p < l.size(); ++p) {
            for (std::size_t q = 0; q < l.size(); ++q) {
                REQUIRE((classes[p] == classes[q]) == bis[p][q]);
                REQUIRE(fast_sim[p][q] == sim[p][q]);
                REQUIRE((eq[p] == eq[q]) == (sim[p][q] && sim[q][p]));
            }
        }
    }
}
