// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <random>

#include "tgl/zone.hpp"

using namespace tgl;

// Zone operations are compared pointwise against their set definitions on a grid of
// valuations with denominator 4, with witnesses searched on a finer grid of denominator 8.
namespace {

const ClockNames kXY = std::make_shared<const std::vector<std::string>>(std::vector<std::string>{"x", "y"});

constexpr int kGridMax = 20;  // 5 in quarters

std::vector<Valuation> grid() {
    std::vector<Valuation> out;
    for (int i = 0; i <= kGridMax; ++i) {
        for (int j = 0; j <= kGridMax; ++j) {
            out.push_back({Rational(i, 4), Rational(j, 4)});
        }
    }
    return out;
}

std::vector<Rational> fine_steps(int up_to) {
    std::vector<Rational> out;
    for (int i = 0; i <= 8 * up_to; ++i) {
        out.emplace_back(i, 8);
    }
    return out;
}

Zone random_zone(std::mt19937_64& rng) {
    static constexpr Rel kRels[] = {Rel::Less, Rel::LessEq, Rel::Eq, Rel::GreaterEq, Rel::Greater};
    std::uniform_int_distribution<int> c(0, 3), clock(0, 1), rel(0, 4), atoms(0, 3);
    Zone z = Zone::universal(kXY);
    const int n = atoms(rng);
    for (int i = 0; i < n; ++i) {
        const Rel r = kRels[rel(rng)];
        z = z.intersect(ClockConstraint{static_cast<ClockId>(clock(rng)), r == Rel::Eq && i > 1 ? Rel::LessEq : r, c(rng)});
    }
    if (c(rng) == 0) {
        const int k = c(rng) - 1;
        z = z.constrain(1, 2, rng() % 2 ? Bound::weak(k) : Bound::strict(k));
    }
    return z;
}

std::vector<Zone> sample_zones(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<Zone> out;
    while (static_cast<int>(out.size()) < count) {
        Zone z = random_zone(rng);
        if (!z.is_empty()) {
            out.push_back(std::move(z));
        }
    }
    return out;
}

Valuation shifted(const Valuation& v, const Rational& d) { return {v[0] + d, v[1] + d}; }

}  // namespace

TEST_CASE("bound encoding orders strict below weak", "[zone]") {
    CHECK(Bound::strict(1) < Bound::weak(1));
    CHECK(Bound::weak(1) < Bound::strict(2));
    CHECK(Bound::weak(5) < Bound::infinity());
    CHECK((Bound::weak(1) + Bound::weak(2)) == Bound::weak(3));
    CHECK((Bound::weak(1) + Bound::strict(2)) == Bound::strict(3));
    CHECK((Bound::strict(1) + Bound::infinity()).is_infinite());
    CHECK(Bound::weak(2).negated() == Bound::strict(-2));
    CHECK(Bound::strict(-2).negated() == Bound::weak(2));
}

TEST_CASE("intersection matches pointwise conjunction", "[zone]") {
    const auto zones = sample_zones(1, 30);
    for (std::size_t i = 0; i + 1 < zones.size(); ++i) {
        const Zone both = zones[i].intersect(zones[i + 1]);
        for (const auto& v : grid()) {
            REQUIRE(both.contains(v) == (zones[i].contains(v) && zones[i + 1].contains(v)));
        }
        CHECK(both.intersects(zones[i]) == !both.is_empty());
    }
}

TEST_CASE("up and down match their set definitions", "[zone]") {
    const auto steps = fine_steps(6);
    for (const Zone& z : sample_zones(2, 25)) {
        const Zone up = z.up();
        const Zone down = z.down();
        for (const auto& v : grid()) {
            bool in_up = false;
            bool in_down = false;
            for (const auto& d : steps) {
                if (d <= v[0] && d <= v[1] && z.contains(shifted(v, -d))) {
                    in_up = true;
                }
                if (z.contains(shifted(v, d))) {
                    in_down = true;
                }
            }
            INFO(z.to_string() << " at (" << v[0] << "," << v[1] << ")");
            REQUIRE(up.contains(v) == in_up);
            REQUIRE(down.contains(v) == in_down);
        }
    }
}

TEST_CASE("reset and free match their set definitions", "[zone]") {
    const auto steps = fine_steps(8);
    for (const Zone& z : sample_zones(3, 25)) {
        const Zone rx = z.reset({0});
        const Zone fy = z.free({1});
        const Zone rxy = z.reset({0, 1});
        for (const auto& v : grid()) {
            bool exists_x = false;
            bool exists_y = false;
            for (const auto& c : steps) {
                exists_x = exists_x || z.contains({c, v[1]});
                exists_y = exists_y || z.contains({v[0], c});
            }
            REQUIRE(rx.contains(v) == (v[0] == Rational(0) && exists_x));
            REQUIRE(fy.contains(v) == exists_y);
            REQUIRE(rxy.contains(v) == (v[0] == Rational(0) && v[1] == Rational(0)));
        }
    }
}

TEST_CASE("subtraction yields disjoint pieces covering the difference", "[zone]") {
    const auto zones = sample_zones(4, 30);
    for (std::size_t i = 0; i + 1 < zones.size(); ++i) {
        const auto pieces = zones[i].subtract(zones[i + 1]);
        for (const auto& v : grid()) {
            int hits = 0;
            for (const auto& p : pieces) {
                hits += p.contains(v) ? 1 : 0;
            }
            REQUIRE(hits <= 1);
            REQUIRE((hits == 1) == (zones[i].contains(v) && !zones[i + 1].contains(v)));
        }
    }
}

TEST_CASE("extrapolation only widens and is idempotent", "[zone]") {
    const std::vector<std::int64_t> m{2, 1};
    for (const Zone& z : sample_zones(5, 40)) {
        const Zone e = z.extrapolate(m);
        CHECK(z.subset_of(e));
        CHECK(e.extrapolate(m) == e);
    }
    // Inside the constants nothing changes.
    const Zone inner = Zone::universal(kXY).intersect(Guard{{0, Rel::Less, 2}, {1, Rel::LessEq, 1}});
    CHECK(inner.extrapolate(m) == inner);
    // Above the constant the upper bound disappears and the lower bound stays strict at M.
    const Zone high = Zone::universal(kXY).intersect(Guard{{0, Rel::GreaterEq, 3}, {0, Rel::LessEq, 4}, {1, Rel::Eq, 0}});
    const Zone e = high.extrapolate(m);
    CHECK(e.contains({Rational(100), Rational(0)}));
    CHECK(e.contains({Rational(5, 2), Rational(0)}));
    CHECK_FALSE(e.contains({Rational(2), Rational(0)}));
    CHECK_FALSE(e.contains({Rational(3), Rational(1, 2)}));
}

TEST_CASE("region_of builds the integer-bounded hull of a valuation", "[zone]") {
    const Zone r = Zone::region_of(kXY, {Rational(1, 2), Rational(3, 2)});
    CHECK(r.to_string() == "0<x<1 & 1<y<2 & x-y=-1");
    CHECK(r.contains({Rational(1, 4), Rational(5, 4)}));
    CHECK_FALSE(r.contains({Rational(1, 4), Rational(3, 2)}));
    const Zone corner = Zone::region_of(kXY, {Rational(1), Rational(0)});
    CHECK(corner.to_string() == "x=1 & y=0");
}

TEST_CASE("zones print as sorted conjunctions", "[zone]") {
    CHECK(Zone::zero(kXY).to_string() == "x=0 & y=0");
    CHECK(Zone::universal(kXY).to_string() == "true");
    CHECK(Zone::zero(kXY).up().to_string() == "x-y=0");
    CHECK(Zone::universal(kXY).intersect(Guard{{0, Rel::Greater, 1}, {0, Rel::LessEq, 2}}).to_string() == "1<x<=2");
    CHECK(Zone::universal(kXY).intersect(Guard{{0, Rel::Less, 1}, {0, Rel::Greater, 1}}).to_string() == "false");
}

TEST_CASE("canonical decomposition partitions by every atom", "[zone]") {
    const Guard inv{{0, Rel::LessEq, 3}};
    const std::vector<Guard> guards{{{0, Rel::Eq, 1}}, {{1, Rel::Greater, 2}, {0, Rel::Less, 2}}};
    const Zone base = Zone::zero(kXY).up().intersect(inv);
    const auto cells = canonical_decomposition(inv, guards, base);
    std::vector<ClockConstraint> atoms(inv.begin(), inv.end());
    for (const auto& g : guards) {
        atoms.insert(atoms.end(), g.begin(), g.end());
    }
    for (const auto& v : grid()) {
        int hits = 0;
        for (const auto& c : cells) {
            hits += c.contains(v) ? 1 : 0;
        }
        REQUIRE(hits == (base.contains(v) ? 1 : 0));
    }
    for (const auto& c : cells) {
        for (const auto& a : atoms) {
            int truth = -1;
            for (const auto& v : grid()) {
                if (!c.contains(v)) {
                    continue;
                }
                const int t = satisfies(v, a) ? 1 : 0;
                REQUIRE((truth == -1 || truth == t));
                truth = t;
            }
        }
    }
    // On the diagonal: 0<=x<1, x=1, 1<x<2, x=2, 2<x<=3.
    CHECK(cells.size() == 5);
}
