// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tgl/lts.hpp"
#include "tgl/model.hpp"
#include "tgl/relations.hpp"

namespace tgl {

/// A clock region at a location. For every clock: its integer part, clamped to M + 1 when
/// the clock exceeds its maximal constant M, and the rank of its fractional part among the
/// clocks not beyond M (0 = fraction zero, equal fractions share a rank, ranks consecutive).
/// Clocks beyond M have rank -1.
struct RegionState {
    LocationId location = 0;
    std::vector<std::int64_t> ipart;
    std::vector<int> rank;

    auto operator<=>(const RegionState&) const = default;
};

/// Reachable region graph. Labels 0..|Act|-1 are the automaton's actions (sorted), label
/// |Act| is the immediate time-successor step.
struct RegionLts {
    std::vector<std::string> actions;
    std::vector<std::int64_t> max_constants;
    std::vector<RegionState> states;
    std::size_t initial = 0;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;

    std::size_t tick_label() const { return actions.size(); }
    std::size_t size() const { return states.size(); }
};

/// Region of a concrete valuation.
RegionState region_of(LocationId l, const Valuation& v, const std::vector<std::int64_t>& max_constants);

/// Reachable region graph from the process's start state, using the automaton's global
/// per-clock maximal constants.
RegionLts build_region_graph(const Process& p);

/// |L| * (2m + 2)^c * c! * 2^c for c clocks and largest constant m.
std::uint64_t region_count_bound(const TimedAutomaton& a);

/// Answer of the definitional greatest fixpoint on the product of region graphs. Supports
/// ta-bisim, ta-delay-bisim, ta-obs-bisim and their simulation equivalences; throws
/// std::invalid_argument for the timed family.
bool oracle_check(RelationId r, const Process& left, const Process& right);

/// Second route for ta-bisim: coarsest bisimulation of the disjoint union of both region
/// graphs (delay steps closed reflexively and transitively), comparing the start classes.
bool oracle_ta_bisim_by_partition(const Process& left, const Process& right);

/// Bounded search for a play on the timed transition systems in which the attacker wins the
/// timed bisimulation game, using delays that are multiples of `granularity` (up to one
/// more than the largest constant). Returns the attacker's principal line, one step per
/// entry, or std::nullopt when none exists within `depth` moves.
std::optional<std::vector<std::string>> refute_timed_bisim(const Process& left, const Process& right,
                                                           const Rational& granularity, std::size_t depth);

/// As refute_timed_bisim for the timed simulation game in which the attacker always moves
/// on the left process (a counterexample to "right timed-simulates left").
std::optional<std::vector<std::string>> refute_timed_simulation(const Process& left, const Process& right,
                                                                const Rational& granularity, std::size_t depth);

} // namespace tgl
