// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tgl/rational.hpp"

namespace tgl {

using ClockId = std::size_t;
using LocationId = std::size_t;

enum class Rel { Less, LessEq, Eq, GreaterEq, Greater };

std::string_view to_string(Rel rel);

/// Atomic constraint `clock rel bound` with a natural-number bound.
struct ClockConstraint {
    ClockId clock = 0;
    Rel rel = Rel::LessEq;
    std::int64_t bound = 0;

    bool operator==(const ClockConstraint&) const = default;
};

/// Conjunction of atoms; the empty guard is `true`.
using Guard = std::vector<ClockConstraint>;

using Valuation = std::vector<Rational>;

bool satisfies(const Valuation& v, const ClockConstraint& c);
bool satisfies(const Valuation& v, const Guard& g);

struct Edge {
    LocationId source = 0;
    Guard guard;
    std::string action;
    std::vector<ClockId> resets;  // sorted, unique
    LocationId target = 0;

    bool operator==(const Edge&) const = default;
};

struct Location {
    std::string name;
    Guard invariant;  // upper bounds only (x <= c, x < c)

    bool operator==(const Location&) const = default;
};

struct TimedState {
    LocationId location = 0;
    Valuation valuation;

    bool operator==(const TimedState&) const = default;
    auto operator<=>(const TimedState&) const = default;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A timed automaton (L, l0, E, I) over clocks C. Immutable after construction;
/// the constructor validates every cross reference.
class TimedAutomaton {
public:
    TimedAutomaton(std::string name,
                   std::vector<std::string> clocks,
                   std::vector<Location> locations,
                   LocationId initial,
                   std::vector<Edge> edges);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& clocks() const { return clocks_; }
    std::size_t clock_count() const { return clocks_.size(); }
    const std::vector<Location>& locations() const { return locations_; }
    const Location& location(LocationId id) const { return locations_.at(id); }
    LocationId initial() const { return initial_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Sorted, de-duplicated action alphabet inferred from the edges.
    const std::vector<std::string>& actions() const { return actions_; }

    std::optional<ClockId> find_clock(std::string_view name) const;
    std::optional<LocationId> find_location(std::string_view name) const;

    /// Indices of the edges leaving `l`, in declaration order.
    const std::vector<std::size_t>& outgoing(LocationId l) const { return outgoing_.at(l); }

    /// (l0, v0).
    TimedState initial_state() const;

    /// Largest constant compared against each clock anywhere in the automaton.
    std::vector<std::int64_t> global_max_constants() const;

    bool is_valid_state(const TimedState& s) const;

private:
    std::string name_;
    std::vector<std::string> clocks_;
    std::vector<Location> locations_;
    LocationId initial_;
    std::vector<Edge> edges_;
    std::vector<std::string> actions_;
    std::vector<std::vector<std::size_t>> outgoing_;
};

/// An automaton together with the process (state) under analysis.
struct Process {
    TimedAutomaton automaton;
    TimedState state;
};

/// A TLTS label: an action name or a non-negative delay.
using Label = std::variant<std::string, Rational>;

/// All successors of `s` under `label` in T(A). Empty when no transition exists.
std::vector<TimedState> tlts_step(const TimedAutomaton& a, const TimedState& s, const Label& label);

} // namespace tgl
