// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tgl/lts.hpp"
#include "tgl/model.hpp"
#include "tgl/symbolic.hpp"
#include "tgl/zone.hpp"

namespace tgl {

enum class Variant { Z1, Z, Zsim };

std::string_view to_string(Variant v);
/// Accepts "Z1"/"Z"/"Zsim" in any letter case; std::nullopt otherwise.
std::optional<Variant> parse_variant(std::string_view text);

/// Label of delay moves between nodes.
inline constexpr std::string_view kEpsilon = "ε";

/// One convex piece of a node: a zone at a single location.
struct Cell {
    LocationId location = 0;
    Zone zone;
};

struct ZvgNode {
    std::size_t id = 0;
    std::vector<LocationId> locations;  // sorted, unique
    std::vector<Cell> cells;
    std::vector<SymbolicValue> clock_ranges;
    SymbolicValue span;
    std::vector<ClockId> critical_clocks;  // ordered by clock name
    /// Ids of the Z1 nodes merged into this one (just {id} for Z1 graphs).
    std::vector<std::size_t> members;

    bool contains(const TimedState& s) const;
};

/// Builds a node over `cells`, filling ranges, span and critical clocks.
ZvgNode make_node(std::size_t id, std::vector<Cell> cells);

/// max_x over the cells minus min_x; infinity when some cell is unbounded in x.
SymbolicValue clock_range(const ZvgNode& n, ClockId x);
/// Minimum of all clock ranges.
SymbolicValue node_span(const ZvgNode& n);
/// max_x(n) - v(x) for the first critical clock x; infinity when every range is infinite.
/// Throws std::invalid_argument when `s` is not in the node.
SymbolicValue max_admissible_delay(const ZvgNode& n, const TimedState& s);

struct ZvgEdge {
    std::size_t source = 0;
    std::string label;
    std::size_t target = 0;

    auto operator<=>(const ZvgEdge&) const = default;
};

/// A zone valuation graph of one process. Immutable once built.
class ZvGraph {
public:
    Variant variant() const { return variant_; }
    const Process& process() const { return process_; }
    const TimedAutomaton& automaton() const { return process_.automaton; }

    const std::vector<ZvgNode>& nodes() const { return nodes_; }
    const ZvgNode& node(std::size_t id) const { return nodes_.at(id); }
    std::size_t size() const { return nodes_.size(); }
    std::size_t initial() const { return initial_; }

    /// Action alphabet of the automaton, sorted.
    const std::vector<std::string>& actions() const { return process_.automaton.actions(); }

    /// Successors under an action, or the reflexive-transitive ε closure for kEpsilon.
    /// Sorted; empty for unknown labels.
    const std::vector<std::size_t>& successors(std::size_t node, std::string_view label) const;
    const std::vector<std::size_t>& epsilon_closure(std::size_t node) const { return eps_.at(node); }

    /// Stored edges: every action edge plus the ε edges that are neither self-loops nor
    /// implied by transitivity. Sorted.
    const std::vector<ZvgEdge>& edges() const { return edges_; }

    std::optional<std::size_t> locate(const TimedState& s) const;

    /// Residual delay of the process's own start state inside the initial node.
    SymbolicValue start_residual_span() const;

    /// Labels 0..|Act|-1 are the actions, label |Act| is ε (closed).
    Lts to_lts() const;

private:
    friend class ZvgAssembler;

    Variant variant_ = Variant::Z1;
    Process process_;
    std::vector<ZvgNode> nodes_;
    std::size_t initial_ = 0;
    std::vector<std::vector<std::vector<std::size_t>>> act_;  // [node][action index]
    std::vector<std::vector<std::size_t>> eps_;
    std::vector<ZvgEdge> edges_;

    explicit ZvGraph(Process p) : process_(std::move(p)) {}
};

/// Per-location, per-clock maximal constants: result[l][x].
std::vector<std::vector<std::int64_t>> max_constants(const TimedAutomaton& a);

/// Forward exploration, canonical decomposition and backward stabilization.
ZvGraph build_phase1(const Process& p);
/// Quotient of a Z1 graph by strong bisimulation with ε visible.
ZvGraph merge_bisimilar(const ZvGraph& z1);
/// Quotient of a Z1 graph by simulation equivalence.
ZvGraph merge_sim_equivalent(const ZvGraph& z1);

ZvGraph build_graph(const Process& p, Variant v);

std::string export_dot(const ZvGraph& g);
nlohmann::ordered_json export_json(const ZvGraph& g);

/// Text of a node's zone: one "location: zone" entry per cell joined by " | ".
std::string node_zone_text(const ZvGraph& g, const ZvgNode& n);

} // namespace tgl
