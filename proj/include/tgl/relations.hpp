// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tgl/game.hpp"

namespace tgl {

enum class RelationId {
    TimedBisim,
    IntervalBisim,
    TimedPrebisim,
    TaBisim,
    TaDelayBisim,
    TaObsBisim,
    TimedSimEquiv,
    TaSimEquiv,
    TaDelaySimEquiv,
    TaObsSimEquiv,
};

const std::vector<RelationId>& all_relations();
/// Command-line name such as "timed-bisim".
std::string_view to_string(RelationId r);
/// Short mathematical symbol such as "~t".
std::string_view symbol(RelationId r);
std::optional<RelationId> parse_relation(std::string_view name);

/// The game characterizing each relation.
GameSpec game_for(RelationId r);

/// Zone valuation graphs of one process in every variant, built once.
struct BoardSet {
    std::shared_ptr<const ZvGraph> z1;
    std::shared_ptr<const ZvGraph> z;
    std::shared_ptr<const ZvGraph> zsim;

    static BoardSet build(const Process& p);
    const ZvGraph& get(Variant v) const;
};

struct Verdict {
    RelationId relation = RelationId::TaBisim;
    bool holds = false;
    std::shared_ptr<const ZvGraph> left_board;
    std::shared_ptr<const ZvGraph> right_board;
    GameResult result;

    /// For the prebisimulation: "left" when the left process is at least as fast as the
    /// right one, "right" for the converse; empty otherwise.
    std::string faster_side;

    /// {"relation", "holds", "certificate"} plus "fasterSide" when set.
    nlohmann::ordered_json to_json() const;
    /// Human-readable multi-line summary.
    std::string to_table() const;
};

Verdict check(RelationId r, const Process& left, const Process& right, const SolveOptions& options = {});
Verdict check(RelationId r, const BoardSet& left, const BoardSet& right, const SolveOptions& options = {});

/// One-directional extension: does `right` simulate `left` in the simulation game underlying
/// the sim-equivalence `r` (attacker confined to the left board)?
bool simulates(RelationId r, const BoardSet& left, const BoardSet& right);

/// r1 implies r2 for every pair of processes.
struct Implication {
    RelationId from;
    RelationId to;
};

/// ∼t ⇒ ∼i ⇒ ≾ ⇒ ∼u ⇒ ∼y ⇒ ∼o plus each bisimilarity ⇒ its simulation equivalence.
const std::vector<Implication>& implication_lattice();

struct NamedPair {
    std::string name;
    Process left;
    Process right;
};

struct AuditRow {
    std::string name;
    std::vector<std::pair<RelationId, bool>> verdicts;
    bool holds(RelationId r) const;
};

struct AuditViolation {
    std::string pair;
    Implication edge;
};

struct AuditReport {
    std::vector<AuditRow> rows;
    std::vector<AuditViolation> violations;
    /// Per lattice edge, the names of pairs where `to` holds but `from` does not.
    std::vector<std::pair<Implication, std::vector<std::string>>> separations;

    nlohmann::ordered_json to_json() const;
    std::string to_table() const;
};

/// Checks every relation on every pair and reports lattice violations and strict separations.
/// `workers` = 0 picks the hardware concurrency.
AuditReport hierarchy_audit(const std::vector<NamedPair>& corpus, unsigned workers = 0);

} // namespace tgl
