// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tgl/zvg.hpp"

namespace tgl {

/// A natural number or unbounded (std::nullopt).
using Budget = std::optional<std::size_t>;

enum class DefenderPattern { A, EA, EAE };
enum class Beta { None, Eq, FloorEq, G1Leq, G2Leq };
enum class Side { Left, Right };

std::string_view to_string(DefenderPattern p);
std::string_view to_string(Beta b);
std::string_view to_string(Side s);
Side other(Side s);

/// The game n-Γ^{G,α,β}_k, optionally disjoined with a second game.
struct GameSpec {
    Budget alternations;  // n
    Budget rounds;        // k
    Variant graph = Variant::Z;
    DefenderPattern defender = DefenderPattern::A;
    Beta beta = Beta::None;
    std::shared_ptr<const GameSpec> disjunct;

    /// {"n", "k", "G", "alpha", "beta", "or"}.
    nlohmann::ordered_json to_json() const;
    /// Throws std::invalid_argument on malformed input.
    static GameSpec from_json(const nlohmann::json& j);

    bool operator==(const GameSpec& other) const;
};

class IllegalMove : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct AttackerMove {
    Side side = Side::Left;
    std::string label;  // an action or kEpsilon
    std::size_t target = 0;

    auto operator<=>(const AttackerMove&) const = default;
};

/// A configuration: the two pebbles, the side the attacker last played on and the number of
/// side switches still allowed. For unbounded alternations `last` and `budget` are unused.
struct Position {
    std::size_t left = 0;
    std::size_t right = 0;
    Side last = Side::Left;
    std::size_t budget = 0;

    auto operator<=>(const Position&) const = default;
};

/// Defender answers on `board` from `node` to an attacker move labelled `label`.
std::vector<std::size_t> defender_replies(const ZvGraph& board, std::size_t node, const std::string& label,
                                          DefenderPattern pattern);

/// β on two span values. `initial_pair` selects the relaxed ⌊=⌋ comparison.
bool beta_holds(Beta beta, const SymbolicValue& left, const SymbolicValue& right, bool initial_pair);

struct SolveOptions {
    /// On the start pair compare the residual delays of the start states instead of node spans.
    bool residual_start_spans = true;
    /// When set, the unbounded winning region is computed by chaotic iteration in a
    /// pseudo-random order (used to check order independence).
    std::optional<std::uint64_t> shuffle_seed;
};

struct StrategyNode {
    Position position;
    std::size_t rank = 0;
    /// Absent at leaves where β already fails.
    std::optional<AttackerMove> move;
    /// Defender reply node and the continuation; empty when the defender cannot answer.
    std::vector<std::pair<std::size_t, StrategyNode>> replies;

    nlohmann::ordered_json to_json() const;
};

/// One solved game (no disjunction). Keeps pointers to the boards, which must outlive it.
class SolvedGame {
public:
    SolvedGame(const GameSpec& spec, const ZvGraph& left, const ZvGraph& right, const SolveOptions& options = {});

    const GameSpec& spec() const { return spec_; }
    const ZvGraph& left() const { return *left_; }
    const ZvGraph& right() const { return *right_; }
    const ZvGraph& board(Side s) const { return s == Side::Left ? *left_ : *right_; }

    bool defender_wins() const;
    /// Attacker-optimal start position (its rank is the game's rank).
    Position start_position() const;
    /// The two start positions; the attacker picks the side of its first move freely.
    std::vector<Position> start_positions() const;

    /// Rounds the attacker needs from `p`; std::nullopt when the defender survives the game.
    std::optional<std::size_t> rank(const Position& p) const;
    bool winning(const Position& p) const { return !rank(p).has_value(); }
    bool beta_at(std::size_t left, std::size_t right) const;

    /// All legal attacker moves from `p`, sorted.
    std::vector<AttackerMove> attacker_moves(const Position& p) const;
    /// Defender replies to `m` from `p`; throws IllegalMove when `m` is not legal.
    std::vector<std::size_t> replies(const Position& p, const AttackerMove& m) const;
    Position after(const Position& p, const AttackerMove& m, std::size_t reply) const;

    /// Smallest rank-decreasing attacker move; std::nullopt if `p` is winning for the defender
    /// or β fails there already.
    std::optional<AttackerMove> best_attacker_move(const Position& p) const;
    /// Reply keeping the defender's rank highest (winning first), smallest node on ties.
    std::optional<std::size_t> best_defender_reply(const Position& p, const AttackerMove& m) const;

    /// Pairs (left node, right node) from which the defender wins the game.
    std::vector<std::pair<std::size_t, std::size_t>> winning_pairs() const;
    /// Rank of a pair as a start: the attacker's better side.
    std::optional<std::size_t> pair_rank(std::size_t left, std::size_t right) const;

    /// Present exactly when the defender loses.
    std::optional<StrategyNode> attacker_strategy() const;

    bool unbounded_alternations() const { return !spec_.alternations.has_value(); }

private:
    std::size_t index(const Position& p) const;
    Position position_at(std::size_t idx) const;
    std::size_t position_count() const;
    StrategyNode build_tree(const Position& p) const;

    GameSpec spec_;
    SolveOptions options_;
    const ZvGraph* left_;
    const ZvGraph* right_;
    std::size_t budget_slots_ = 1;
    /// Rank per position index; kInfinite for defender-winning positions.
    std::vector<std::size_t> rank_;
    std::vector<bool> beta_;
    std::vector<bool> chaotic_winning_;

    static constexpr std::size_t kInfinite = static_cast<std::size_t>(-1);
};

struct GameResult {
    bool defender_wins = false;
    /// Index of the disjunct the defender wins (the first when both are won).
    std::optional<std::size_t> winning_disjunct;
    std::vector<SolvedGame> parts;

    /// Union over disjuncts.
    std::vector<std::pair<std::size_t, std::size_t>> winning_pairs() const;
};

/// Solves the game on two boards of the game's graph variant; throws std::invalid_argument on a
/// variant mismatch.
GameResult solve(const GameSpec& spec, const ZvGraph& left, const ZvGraph& right, const SolveOptions& options = {});

struct CheckOutcome {
    bool ok = true;
    std::string message;
};

/// Replays `tree` against every defender reply: each branch must end in a β violation or a
/// stuck defender within rank(start) rounds.
CheckOutcome validate_attacker_strategy(const SolvedGame& game, const StrategyNode& tree);

/// Checks that the game's winning positions satisfy β and answer every attacker move inside
/// the set. Only meaningful for unbounded rounds.
CheckOutcome validate_winning_region(const SolvedGame& game);

} // namespace tgl
