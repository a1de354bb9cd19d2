// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tgl/game.hpp"
#include "tgl/model.hpp"

namespace tgl {

enum class Role { Attacker, Defender };
enum class SessionStatus { Live, AttackerWon, DefenderWon };

std::string_view to_string(Role r);
std::string_view to_string(SessionStatus s);
std::optional<Role> parse_role(std::string_view s);

/// Thrown for any command sent after the session reached a terminal status.
class GameOver : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct HistoryEntry {
    Role role = Role::Attacker;
    bool human = false;
    std::size_t disjunct = 0;
    /// Attacker entries: the move played. Defender entries: side = the side answered on,
    /// label = the attacker's label, target = the reply node.
    AttackerMove move;
    /// Pebbles after the entry; for attacker entries only the moved pebble has changed.
    std::size_t left = 0;
    std::size_t right = 0;

    nlohmann::ordered_json to_json() const;
};

/// A legal attacker move together with the number of defender replies it admits.
struct MoveOption {
    AttackerMove move;
    std::size_t replies = 0;
};

/// Interactive play of one game between a human and the engine. A disjunctive game is played
/// one disjunct after the other: when the defender loses a disjunct, play restarts from the
/// start pair in the next one.
///
/// Not thread-safe; the owner serializes commands.
class Session {
public:
    Session(const GameSpec& spec, const Process& left, const Process& right, Role human,
            const SolveOptions& options = {});

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    Role human() const { return human_; }
    SessionStatus status() const { return status_; }
    const GameSpec& spec() const { return spec_; }
    const std::vector<HistoryEntry>& history() const { return history_; }
    std::size_t disjunct() const { return disjunct_; }
    std::size_t left() const { return pos_.left; }
    std::size_t right() const { return pos_.right; }
    std::size_t rounds_played() const { return rounds_; }
    /// The attacker move the defender has to answer, if any.
    const std::optional<AttackerMove>& pending() const { return pending_; }
    /// Reason for the terminal status; empty while live.
    const std::string& outcome() const { return outcome_; }
    /// Rank of the current pair in the current disjunct (attacker's better side before the
    /// first move); std::nullopt when the defender survives from here.
    std::optional<std::size_t> rank() const;
    /// Whose turn it is, std::nullopt once the session is over.
    std::optional<Role> turn() const;

    const SolvedGame& game() const { return *games_.at(disjunct_); }

    /// Legal moves for the attacker; empty unless it is the attacker's turn.
    std::vector<MoveOption> legal_moves() const;
    /// Legal replies for the defender; empty unless it is the defender's turn.
    std::vector<std::size_t> legal_replies() const;

    /// Human attacker move followed by the engine's reply. Throws IllegalMove or GameOver.
    void play(const AttackerMove& m);
    /// Human defender reply followed by the engine's next attack. Throws IllegalMove or GameOver.
    void reply(std::size_t node);

    /// Everything except an identifier: spec, boards, configuration, history and status.
    nlohmann::ordered_json record() const;
    /// The legal-move list for whoever is to move.
    nlohmann::ordered_json legal_moves_json() const;

private:
    /// The position the attacker's move `m` is played from.
    Position origin_for(Side side) const;
    void start_disjunct();
    void apply_attacker(const AttackerMove& m, bool by_human);
    void apply_reply(std::size_t node, bool by_human);
    void after_round();
    void lose_disjunct(const std::string& why);
    void engine_attack();
    void check_human(Role r) const;

    GameSpec spec_;
    Role human_;
    std::map<Variant, std::pair<std::shared_ptr<const ZvGraph>, std::shared_ptr<const ZvGraph>>> boards_;
    std::vector<const GameSpec*> disjuncts_;
    std::vector<std::unique_ptr<SolvedGame>> games_;

    std::size_t disjunct_ = 0;
    Position pos_;
    bool first_move_ = true;
    std::size_t rounds_ = 0;
    std::optional<AttackerMove> pending_;
    Position pending_origin_;
    SessionStatus status_ = SessionStatus::Live;
    std::string outcome_;
    std::vector<HistoryEntry> history_;
};

} // namespace tgl
