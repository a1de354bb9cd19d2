// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/session.hpp"

#include <algorithm>
#include <limits>

#include "tgl/zvg.hpp"

namespace tgl {

std::string_view to_string(Role r) { return r == Role::Attacker ? "attacker" : "defender"; }

std::string_view to_string(SessionStatus s) {
    switch (s) {
    case SessionStatus::Live: return "live";
    case SessionStatus::AttackerWon: return "attackerWon";
    case SessionStatus::DefenderWon: return "defenderWon";
    }
    return "live";
}

std::optional<Role> parse_role(std::string_view s) {
    if (s == "attacker") {
        return Role::Attacker;
    }
    if (s == "defender") {
        return Role::Defender;
    }
    return std::nullopt;
}

nlohmann::ordered_json HistoryEntry::to_json() const {
    nlohmann::ordered_json j;
    j["role"] = std::string(tgl::to_string(role));
    j["human"] = human;
    j["disjunct"] = disjunct;
    j["side"] = std::string(tgl::to_string(move.side));
    j["label"] = move.label;
    j["target"] = move.target;
    j["pair"] = {left, right};
    return j;
}

Session::Session(const GameSpec& spec, const Process& left, const Process& right, Role human,
                 const SolveOptions& options)
    : spec_(spec), human_(human) {
    for (const GameSpec* d = &spec_; d != nullptr; d = d->disjunct.get()) {
        disjuncts_.push_back(d);
        auto& pair = boards_[d->graph];
        if (!pair.first) {
            pair.first = std::make_shared<const ZvGraph>(build_graph(left, d->graph));
            pair.second = std::make_shared<const ZvGraph>(build_graph(right, d->graph));
        }
        games_.push_back(std::make_unique<SolvedGame>(*d, *pair.first, *pair.second, options));
    }
    start_disjunct();
}

std::optional<std::size_t> Session::rank() const {
    if (first_move_ && spec_.alternations.has_value()) {
        return game().rank(game().start_position());
    }
    return game().rank(pos_);
}

std::optional<Role> Session::turn() const {
    if (status_ != SessionStatus::Live) {
        return std::nullopt;
    }
    return pending_ ? Role::Defender : Role::Attacker;
}

Position Session::origin_for(Side side) const {
    const GameSpec& d = *disjuncts_.at(disjunct_);
    if (first_move_ && d.alternations) {
        return Position{pos_.left, pos_.right, side, *d.alternations};
    }
    return pos_;
}

void Session::start_disjunct() {
    const GameSpec& d = *disjuncts_.at(disjunct_);
    pos_ = game().start_positions().front();
    first_move_ = true;
    rounds_ = 0;
    pending_.reset();
    if (!game().beta_at(pos_.left, pos_.right)) {
        lose_disjunct("beta fails on the start pair");
        return;
    }
    if (d.rounds && *d.rounds == 0) {
        status_ = SessionStatus::DefenderWon;
        outcome_ = "defender survived 0 rounds";
        return;
    }
    if (human_ == Role::Defender) {
        engine_attack();
    }
}

std::vector<MoveOption> Session::legal_moves() const {
    std::vector<MoveOption> out;
    if (turn() != Role::Attacker) {
        return out;
    }
    for (Side s : {Side::Left, Side::Right}) {
        const Position from = origin_for(s);
        for (const auto& m : game().attacker_moves(from)) {
            if (m.side == s) {
                out.push_back({m, game().replies(from, m).size()});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const MoveOption& a, const MoveOption& b) { return a.move < b.move; });
    return out;
}

std::vector<std::size_t> Session::legal_replies() const {
    if (turn() != Role::Defender) {
        return {};
    }
    return game().replies(pending_origin_, *pending_);
}

void Session::check_human(Role r) const {
    if (status_ != SessionStatus::Live) {
        throw GameOver("the game is over (" + std::string(to_string(status_)) + ")");
    }
    if (human_ != r) {
        throw IllegalMove("the human plays the " + std::string(to_string(human_)));
    }
    if (turn() != r) {
        throw IllegalMove("it is not the " + std::string(to_string(r)) + "'s turn");
    }
}

void Session::apply_attacker(const AttackerMove& m, bool by_human) {
    const auto legal = legal_moves();
    if (std::none_of(legal.begin(), legal.end(), [&](const MoveOption& o) { return o.move == m; })) {
        throw IllegalMove("illegal attacker move: " + std::string(to_string(m.side)) + " " + m.label + " -> " +
                          std::to_string(m.target));
    }
    pending_origin_ = origin_for(m.side);
    pending_ = m;
    first_move_ = false;
    HistoryEntry e{Role::Attacker, by_human, disjunct_, m, pos_.left, pos_.right};
    (m.side == Side::Left ? e.left : e.right) = m.target;
    history_.push_back(e);
    if (game().replies(pending_origin_, m).empty()) {
        lose_disjunct("the defender cannot answer " + m.label + " on the " + std::string(to_string(other(m.side))));
    }
}

void Session::apply_reply(std::size_t node, bool by_human) {
    const auto legal = legal_replies();
    if (!std::binary_search(legal.begin(), legal.end(), node)) {
        throw IllegalMove("node " + std::to_string(node) + " is not a legal reply");
    }
    const AttackerMove m = *pending_;
    pos_ = game().after(pending_origin_, m, node);
    pending_.reset();
    history_.push_back({Role::Defender, by_human, disjunct_, AttackerMove{other(m.side), m.label, node}, pos_.left,
                        pos_.right});
    ++rounds_;
    after_round();
}

void Session::after_round() {
    const GameSpec& d = *disjuncts_.at(disjunct_);
    if (!game().beta_at(pos_.left, pos_.right)) {
        lose_disjunct("beta fails on the pair (" + std::to_string(pos_.left) + ", " + std::to_string(pos_.right) + ")");
        return;
    }
    if (d.rounds && rounds_ >= *d.rounds) {
        status_ = SessionStatus::DefenderWon;
        outcome_ = "defender survived " + std::to_string(rounds_) + " rounds";
        return;
    }
    if (human_ == Role::Defender) {
        engine_attack();
    }
}

void Session::lose_disjunct(const std::string& why) {
    pending_.reset();
    if (disjunct_ + 1 < games_.size()) {
        ++disjunct_;
        start_disjunct();
        return;
    }
    status_ = SessionStatus::AttackerWon;
    outcome_ = why;
}

void Session::engine_attack() {
    const Position from = first_move_ && spec_.alternations ? game().start_position() : pos_;
    std::optional<AttackerMove> move = game().best_attacker_move(from);
    if (!move) {
        // The defender survives from here: play the move whose worst reply is cheapest.
        constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
        std::size_t best = kNever;
        for (const auto& o : legal_moves()) {
            const Position origin = origin_for(o.move.side);
            std::size_t worst = 0;
            for (auto d : game().replies(origin, o.move)) {
                worst = std::max(worst, game().rank(game().after(origin, o.move, d)).value_or(kNever));
            }
            if (!move || worst < best) {
                move = o.move;
                best = worst;
            }
        }
    }
    if (move) {
        apply_attacker(*move, false);
    }
}

void Session::play(const AttackerMove& m) {
    check_human(Role::Attacker);
    apply_attacker(m, true);
    if (status_ == SessionStatus::Live && pending_) {
        apply_reply(*game().best_defender_reply(pending_origin_, *pending_), false);
    }
}

void Session::reply(std::size_t node) {
    check_human(Role::Defender);
    apply_reply(node, true);
}

nlohmann::ordered_json Session::legal_moves_json() const {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    if (turn() == Role::Attacker) {
        for (const auto& o : legal_moves()) {
            out.push_back({{"role", "attacker"},
                           {"side", std::string(to_string(o.move.side))},
                           {"label", o.move.label},
                           {"target", o.move.target},
                           {"replies", o.replies}});
        }
    } else if (turn() == Role::Defender) {
        const Side side = other(pending_->side);
        for (auto d : legal_replies()) {
            out.push_back({{"role", "defender"},
                           {"side", std::string(to_string(side))},
                           {"label", pending_->label},
                           {"target", d},
                           {"replies", 1}});
        }
    }
    return out;
}

nlohmann::ordered_json Session::record() const {
    nlohmann::ordered_json j;
    j["spec"] = spec_.to_json();
    j["human"] = std::string(to_string(human_));
    j["status"] = std::string(to_string(status_));
    j["outcome"] = outcome_;
    const GameSpec& d = *disjuncts_.at(disjunct_);
    nlohmann::ordered_json config;
    config["disjunct"] = disjunct_;
    config["left"] = pos_.left;
    config["right"] = pos_.right;
    if (d.alternations && !first_move_) {
        config["last"] = std::string(to_string(pos_.last));
        config["budget"] = pos_.budget;
    } else {
        config["last"] = nullptr;
        config["budget"] = d.alternations ? nlohmann::ordered_json(*d.alternations) : nlohmann::ordered_json(nullptr);
    }
    config["roundsPlayed"] = rounds_;
    const auto r = rank();
    config["rank"] = r ? nlohmann::ordered_json(*r) : nlohmann::ordered_json(nullptr);
    const auto t = turn();
    config["turn"] = t ? nlohmann::ordered_json(std::string(to_string(*t))) : nlohmann::ordered_json(nullptr);
    if (pending_) {
        config["pending"] = {{"side", std::string(to_string(pending_->side))},
                             {"label", pending_->label},
                             {"target", pending_->target}};
    } else {
        config["pending"] = nullptr;
    }
    j["config"] = config;
    j["boards"] = {{"left", export_json(game().left())}, {"right", export_json(game().right())}};
    j["history"] = nlohmann::ordered_json::array();
    for (const auto& e : history_) {
        j["history"].push_back(e.to_json());
    }
    return j;
}

} // namespace tgl
