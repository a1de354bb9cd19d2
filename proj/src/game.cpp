// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/game.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace tgl {

std::string_view to_string(DefenderPattern p) {
    switch (p) {
    case DefenderPattern::A: return "a";
    case DefenderPattern::EA: return "ea";
    case DefenderPattern::EAE: return "eae";
    }
    return "?";
}

std::string_view to_string(Beta b) {
    switch (b) {
    case Beta::None: return "none";
    case Beta::Eq: return "eq";
    case Beta::FloorEq: return "floor_eq";
    case Beta::G1Leq: return "g1_leq";
    case Beta::G2Leq: return "g2_leq";
    }
    return "?";
}

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

// ---------------------------------------------------------------------------------------
// GameSpec encoding

namespace {

nlohmann::ordered_json budget_json(const Budget& b) {
    if (!b) {
        return "inf";
    }
    return *b;
}

Budget budget_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || (j[key].is_string() && j[key] == "inf")) {
        return std::nullopt;
    }
    if (j[key].is_number_unsigned() || (j[key].is_number_integer() && j[key].get<long long>() >= 0)) {
        return j[key].get<std::size_t>();
    }
    throw std::invalid_argument(std::string("'") + key + "' must be a natural number or \"inf\"");
}

} // namespace

nlohmann::ordered_json GameSpec::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = budget_json(alternations);
    j["k"] = budget_json(rounds);
    j["G"] = std::string(tgl::to_string(graph));
    j["alpha"] = nlohmann::ordered_json::array({"a", std::string(tgl::to_string(defender))});
    j["beta"] = std::string(tgl::to_string(beta));
    j["or"] = disjunct ? disjunct->to_json() : nlohmann::ordered_json(nullptr);
    return j;
}

GameSpec GameSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("game spec must be a JSON object");
    }
    GameSpec s;
    s.alternations = budget_from(j, "n");
    s.rounds = budget_from(j, "k");
    if (!j.contains("G") || !j["G"].is_string()) {
        throw std::invalid_argument("game spec needs \"G\"");
    }
    const std::string g = j["G"].get<std::string>();
    if (g == "Z") {
        s.graph = Variant::Z;
    } else if (g == "Z1") {
        s.graph = Variant::Z1;
    } else if (g == "Zsim") {
        s.graph = Variant::Zsim;
    } else {
        throw std::invalid_argument("unknown graph variant '" + g + "'");
    }
    if (!j.contains("alpha") || !j["alpha"].is_array() || j["alpha"].size() != 2 || j["alpha"][0] != "a" ||
        !j["alpha"][1].is_string()) {
        throw std::invalid_argument("\"alpha\" must be [\"a\", \"a\"|\"ea\"|\"eae\"]");
    }
    const std::string d = j["alpha"][1].get<std::string>();
    if (d == "a") {
        s.defender = DefenderPattern::A;
    } else if (d == "ea") {
        s.defender = DefenderPattern::EA;
    } else if (d == "eae") {
        s.defender = DefenderPattern::EAE;
    } else {
        throw std::invalid_argument("unknown defender pattern '" + d + "'");
    }
    const std::string b = j.value("beta", std::string("none"));
    if (b == "none") {
        s.beta = Beta::None;
    } else if (b == "eq") {
        s.beta = Beta::Eq;
    } else if (b == "floor_eq") {
        s.beta = Beta::FloorEq;
    } else if (b == "g1_leq") {
        s.beta = Beta::G1Leq;
    } else if (b == "g2_leq") {
        s.beta = Beta::G2Leq;
    } else {
        throw std::invalid_argument("unknown beta '" + b + "'");
    }
    if (j.contains("or") && !j["or"].is_null()) {
        s.disjunct = std::make_shared<const GameSpec>(from_json(j["or"]));
    }
    return s;
}

bool GameSpec::operator==(const GameSpec& o) const {
    if (alternations != o.alternations || rounds != o.rounds || graph != o.graph || defender != o.defender ||
        beta != o.beta || bool(disjunct) != bool(o.disjunct)) {
        return false;
    }
    return !disjunct || *disjunct == *o.disjunct;
}

// ---------------------------------------------------------------------------------------
// Moves and β

std::vector<std::size_t> defender_replies(const ZvGraph& board, std::size_t node, const std::string& label,
                                          DefenderPattern pattern) {
    if (label == kEpsilon) {
        return board.epsilon_closure(node);
    }
    std::set<std::size_t> out;
    switch (pattern) {
    case DefenderPattern::A: {
        const auto& s = board.successors(node, label);
        out.insert(s.begin(), s.end());
        break;
    }
    case DefenderPattern::EA:
    case DefenderPattern::EAE:
        for (auto u : board.epsilon_closure(node)) {
            for (auto v : board.successors(u, label)) {
                if (pattern == DefenderPattern::EA) {
                    out.insert(v);
                } else {
                    const auto& c = board.epsilon_closure(v);
                    out.insert(c.begin(), c.end());
                }
            }
        }
        break;
    }
    return {out.begin(), out.end()};
}

bool beta_holds(Beta beta, const SymbolicValue& left, const SymbolicValue& right, bool initial_pair) {
    switch (beta) {
    case Beta::None: return true;
    case Beta::Eq: return left == right;
    case Beta::FloorEq:
        if (!initial_pair) {
            return left == right;
        }
        if (left.is_infinite() || right.is_infinite()) {
            return left.is_infinite() && right.is_infinite();
        }
        return left.integer_part() == right.integer_part() && left.frac_zero() == right.frac_zero();
    case Beta::G1Leq: return left <= right;
    case Beta::G2Leq: return right <= left;
    }
    return false;
}

// ---------------------------------------------------------------------------------------
// Solving

SolvedGame::SolvedGame(const GameSpec& spec, const ZvGraph& left, const ZvGraph& right, const SolveOptions& options)
    : spec_(spec), options_(options), left_(&left), right_(&right) {
    spec_.disjunct.reset();
    if (left.variant() != spec.graph || right.variant() != spec.graph) {
        throw std::invalid_argument("boards are not of the game's graph variant");
    }
    budget_slots_ = spec_.alternations ? *spec_.alternations + 1 : 1;

    const std::size_t nl = left.size();
    const std::size_t nr = right.size();
    beta_.assign(nl * nr, true);
    for (std::size_t l = 0; l < nl; ++l) {
        for (std::size_t r = 0; r < nr; ++r) {
            const bool initial = l == left.initial() && r == right.initial();
            SymbolicValue a = left.node(l).span;
            SymbolicValue b = right.node(r).span;
            if (initial && options_.residual_start_spans) {
                a = left.start_residual_span();
                b = right.start_residual_span();
            }
            beta_[l * nr + r] = beta_holds(spec_.beta, a, b, initial);
        }
    }

    const std::size_t n = position_count();
    std::vector<std::vector<std::vector<std::size_t>>> succ(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Position p = position_at(i);
        for (const auto& m : attacker_moves(p)) {
            std::vector<std::size_t> next;
            for (auto d : replies(p, m)) {
                next.push_back(index(after(p, m, d)));
            }
            succ[i].push_back(std::move(next));
        }
    }

    rank_.assign(n, kInfinite);
    for (std::size_t i = 0; i < n; ++i) {
        const Position p = position_at(i);
        if (!beta_at(p.left, p.right)) {
            rank_[i] = 0;
        }
    }
    for (std::size_t round = 1; !spec_.rounds || round <= *spec_.rounds; ++round) {
        std::vector<std::size_t> eliminated;
        for (std::size_t i = 0; i < n; ++i) {
            if (rank_[i] != kInfinite) {
                continue;
            }
            const bool attacker_wins = std::any_of(succ[i].begin(), succ[i].end(), [&](const auto& next) {
                return std::all_of(next.begin(), next.end(), [&](std::size_t q) { return rank_[q] < round; });
            });
            if (attacker_wins) {
                eliminated.push_back(i);
            }
        }
        if (eliminated.empty()) {
            break;
        }
        for (auto i : eliminated) {
            rank_[i] = round;
        }
    }

    if (options_.shuffle_seed && !spec_.rounds) {
        std::vector<bool> alive(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Position p = position_at(i);
            alive[i] = beta_at(p.left, p.right);
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 rng(*options_.shuffle_seed);
        bool changed = true;
        while (changed) {
            changed = false;
            std::shuffle(order.begin(), order.end(), rng);
            for (auto i : order) {
                if (!alive[i]) {
                    continue;
                }
                for (const auto& next : succ[i]) {
                    if (std::none_of(next.begin(), next.end(), [&](std::size_t q) { return bool(alive[q]); })) {
                        alive[i] = false;
                        changed = true;
                        break;
                    }
                }
            }
        }
        chaotic_winning_ = std::move(alive);
    }
}

std::size_t SolvedGame::position_count() const { return left_->size() * right_->size() * (spec_.alternations ? 2 * budget_slots_ : 1); }

std::size_t SolvedGame::index(const Position& p) const {
    const std::size_t pair = p.left * right_->size() + p.right;
    if (!spec_.alternations) {
        return pair;
    }
    return (pair * 2 + (p.last == Side::Left ? 0 : 1)) * budget_slots_ + p.budget;
}

Position SolvedGame::position_at(std::size_t idx) const {
    Position p;
    std::size_t pair = idx;
    if (spec_.alternations) {
        p.budget = idx % budget_slots_;
        const std::size_t rest = idx / budget_slots_;
        p.last = rest % 2 == 0 ? Side::Left : Side::Right;
        pair = rest / 2;
    }
    p.left = pair / right_->size();
    p.right = pair % right_->size();
    return p;
}

bool SolvedGame::beta_at(std::size_t left, std::size_t right) const { return beta_.at(left * right_->size() + right); }

std::vector<Position> SolvedGame::start_positions() const {
    const std::size_t l = left_->initial();
    const std::size_t r = right_->initial();
    if (!spec_.alternations) {
        return {Position{l, r, Side::Left, 0}};
    }
    return {Position{l, r, Side::Left, *spec_.alternations}, Position{l, r, Side::Right, *spec_.alternations}};
}

std::optional<std::size_t> SolvedGame::rank(const Position& p) const {
    const std::size_t v = rank_.at(index(p));
    if (v == kInfinite) {
        return std::nullopt;
    }
    return v;
}

bool SolvedGame::defender_wins() const {
    const auto starts = start_positions();
    return std::all_of(starts.begin(), starts.end(), [&](const Position& p) {
        return chaotic_winning_.empty() ? winning(p) : bool(chaotic_winning_[index(p)]);
    });
}

Position SolvedGame::start_position() const {
    const auto starts = start_positions();
    Position best = starts.front();
    for (const auto& p : starts) {
        const std::size_t a = rank_[index(p)];
        const std::size_t b = rank_[index(best)];
        if (a < b) {
            best = p;
        }
    }
    return best;
}

std::vector<AttackerMove> SolvedGame::attacker_moves(const Position& p) const {
    std::vector<AttackerMove> out;
    for (Side s : {Side::Left, Side::Right}) {
        if (spec_.alternations && s != p.last && p.budget == 0) {
            continue;
        }
        const ZvGraph& g = board(s);
        const std::size_t node = s == Side::Left ? p.left : p.right;
        for (const auto& a : g.actions()) {
            for (auto t : g.successors(node, a)) {
                out.push_back({s, a, t});
            }
        }
        for (auto t : g.epsilon_closure(node)) {
            out.push_back({s, std::string(kEpsilon), t});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> SolvedGame::replies(const Position& p, const AttackerMove& m) const {
    if (spec_.alternations && m.side != p.last && p.budget == 0) {
        throw IllegalMove("no side switches left");
    }
    const ZvGraph& g = board(m.side);
    const std::size_t node = m.side == Side::Left ? p.left : p.right;
    const auto& targets = g.successors(node, m.label);
    if (!std::binary_search(targets.begin(), targets.end(), m.target)) {
        throw IllegalMove("node " + std::to_string(m.target) + " is not a " + m.label + "-successor of node " +
                          std::to_string(node) + " on the " + std::string(to_string(m.side)) + " board");
    }
    const Side d = other(m.side);
    return defender_replies(board(d), d == Side::Left ? p.left : p.right, m.label, spec_.defender);
}

Position SolvedGame::after(const Position& p, const AttackerMove& m, std::size_t reply) const {
    Position q;
    q.left = m.side == Side::Left ? m.target : reply;
    q.right = m.side == Side::Left ? reply : m.target;
    if (spec_.alternations) {
        q.last = m.side;
        q.budget = m.side != p.last ? p.budget - 1 : p.budget;
    }
    return q;
}

std::optional<AttackerMove> SolvedGame::best_attacker_move(const Position& p) const {
    const std::size_t r = rank_.at(index(p));
    if (r == kInfinite || r == 0) {
        return std::nullopt;
    }
    for (const auto& m : attacker_moves(p)) {
        const auto ds = replies(p, m);
        if (std::all_of(ds.begin(), ds.end(), [&](std::size_t d) { return rank_[index(after(p, m, d))] < r; })) {
            return m;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> SolvedGame::best_defender_reply(const Position& p, const AttackerMove& m) const {
    const auto ds = replies(p, m);
    std::optional<std::size_t> best;
    std::size_t best_rank = 0;
    for (auto d : ds) {
        const std::size_t r = rank_[index(after(p, m, d))];
        if (!best || r > best_rank) {
            best = d;
            best_rank = r;
        }
    }
    return best;
}

std::optional<std::size_t> SolvedGame::pair_rank(std::size_t left, std::size_t right) const {
    std::size_t best = kInfinite;
    if (!spec_.alternations) {
        best = rank_[index({left, right, Side::Left, 0})];
    } else {
        for (Side s : {Side::Left, Side::Right}) {
            best = std::min(best, rank_[index({left, right, s, *spec_.alternations})]);
        }
    }
    if (best == kInfinite) {
        return std::nullopt;
    }
    return best;
}

std::vector<std::pair<std::size_t, std::size_t>> SolvedGame::winning_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t l = 0; l < left_->size(); ++l) {
        for (std::size_t r = 0; r < right_->size(); ++r) {
            bool win = true;
            if (!spec_.alternations) {
                const std::size_t i = index({l, r, Side::Left, 0});
                win = chaotic_winning_.empty() ? rank_[i] == kInfinite : bool(chaotic_winning_[i]);
            } else {
                for (Side s : {Side::Left, Side::Right}) {
                    const std::size_t i = index({l, r, s, *spec_.alternations});
                    win = win && (chaotic_winning_.empty() ? rank_[i] == kInfinite : bool(chaotic_winning_[i]));
                }
            }
            if (win) {
                out.emplace_back(l, r);
            }
        }
    }
    return out;
}

StrategyNode SolvedGame::build_tree(const Position& p) const {
    StrategyNode node;
    node.position = p;
    node.rank = rank_.at(index(p));
    node.move = best_attacker_move(p);
    if (node.move) {
        for (auto d : replies(p, *node.move)) {
            node.replies.emplace_back(d, build_tree(after(p, *node.move, d)));
        }
    }
    return node;
}

std::optional<StrategyNode> SolvedGame::attacker_strategy() const {
    if (defender_wins()) {
        return std::nullopt;
    }
    return build_tree(start_position());
}

nlohmann::ordered_json StrategyNode::to_json() const {
    nlohmann::ordered_json j;
    j["left"] = position.left;
    j["right"] = position.right;
    j["rank"] = rank;
    if (!move) {
        j["outcome"] = "beta-violated";
        return j;
    }
    j["move"] = {{"side", std::string(tgl::to_string(move->side))}, {"label", move->label}, {"target", move->target}};
    if (replies.empty()) {
        j["outcome"] = "defender-stuck";
        return j;
    }
    j["replies"] = nlohmann::ordered_json::array();
    for (const auto& [d, child] : replies) {
        j["replies"].push_back({{"reply", d}, {"then", child.to_json()}});
    }
    return j;
}

std::vector<std::pair<std::size_t, std::size_t>> GameResult::winning_pairs() const {
    std::set<std::pair<std::size_t, std::size_t>> all;
    for (const auto& part : parts) {
        for (const auto& p : part.winning_pairs()) {
            all.insert(p);
        }
    }
    return {all.begin(), all.end()};
}

GameResult solve(const GameSpec& spec, const ZvGraph& left, const ZvGraph& right, const SolveOptions& options) {
    GameResult result;
    for (const GameSpec* s = &spec; s != nullptr; s = s->disjunct.get()) {
        result.parts.emplace_back(*s, left, right, options);
    }
    for (std::size_t i = 0; i < result.parts.size(); ++i) {
        if (result.parts[i].defender_wins()) {
            result.defender_wins = true;
            result.winning_disjunct = i;
            break;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------------------
// Certificates

namespace {

CheckOutcome replay(const SolvedGame& game, const StrategyNode& node, const Position& expected, std::size_t rounds) {
    if (node.position != expected) {
        return {false, "strategy position does not follow the play"};
    }
    if (!node.move) {
        if (game.beta_at(expected.left, expected.right)) {
            return {false, "strategy stops at a position where beta holds"};
        }
        return {};
    }
    if (rounds == 0) {
        return {false, "strategy needs more rounds than its rank"};
    }
    const auto legal = game.attacker_moves(expected);
    if (!std::binary_search(legal.begin(), legal.end(), *node.move)) {
        return {false, "strategy plays an illegal move"};
    }
    const auto ds = game.replies(expected, *node.move);
    if (ds.size() != node.replies.size()) {
        return {false, "strategy does not cover every defender reply"};
    }
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (node.replies[i].first != ds[i]) {
            return {false, "strategy does not cover every defender reply"};
        }
        auto sub = replay(game, node.replies[i].second, game.after(expected, *node.move, ds[i]), rounds - 1);
        if (!sub.ok) {
            return sub;
        }
    }
    return {};
}

} // namespace

CheckOutcome validate_attacker_strategy(const SolvedGame& game, const StrategyNode& tree) {
    const auto starts = game.start_positions();
    if (std::find(starts.begin(), starts.end(), tree.position) == starts.end()) {
        return {false, "strategy does not begin at a start position"};
    }
    const auto r = game.rank(tree.position);
    if (!r) {
        return {false, "strategy begins at a position the defender wins"};
    }
    return replay(game, tree, tree.position, *r);
}

CheckOutcome validate_winning_region(const SolvedGame& game) {
    if (game.spec().rounds) {
        return {false, "winning regions of bounded games are not closed"};
    }
    const std::size_t nl = game.left().size();
    const std::size_t nr = game.right().size();
    const std::size_t slots = game.spec().alternations ? *game.spec().alternations + 1 : 1;
    for (std::size_t l = 0; l < nl; ++l) {
        for (std::size_t r = 0; r < nr; ++r) {
            for (Side s : {Side::Left, Side::Right}) {
                for (std::size_t b = 0; b < slots; ++b) {
                    const Position p{l, r, s, b};
                    if (!game.spec().alternations && (s != Side::Left || b != 0)) {
                        continue;
                    }
                    if (!game.winning(p)) {
                        continue;
                    }
                    if (!game.beta_at(l, r)) {
                        return {false, "winning pair violates beta"};
                    }
                    for (const auto& m : game.attacker_moves(p)) {
                        const auto ds = game.replies(p, m);
                        const bool answered = std::any_of(ds.begin(), ds.end(), [&](std::size_t d) {
                            return game.winning(game.after(p, m, d));
                        });
                        if (!answered) {
                            return {false, "winning region is not closed under attacker moves"};
                        }
                    }
                }
            }
        }
    }
    return {};
}

} // namespace tgl
