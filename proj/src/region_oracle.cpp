// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/region_oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace tgl {

// ---------------------------------------------------------------------------------------
// Regions

namespace {

void normalize_ranks(RegionState& r) {
    std::set<int> used;
    for (int k : r.rank) {
        if (k > 0) {
            used.insert(k);
        }
    }
    std::map<int, int> remap;
    int next = 1;
    for (int k : used) {
        remap[k] = next++;
    }
    for (int& k : r.rank) {
        if (k > 0) {
            k = remap[k];
        }
    }
}

bool region_satisfies(const RegionState& r, const ClockConstraint& c) {
    const bool beyond = r.rank[c.clock] < 0;
    const std::int64_t ip = r.ipart[c.clock];
    const bool zero = r.rank[c.clock] == 0;
    switch (c.rel) {
    case Rel::Less: return !beyond && ip < c.bound;
    case Rel::LessEq: return !beyond && (ip < c.bound || (ip == c.bound && zero));
    case Rel::Eq: return !beyond && ip == c.bound && zero;
    case Rel::GreaterEq: return beyond || ip >= c.bound;
    case Rel::Greater: return beyond || ip > c.bound || (ip == c.bound && !zero);
    }
    return false;
}

bool region_satisfies(const RegionState& r, const Guard& g) {
    return std::all_of(g.begin(), g.end(), [&](const ClockConstraint& c) { return region_satisfies(r, c); });
}

/// The immediate time successor, or std::nullopt when every clock is beyond its constant.
std::optional<RegionState> time_successor(const RegionState& r, const std::vector<std::int64_t>& m) {
    const std::size_t n = r.ipart.size();
    bool any_bounded = false;
    bool any_zero = false;
    int top = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (r.rank[i] >= 0) {
            any_bounded = true;
            any_zero = any_zero || r.rank[i] == 0;
            top = std::max(top, r.rank[i]);
        }
    }
    if (!any_bounded) {
        return std::nullopt;
    }
    RegionState s = r;
    if (any_zero) {
        for (std::size_t i = 0; i < n; ++i) {
            if (s.rank[i] > 0) {
                ++s.rank[i];
            } else if (s.rank[i] == 0) {
                if (s.ipart[i] == m[i]) {
                    s.ipart[i] = m[i] + 1;
                    s.rank[i] = -1;
                } else {
                    s.rank[i] = 1;
                }
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (s.rank[i] == top) {
                ++s.ipart[i];
                s.rank[i] = 0;
            }
        }
    }
    normalize_ranks(s);
    return s;
}

} // namespace

RegionState region_of(LocationId l, const Valuation& v, const std::vector<std::int64_t>& m) {
    RegionState r;
    r.location = l;
    std::set<Rational> fracs;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > Rational(m[i])) {
            r.ipart.push_back(m[i] + 1);
        } else {
            r.ipart.push_back(floor(v[i]));
            if (frac(v[i]) != Rational(0)) {
                fracs.insert(frac(v[i]));
            }
        }
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > Rational(m[i])) {
            r.rank.push_back(-1);
        } else if (frac(v[i]) == Rational(0)) {
            r.rank.push_back(0);
        } else {
            r.rank.push_back(1 + static_cast<int>(std::distance(fracs.begin(), fracs.find(frac(v[i])))));
        }
    }
    return r;
}

RegionLts build_region_graph(const Process& p) {
    const TimedAutomaton& a = p.automaton;
    RegionLts g;
    g.actions = a.actions();
    g.max_constants = a.global_max_constants();
    std::map<RegionState, std::size_t> index;
    std::vector<std::size_t> queue;
    auto intern = [&](const RegionState& r) {
        auto [it, inserted] = index.emplace(r, g.states.size());
        if (inserted) {
            g.states.push_back(r);
            g.out.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    g.initial = intern(region_of(p.state.location, p.state.valuation, g.max_constants));
    const std::uint64_t cap = region_count_bound(a);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t id = queue[head];
        const RegionState r = g.states[id];
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        if (auto next = time_successor(r, g.max_constants)) {
            if (region_satisfies(*next, a.location(r.location).invariant)) {
                edges.emplace_back(g.tick_label(), intern(*next));
            }
        }
        for (auto idx : a.outgoing(r.location)) {
            const Edge& e = a.edges()[idx];
            if (!region_satisfies(r, e.guard)) {
                continue;
            }
            RegionState t = r;
            t.location = e.target;
            for (auto x : e.resets) {
                t.ipart[x] = 0;
                t.rank[x] = 0;
            }
            normalize_ranks(t);
            if (!region_satisfies(t, a.location(e.target).invariant)) {
                continue;
            }
            const auto label = static_cast<std::size_t>(
                std::lower_bound(g.actions.begin(), g.actions.end(), e.action) - g.actions.begin());
            edges.emplace_back(label, intern(t));
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        g.out[id] = std::move(edges);
        if (g.states.size() > cap) {
            throw std::logic_error("region graph exceeds the classical region bound");
        }
    }
    return g;
}

std::uint64_t region_count_bound(const TimedAutomaton& a) {
    const auto m = a.global_max_constants();
    const std::uint64_t c = a.clock_count();
    const std::uint64_t big = m.empty() ? 0 : static_cast<std::uint64_t>(*std::max_element(m.begin(), m.end()));
    std::uint64_t bound = a.locations().size();
    for (std::uint64_t i = 1; i <= c; ++i) {
        bound *= (2 * big + 2) * i * 2;
    }
    return bound;
}

// ---------------------------------------------------------------------------------------
// Definitional fixpoints

namespace {

enum class Pattern { Strong, Delay, Observational };

/// A region graph viewed as the time-abstracted transition system: delay moves go to any
/// region reachable by time steps (including the region itself).
struct AbstractLts {
    std::vector<std::vector<std::size_t>> delay;                       // reflexive-transitive
    std::map<std::string, std::vector<std::vector<std::size_t>>> act;  // per action, per state
    std::size_t initial = 0;
    std::size_t size = 0;

    explicit AbstractLts(const RegionLts& g) : initial(g.initial), size(g.size()) {
        delay.assign(size, {});
        for (std::size_t s = 0; s < size; ++s) {
            std::vector<bool> seen(size, false);
            std::vector<std::size_t> stack{s};
            seen[s] = true;
            while (!stack.empty()) {
                const std::size_t u = stack.back();
                stack.pop_back();
                delay[s].push_back(u);
                for (const auto& [label, v] : g.out[u]) {
                    if (label == g.tick_label() && !seen[v]) {
                        seen[v] = true;
                        stack.push_back(v);
                    }
                }
            }
            std::sort(delay[s].begin(), delay[s].end());
        }
        for (const auto& name : g.actions) {
            act[name].assign(size, {});
        }
        for (std::size_t s = 0; s < size; ++s) {
            for (const auto& [label, v] : g.out[s]) {
                if (label != g.tick_label()) {
                    act[g.actions[label]][s].push_back(v);
                }
            }
        }
    }

    const std::vector<std::size_t>& step(const std::string& a, std::size_t s) const {
        static const std::vector<std::size_t> none;
        auto it = act.find(a);
        return it == act.end() ? none : it->second[s];
    }

    /// Answers to an action a under the pattern.
    std::vector<std::size_t> answer(const std::string& a, std::size_t s, Pattern p) const {
        if (p == Pattern::Strong) {
            return step(a, s);
        }
        std::set<std::size_t> out;
        for (auto u : delay[s]) {
            for (auto v : step(a, u)) {
                if (p == Pattern::Delay) {
                    out.insert(v);
                } else {
                    out.insert(delay[v].begin(), delay[v].end());
                }
            }
        }
        return {out.begin(), out.end()};
    }
};

/// Largest relation R over (x in X, y in Y) such that every move of x is answered by y
/// (and, when `both_ways`, every move of y by x) within R.
std::vector<std::vector<bool>> greatest_fixpoint(const AbstractLts& X, const AbstractLts& Y, Pattern p,
                                                 bool both_ways) {
    std::vector<std::vector<bool>> R(X.size, std::vector<bool>(Y.size, true));
    std::set<std::string> actions;
    for (const auto& [a, _] : X.act) {
        actions.insert(a);
    }
    for (const auto& [a, _] : Y.act) {
        actions.insert(a);
    }
    auto forth = [&](std::size_t x, std::size_t y) {
        for (auto x2 : X.delay[x]) {
            const auto& ys = Y.delay[y];
            if (std::none_of(ys.begin(), ys.end(), [&](std::size_t y2) { return bool(R[x2][y2]); })) {
                return false;
            }
        }
        for (const auto& a : actions) {
            const auto& xs = X.step(a, x);
            if (xs.empty()) {
                continue;
            }
            const auto ys = Y.answer(a, y, p);
            for (auto x2 : xs) {
                if (std::none_of(ys.begin(), ys.end(), [&](std::size_t y2) { return bool(R[x2][y2]); })) {
                    return false;
                }
            }
        }
        return true;
    };
    auto back = [&](std::size_t x, std::size_t y) {
        for (auto y2 : Y.delay[y]) {
            const auto& xs = X.delay[x];
            if (std::none_of(xs.begin(), xs.end(), [&](std::size_t x2) { return bool(R[x2][y2]); })) {
                return false;
            }
        }
        for (const auto& a : actions) {
            const auto& ys = Y.step(a, y);
            if (ys.empty()) {
                continue;
            }
            const auto xs = X.answer(a, x, p);
            for (auto y2 : ys) {
                if (std::none_of(xs.begin(), xs.end(), [&](std::size_t x2) { return bool(R[x2][y2]); })) {
                    return false;
                }
            }
        }
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t x = 0; x < X.size; ++x) {
            for (std::size_t y = 0; y < Y.size; ++y) {
                if (R[x][y] && (!forth(x, y) || (both_ways && !back(x, y)))) {
                    R[x][y] = false;
                    changed = true;
                }
            }
        }
    }
    return R;
}

} // namespace

bool oracle_check(RelationId r, const Process& left, const Process& right) {
    Pattern p = Pattern::Strong;
    bool bisim = true;
    switch (r) {
    case RelationId::TaBisim: break;
    case RelationId::TaDelayBisim: p = Pattern::Delay; break;
    case RelationId::TaObsBisim: p = Pattern::Observational; break;
    case RelationId::TaSimEquiv: bisim = false; break;
    case RelationId::TaDelaySimEquiv: p = Pattern::Delay; bisim = false; break;
    case RelationId::TaObsSimEquiv: p = Pattern::Observational; bisim = false; break;
    default: throw std::invalid_argument("the region oracle only decides time-abstracted relations");
    }
    const AbstractLts X(build_region_graph(left));
    const AbstractLts Y(build_region_graph(right));
    if (bisim) {
        return greatest_fixpoint(X, Y, p, true)[X.initial][Y.initial];
    }
    return greatest_fixpoint(X, Y, p, false)[X.initial][Y.initial] &&
           greatest_fixpoint(Y, X, p, false)[Y.initial][X.initial];
}

bool oracle_ta_bisim_by_partition(const Process& left, const Process& right) {
    const RegionLts a = build_region_graph(left);
    const RegionLts b = build_region_graph(right);
    const AbstractLts X(a);
    const AbstractLts Y(b);
    std::vector<std::string> names = a.actions;
    names.insert(names.end(), b.actions.begin(), b.actions.end());
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    const std::size_t delay_label = names.size();
    Lts u(X.size + Y.size);
    auto add = [&](const AbstractLts& g, std::size_t offset) {
        for (std::size_t s = 0; s < g.size; ++s) {
            for (auto t : g.delay[s]) {
                u.add(offset + s, delay_label, offset + t);
            }
            for (std::size_t k = 0; k < names.size(); ++k) {
                for (auto t : g.step(names[k], s)) {
                    u.add(offset + s, k, offset + t);
                }
            }
        }
    };
    add(X, 0);
    add(Y, X.size);
    const auto cls = bisimulation_classes(u);
    return cls[X.initial] == cls[X.size + Y.initial];
}

// ---------------------------------------------------------------------------------------
// Bounded refutation on the timed transition systems

namespace {

/// One automaton with clock values scaled to integers (units of 1/scale) and clamped
/// above the maximal constant.
struct ScaledSystem {
    const TimedAutomaton& a;
    std::int64_t scale;
    std::vector<std::int64_t> cap;  // (M + 1) * scale

    struct State {
        LocationId loc = 0;
        std::vector<std::int64_t> v;
        auto operator<=>(const State&) const = default;
    };

    ScaledSystem(const TimedAutomaton& automaton, std::int64_t s) : a(automaton), scale(s) {
        for (auto m : a.global_max_constants()) {
            cap.push_back((m + 1) * scale);
        }
    }

    bool holds(const std::vector<std::int64_t>& v, const Guard& g) const {
        for (const auto& c : g) {
            const std::int64_t x = v[c.clock];
            const std::int64_t b = c.bound * scale;
            bool ok = false;
            switch (c.rel) {
            case Rel::Less: ok = x < b; break;
            case Rel::LessEq: ok = x <= b; break;
            case Rel::Eq: ok = x == b; break;
            case Rel::GreaterEq: ok = x >= b; break;
            case Rel::Greater: ok = x > b; break;
            }
            if (!ok) {
                return false;
            }
        }
        return true;
    }

    std::optional<State> delay(const State& s, std::int64_t d) const {
        State t = s;
        for (std::size_t i = 0; i < t.v.size(); ++i) {
            t.v[i] = std::min(t.v[i] + d, cap[i]);
        }
        if (!holds(t.v, a.location(t.loc).invariant)) {
            return std::nullopt;
        }
        return t;
    }

    std::vector<State> act(const State& s, const std::string& label) const {
        std::vector<State> out;
        for (auto idx : a.outgoing(s.loc)) {
            const Edge& e = a.edges()[idx];
            if (e.action != label || !holds(s.v, e.guard)) {
                continue;
            }
            State t{e.target, s.v};
            for (auto r : e.resets) {
                t.v[r] = 0;
            }
            if (holds(t.v, a.location(e.target).invariant)) {
                out.push_back(std::move(t));
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    State start(const TimedState& s) const {
        State t{s.location, {}};
        for (std::size_t i = 0; i < s.valuation.size(); ++i) {
            const Rational scaled = s.valuation[i] * Rational(scale);
            t.v.push_back(std::min(scaled.numerator() / scaled.denominator(), cap[i]));
        }
        return t;
    }
};

class Refuter {
public:
    Refuter(const Process& left, const Process& right, const Rational& granularity, bool both_sides)
        : both_sides_(both_sides) {
        if (granularity <= Rational(0)) {
            throw std::invalid_argument("granularity must be positive");
        }
        std::int64_t scale = granularity.denominator();
        for (const Process* p : {&left, &right}) {
            for (const auto& q : p->state.valuation) {
                scale = std::lcm(scale, q.denominator());
            }
        }
        sys_[0].emplace(left.automaton, scale);
        sys_[1].emplace(right.automaton, scale);
        step_ = (granularity * Rational(scale)).numerator();
        std::int64_t biggest = 0;
        for (const Process* p : {&left, &right}) {
            for (auto m : p->automaton.global_max_constants()) {
                biggest = std::max(biggest, m);
            }
        }
        const std::int64_t horizon = (biggest + 1) * scale;
        for (std::int64_t d = step_; d <= horizon; d += step_) {
            delays_.push_back(d);
        }
        actions_ = left.automaton.actions();
        actions_.insert(actions_.end(), right.automaton.actions().begin(), right.automaton.actions().end());
        std::sort(actions_.begin(), actions_.end());
        actions_.erase(std::unique(actions_.begin(), actions_.end()), actions_.end());
        start_ = {sys_[0]->start(left.state), sys_[1]->start(right.state)};
        scale_ = scale;
    }

    std::optional<std::vector<std::string>> run(std::size_t depth) {
        if (!wins(start_, depth)) {
            return std::nullopt;
        }
        std::vector<std::string> line;
        Pair cur = start_;
        for (std::size_t d = depth; d > 0; --d) {
            for (const auto& m : moves(cur)) {
                const auto answers = defender(cur, m);
                if (std::all_of(answers.begin(), answers.end(), [&](const Pair& q) { return wins(q, d - 1); })) {
                    line.push_back(describe(m));
                    if (answers.empty()) {
                        line.push_back(std::string(m.side == 0 ? "right" : "left") + " cannot answer");
                        return line;
                    }
                    cur = answers.front();
                    break;
                }
            }
        }
        return line;
    }

private:
    using State = ScaledSystem::State;
    using Pair = std::pair<State, State>;

    struct Move {
        int side = 0;
        std::string action;  // empty for delays
        std::int64_t delay = 0;
        State target;
    };

    std::vector<Move> moves(const Pair& p) const {
        std::vector<Move> out;
        for (int side = 0; side < (both_sides_ ? 2 : 1); ++side) {
            const State& s = side == 0 ? p.first : p.second;
            for (const auto& a : actions_) {
                for (auto& t : sys_[side]->act(s, a)) {
                    out.push_back({side, a, 0, std::move(t)});
                }
            }
            for (auto d : delays_) {
                if (auto t = sys_[side]->delay(s, d)) {
                    out.push_back({side, "", d, std::move(*t)});
                }
            }
        }
        return out;
    }

    std::vector<Pair> defender(const Pair& p, const Move& m) const {
        const int side = 1 - m.side;
        const State& s = side == 0 ? p.first : p.second;
        std::vector<State> replies;
        if (m.action.empty()) {
            if (auto t = sys_[side]->delay(s, m.delay)) {
                replies.push_back(std::move(*t));
            }
        } else {
            replies = sys_[side]->act(s, m.action);
        }
        std::vector<Pair> out;
        for (auto& r : replies) {
            out.push_back(m.side == 0 ? Pair{m.target, r} : Pair{r, m.target});
        }
        return out;
    }

    bool wins(const Pair& p, std::size_t depth) {
        if (depth == 0) {
            return false;
        }
        const auto key = std::make_pair(p, depth);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        bool result = false;
        for (const auto& m : moves(p)) {
            const auto answers = defender(p, m);
            if (std::all_of(answers.begin(), answers.end(), [&](const Pair& q) { return wins(q, depth - 1); })) {
                result = true;
                break;
            }
        }
        memo_[key] = result;
        return result;
    }

    std::string describe(const Move& m) const {
        const std::string side = m.side == 0 ? "left" : "right";
        if (!m.action.empty()) {
            return side + " " + m.action;
        }
        return side + " delay " + to_string(Rational(m.delay, scale_));
    }

    bool both_sides_;
    std::optional<ScaledSystem> sys_[2];
    std::int64_t step_ = 1;
    std::int64_t scale_ = 1;
    std::vector<std::int64_t> delays_;
    std::vector<std::string> actions_;
    Pair start_;
    std::map<std::pair<Pair, std::size_t>, bool> memo_;
};

} // namespace

std::optional<std::vector<std::string>> refute_timed_bisim(const Process& left, const Process& right,
                                                           const Rational& granularity, std::size_t depth) {
    return Refuter(left, right, granularity, true).run(depth);
}

std::optional<std::vector<std::string>> refute_timed_simulation(const Process& left, const Process& right,
                                                                const Rational& granularity, std::size_t depth) {
    return Refuter(left, right, granularity, false).run(depth);
}

} // namespace tgl
