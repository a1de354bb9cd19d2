// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/model.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace tgl {

Rational parse_rational(std::string_view text) {
    auto parse_int = [](std::string_view s) -> std::int64_t {
        std::int64_t out = 0;
        if (s.empty()) {
            throw std::invalid_argument("empty number");
        }
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc() || ptr != s.data() + s.size() || out < 0) {
            throw std::invalid_argument("malformed number '" + std::string(s) + "'");
        }
        return out;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = parse_int(text.substr(0, slash));
        const auto den = parse_int(text.substr(slash + 1));
        if (den == 0) {
            throw std::invalid_argument("zero denominator");
        }
        return {num, den};
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto whole = text.substr(0, dot);
        const auto decimals = text.substr(dot + 1);
        if (decimals.empty() || decimals.size() > 15) {
            throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        }
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < decimals.size(); ++i) {
            scale *= 10;
        }
        return Rational(whole.empty() ? 0 : parse_int(whole)) + Rational(parse_int(decimals), scale);
    }
    return {parse_int(text)};
}

std::string to_string(const Rational& q) {
    if (q.denominator() == 1) {
        return std::to_string(q.numerator());
    }
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string_view to_string(Rel rel) {
    switch (rel) {
    case Rel::Less: return "<";
    case Rel::LessEq: return "<=";
    case Rel::Eq: return "=";
    case Rel::GreaterEq: return ">=";
    case Rel::Greater: return ">";
    }
    return "?";
}

bool satisfies(const Valuation& v, const ClockConstraint& c) {
    const Rational& x = v.at(c.clock);
    const Rational b(c.bound);
    switch (c.rel) {
    case Rel::Less: return x < b;
    case Rel::LessEq: return x <= b;
    case Rel::Eq: return x == b;
    case Rel::GreaterEq: return x >= b;
    case Rel::Greater: return x > b;
    }
    return false;
}

bool satisfies(const Valuation& v, const Guard& g) {
    return std::all_of(g.begin(), g.end(), [&](const ClockConstraint& c) { return satisfies(v, c); });
}

TimedAutomaton::TimedAutomaton(std::string name,
                               std::vector<std::string> clocks,
                               std::vector<Location> locations,
                               LocationId initial,
                               std::vector<Edge> edges)
    : name_(std::move(name)),
      clocks_(std::move(clocks)),
      locations_(std::move(locations)),
      initial_(initial),
      edges_(std::move(edges)) {
    if (clocks_.empty()) {
        throw ModelError("automaton '" + name_ + "' declares no clocks");
    }
    if (locations_.empty()) {
        throw ModelError("automaton '" + name_ + "' declares no locations");
    }
    if (std::set<std::string>(clocks_.begin(), clocks_.end()).size() != clocks_.size()) {
        throw ModelError("duplicate clock name");
    }
    std::set<std::string> names;
    for (const auto& l : locations_) {
        if (!names.insert(l.name).second) {
            throw ModelError("duplicate location '" + l.name + "'");
        }
    }
    if (initial_ >= locations_.size()) {
        throw ModelError("initial location out of range");
    }
    auto check_guard = [&](const Guard& g) {
        for (const auto& c : g) {
            if (c.clock >= clocks_.size()) {
                throw ModelError("constraint on unknown clock");
            }
            if (c.bound < 0) {
                throw ModelError("negative constant in constraint");
            }
        }
    };
    for (const auto& l : locations_) {
        check_guard(l.invariant);
        for (const auto& c : l.invariant) {
            if (c.rel != Rel::Less && c.rel != Rel::LessEq) {
                throw ModelError("invariant of '" + l.name + "' must only bound clocks from above");
            }
        }
    }
    outgoing_.resize(locations_.size());
    std::set<std::string> acts;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        auto& e = edges_[i];
        if (e.source >= locations_.size() || e.target >= locations_.size()) {
            throw ModelError("edge references unknown location");
        }
        if (e.action.empty() || e.action == "eps" || e.action == "ε") {
            throw ModelError("'" + e.action + "' is not a valid action name");
        }
        check_guard(e.guard);
        std::sort(e.resets.begin(), e.resets.end());
        e.resets.erase(std::unique(e.resets.begin(), e.resets.end()), e.resets.end());
        for (auto r : e.resets) {
            if (r >= clocks_.size()) {
                throw ModelError("reset of unknown clock");
            }
        }
        outgoing_[e.source].push_back(i);
        acts.insert(e.action);
    }
    actions_.assign(acts.begin(), acts.end());
}

std::optional<ClockId> TimedAutomaton::find_clock(std::string_view name) const {
    for (std::size_t i = 0; i < clocks_.size(); ++i) {
        if (clocks_[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<LocationId> TimedAutomaton::find_location(std::string_view name) const {
    for (std::size_t i = 0; i < locations_.size(); ++i) {
        if (locations_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

TimedState TimedAutomaton::initial_state() const {
    return {initial_, Valuation(clocks_.size(), Rational(0))};
}

std::vector<std::int64_t> TimedAutomaton::global_max_constants() const {
    std::vector<std::int64_t> out(clocks_.size(), 0);
    auto scan = [&](const Guard& g) {
        for (const auto& c : g) {
            out[c.clock] = std::max(out[c.clock], c.bound);
        }
    };
    for (const auto& l : locations_) {
        scan(l.invariant);
    }
    for (const auto& e : edges_) {
        scan(e.guard);
    }
    return out;
}

bool TimedAutomaton::is_valid_state(const TimedState& s) const {
    if (s.location >= locations_.size() || s.valuation.size() != clocks_.size()) {
        return false;
    }
    for (const auto& x : s.valuation) {
        if (x < Rational(0)) {
            return false;
        }
    }
    return satisfies(s.valuation, locations_[s.location].invariant);
}

std::vector<TimedState> tlts_step(const TimedAutomaton& a, const TimedState& s, const Label& label) {
    std::vector<TimedState> out;
    if (const auto* d = std::get_if<Rational>(&label)) {
        if (*d < Rational(0)) {
            return out;
        }
        TimedState next = s;
        for (auto& x : next.valuation) {
            x += *d;
        }
        // Invariants are convex, so checking the end point covers the whole delay.
        if (satisfies(next.valuation, a.location(s.location).invariant)) {
            out.push_back(std::move(next));
        }
        return out;
    }
    const auto& action = std::get<std::string>(label);
    for (auto idx : a.outgoing(s.location)) {
        const auto& e = a.edges()[idx];
        if (e.action != action || !satisfies(s.valuation, e.guard)) {
            continue;
        }
        TimedState next{e.target, s.valuation};
        for (auto r : e.resets) {
            next.valuation[r] = 0;
        }
        if (satisfies(next.valuation, a.location(e.target).invariant)) {
            out.push_back(std::move(next));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace tgl
