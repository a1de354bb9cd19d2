// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/zvg.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tgl {

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::Z1: return "Z1";
    case Variant::Z: return "Z";
    case Variant::Zsim: return "Zsim";
    }
    return "?";
}

std::optional<Variant> parse_variant(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "z1") {
        return Variant::Z1;
    }
    if (lower == "z") {
        return Variant::Z;
    }
    if (lower == "zsim") {
        return Variant::Zsim;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------
// Nodes, ranges and spans

namespace {

SymbolicValue min_of(const Zone& z, std::size_t i) {
    const Bound b = z.lower(i);
    return SymbolicValue::finite(Rational(-b.value()), b.is_strict() ? 1 : 0);
}

SymbolicValue max_of(const Zone& z, std::size_t i) {
    const Bound b = z.upper(i);
    if (b.is_infinite()) {
        return SymbolicValue::infinity();
    }
    return SymbolicValue::finite(Rational(b.value()), b.is_strict() ? -1 : 0);
}

SymbolicValue node_max(const ZvgNode& n, ClockId x) {
    SymbolicValue best = max_of(n.cells.front().zone, x + 1);
    for (const auto& c : n.cells) {
        best = std::max(best, max_of(c.zone, x + 1));
    }
    return best;
}

SymbolicValue node_min(const ZvgNode& n, ClockId x) {
    SymbolicValue best = min_of(n.cells.front().zone, x + 1);
    for (const auto& c : n.cells) {
        best = std::min(best, min_of(c.zone, x + 1));
    }
    return best;
}

} // namespace

bool ZvgNode::contains(const TimedState& s) const {
    return std::any_of(cells.begin(), cells.end(), [&](const Cell& c) {
        return c.location == s.location && c.zone.contains(s.valuation);
    });
}

SymbolicValue clock_range(const ZvgNode& n, ClockId x) {
    if (n.cells.empty()) {
        throw std::invalid_argument("node without cells");
    }
    return node_max(n, x) - node_min(n, x);
}

SymbolicValue node_span(const ZvgNode& n) {
    if (n.cells.empty()) {
        throw std::invalid_argument("node without cells");
    }
    const std::size_t clocks = n.cells.front().zone.clock_count();
    SymbolicValue span = SymbolicValue::infinity();
    for (ClockId x = 0; x < clocks; ++x) {
        span = std::min(span, clock_range(n, x));
    }
    return span;
}

ZvgNode make_node(std::size_t id, std::vector<Cell> cells) {
    if (cells.empty()) {
        throw std::invalid_argument("node without cells");
    }
    for (const auto& c : cells) {
        if (c.zone.is_empty()) {
            throw std::invalid_argument("node cell is empty");
        }
    }
    ZvgNode n;
    n.id = id;
    n.cells = std::move(cells);
    for (const auto& c : n.cells) {
        n.locations.push_back(c.location);
    }
    std::sort(n.locations.begin(), n.locations.end());
    n.locations.erase(std::unique(n.locations.begin(), n.locations.end()), n.locations.end());
    const auto& names = *n.cells.front().zone.clocks();
    for (ClockId x = 0; x < names.size(); ++x) {
        n.clock_ranges.push_back(clock_range(n, x));
    }
    n.span = *std::min_element(n.clock_ranges.begin(), n.clock_ranges.end());
    for (ClockId x = 0; x < names.size(); ++x) {
        if (n.clock_ranges[x] == n.span) {
            n.critical_clocks.push_back(x);
        }
    }
    std::sort(n.critical_clocks.begin(), n.critical_clocks.end(),
              [&](ClockId a, ClockId b) { return names[a] < names[b]; });
    n.members = {id};
    return n;
}

SymbolicValue max_admissible_delay(const ZvgNode& n, const TimedState& s) {
    if (!n.contains(s)) {
        throw std::invalid_argument("state is not contained in the node");
    }
    if (n.span.is_infinite()) {
        return SymbolicValue::infinity();
    }
    const ClockId x = n.critical_clocks.front();
    return node_max(n, x) - s.valuation.at(x);
}

// ---------------------------------------------------------------------------------------
// Graph assembly

class ZvgAssembler {
public:
    /// `act[u][a]` and `eps[u]` are raw successor lists over provisional ids; the result keeps
    /// the part reachable from `initial`, numbered breadth-first.
    static ZvGraph assemble(Variant variant,
                            const Process& process,
                            const std::vector<std::vector<Cell>>& cells,
                            const std::vector<std::vector<std::size_t>>& members,
                            std::size_t initial,
                            const std::vector<std::vector<std::vector<std::size_t>>>& act,
                            const std::vector<std::vector<std::size_t>>& eps) {
        const std::size_t n = cells.size();
        const std::size_t n_act = process.automaton.actions().size();
        constexpr std::size_t unset = static_cast<std::size_t>(-1);
        std::vector<std::size_t> renum(n, unset);
        std::vector<std::size_t> order;
        std::deque<std::size_t> queue{initial};
        renum[initial] = 0;
        order.push_back(initial);
        auto visit = [&](std::size_t v) {
            if (renum[v] == unset) {
                renum[v] = order.size();
                order.push_back(v);
                queue.push_back(v);
            }
        };
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t a = 0; a < n_act; ++a) {
                auto targets = act[u][a];
                std::sort(targets.begin(), targets.end());
                for (auto v : targets) {
                    visit(v);
                }
            }
            auto targets = eps[u];
            std::sort(targets.begin(), targets.end());
            for (auto v : targets) {
                visit(v);
            }
        }

        ZvGraph g(process);
        g.variant_ = variant;
        g.initial_ = 0;
        const std::size_t m = order.size();
        g.act_.assign(m, std::vector<std::vector<std::size_t>>(n_act));
        std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t old = order[k];
            ZvgNode node = make_node(k, cells[old]);
            if (!members[old].empty()) {
                node.members = members[old];
            }
            std::sort(node.members.begin(), node.members.end());
            g.nodes_.push_back(std::move(node));
            for (std::size_t a = 0; a < n_act; ++a) {
                for (auto v : act[old][a]) {
                    g.act_[k][a].push_back(renum[v]);
                }
                auto& list = g.act_[k][a];
                std::sort(list.begin(), list.end());
                list.erase(std::unique(list.begin(), list.end()), list.end());
            }
            reach[k][k] = true;
            for (auto v : eps[old]) {
                reach[k][renum[v]] = true;
            }
        }
        for (std::size_t w = 0; w < m; ++w) {
            for (std::size_t u = 0; u < m; ++u) {
                if (!reach[u][w]) {
                    continue;
                }
                for (std::size_t v = 0; v < m; ++v) {
                    if (reach[w][v]) {
                        reach[u][v] = true;
                    }
                }
            }
        }
        g.eps_.assign(m, {});
        for (std::size_t u = 0; u < m; ++u) {
            for (std::size_t v = 0; v < m; ++v) {
                if (reach[u][v]) {
                    g.eps_[u].push_back(v);
                }
            }
        }

        const auto& names = process.automaton.actions();
        for (std::size_t u = 0; u < m; ++u) {
            for (std::size_t a = 0; a < n_act; ++a) {
                for (auto v : g.act_[u][a]) {
                    g.edges_.push_back({u, names[a], v});
                }
            }
            auto mutual = [&](std::size_t p, std::size_t q) { return reach[p][q] && reach[q][p]; };
            for (std::size_t v = 0; v < m; ++v) {
                if (v == u || !reach[u][v]) {
                    continue;
                }
                bool implied = false;
                for (std::size_t w = 0; w < m && !implied; ++w) {
                    implied = w != u && w != v && reach[u][w] && reach[w][v] && !mutual(u, w) && !mutual(w, v);
                }
                if (!implied) {
                    g.edges_.push_back({u, std::string(kEpsilon), v});
                }
            }
        }
        std::sort(g.edges_.begin(), g.edges_.end());
        return g;
    }
};

const std::vector<std::size_t>& ZvGraph::successors(std::size_t node, std::string_view label) const {
    static const std::vector<std::size_t> none;
    if (label == kEpsilon) {
        return eps_.at(node);
    }
    const auto& acts = actions();
    auto it = std::lower_bound(acts.begin(), acts.end(), label);
    if (it == acts.end() || *it != label) {
        return none;
    }
    return act_.at(node)[static_cast<std::size_t>(it - acts.begin())];
}

std::optional<std::size_t> ZvGraph::locate(const TimedState& s) const {
    for (const auto& n : nodes_) {
        if (n.contains(s)) {
            return n.id;
        }
    }
    return std::nullopt;
}

SymbolicValue ZvGraph::start_residual_span() const {
    return max_admissible_delay(nodes_.at(initial_), process_.state);
}

Lts ZvGraph::to_lts() const {
    Lts lts(nodes_.size());
    const std::size_t eps_label = actions().size();
    for (std::size_t u = 0; u < nodes_.size(); ++u) {
        for (std::size_t a = 0; a < eps_label; ++a) {
            for (auto v : act_[u][a]) {
                lts.add(u, a, v);
            }
        }
        for (auto v : eps_[u]) {
            lts.add(u, eps_label, v);
        }
    }
    return lts;
}

// ---------------------------------------------------------------------------------------
// Phase 1

std::vector<std::vector<std::int64_t>> max_constants(const TimedAutomaton& a) {
    const std::size_t nl = a.locations().size();
    std::vector<std::vector<std::int64_t>> m(nl, std::vector<std::int64_t>(a.clock_count(), 0));
    auto scan = [&](LocationId l, const Guard& g) {
        for (const auto& c : g) {
            m[l][c.clock] = std::max(m[l][c.clock], c.bound);
        }
    };
    for (LocationId l = 0; l < nl; ++l) {
        scan(l, a.location(l).invariant);
        for (auto idx : a.outgoing(l)) {
            scan(l, a.edges()[idx].guard);
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& e : a.edges()) {
            for (ClockId x = 0; x < a.clock_count(); ++x) {
                if (std::binary_search(e.resets.begin(), e.resets.end(), x)) {
                    continue;
                }
                if (m[e.target][x] > m[e.source][x]) {
                    m[e.source][x] = m[e.target][x];
                    changed = true;
                }
            }
        }
    }
    return m;
}

namespace {

constexpr std::size_t kMaxSplits = 200000;

struct Phase1Builder {
    const TimedAutomaton& a;
    ClockNames names;
    std::vector<std::vector<std::int64_t>> maxc;

    /// Delay closure under the invariant, cut at every maximal constant and extrapolated. The
    /// cut keeps each piece a union of regions: a clock beyond its constant carries no
    /// diagonal constraints afterwards.
    std::vector<Zone> normalize(LocationId l, const Zone& z) const {
        const Guard& inv = a.location(l).invariant;
        std::vector<Zone> pieces{z.up().intersect(inv)};
        for (ClockId x = 0; x < a.clock_count(); ++x) {
            std::vector<Zone> next;
            for (const auto& p : pieces) {
                for (Rel rel : {Rel::LessEq, Rel::Greater}) {
                    Zone q = p.intersect(ClockConstraint{x, rel, maxc[l][x]});
                    if (!q.is_empty()) {
                        next.push_back(std::move(q));
                    }
                }
            }
            pieces = std::move(next);
        }
        for (auto& p : pieces) {
            p = p.extrapolate(maxc[l]).intersect(inv);
        }
        return pieces;
    }

    /// States at the edge's source that take `e` into `target`.
    Zone pre_edge(const Edge& e, const Zone& target) const {
        Zone t = target;
        for (auto r : e.resets) {
            t = t.intersect(ClockConstraint{r, Rel::Eq, 0});
        }
        return t.free(e.resets).intersect(e.guard).intersect(a.location(e.source).invariant);
    }

    std::vector<std::vector<Zone>> explore(const TimedState& start) const {
        std::vector<std::vector<Zone>> seen(a.locations().size());
        std::deque<std::pair<LocationId, Zone>> waiting;
        auto add = [&](LocationId l, Zone z) {
            if (z.is_empty()) {
                return;
            }
            auto& list = seen[l];
            for (const auto& old : list) {
                if (z.subset_of(old)) {
                    return;
                }
            }
            list.erase(std::remove_if(list.begin(), list.end(), [&](const Zone& old) { return old.subset_of(z); }),
                       list.end());
            list.push_back(z);
            waiting.emplace_back(l, std::move(z));
        };
        for (auto& z : normalize(start.location, Zone::region_of(names, start.valuation))) {
            add(start.location, std::move(z));
        }
        while (!waiting.empty()) {
            auto [l, z] = std::move(waiting.front());
            waiting.pop_front();
            // The zone may have been subsumed since it was queued; exploring it anyway is harmless.
            for (auto idx : a.outgoing(l)) {
                const Edge& e = a.edges()[idx];
                Zone next = z.intersect(e.guard).reset(e.resets).intersect(a.location(e.target).invariant);
                if (!next.is_empty()) {
                    for (auto& piece : normalize(e.target, next)) {
                        add(e.target, std::move(piece));
                    }
                }
            }
        }
        return seen;
    }

    std::vector<Cell> decompose(const std::vector<std::vector<Zone>>& reach) const {
        std::vector<Cell> cells;
        for (LocationId l = 0; l < reach.size(); ++l) {
            std::vector<Zone> disjoint;
            for (const auto& z : reach[l]) {
                std::vector<Zone> pieces{z};
                for (const auto& d : disjoint) {
                    std::vector<Zone> next;
                    for (const auto& p : pieces) {
                        auto rest = p.subtract(d);
                        next.insert(next.end(), rest.begin(), rest.end());
                    }
                    pieces = std::move(next);
                }
                disjoint.insert(disjoint.end(), pieces.begin(), pieces.end());
            }
            std::vector<Guard> guards;
            for (auto idx : a.outgoing(l)) {
                guards.push_back(a.edges()[idx].guard);
            }
            for (const auto& d : disjoint) {
                for (auto& c : canonical_decomposition(a.location(l).invariant, guards, d)) {
                    cells.push_back({l, std::move(c)});
                }
            }
        }
        return cells;
    }

    void stabilize(std::vector<Cell>& cells) const {
        std::size_t splits = 0;
        auto try_split = [&](std::size_t i, const Zone& splitter) {
            const Zone& z = cells[i].zone;
            if (z.subset_of(splitter)) {
                return false;
            }
            Zone inside = z.intersect(splitter);
            if (inside.is_empty()) {
                return false;
            }
            auto outside = z.subtract(splitter);
            const LocationId l = cells[i].location;
            cells[i].zone = std::move(inside);
            for (auto& piece : outside) {
                cells.push_back({l, std::move(piece)});
            }
            if (++splits > kMaxSplits) {
                throw std::logic_error("zone graph stabilization did not converge");
            }
            return true;
        };
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const LocationId l = cells[i].location;
                for (std::size_t j = 0; j < cells.size(); ++j) {
                    if (j != i && cells[j].location == l && try_split(i, cells[j].zone.down())) {
                        changed = true;
                    }
                }
                for (auto idx : a.outgoing(l)) {
                    const Edge& e = a.edges()[idx];
                    for (std::size_t j = 0; j < cells.size(); ++j) {
                        if (cells[j].location == e.target && try_split(i, pre_edge(e, cells[j].zone))) {
                            changed = true;
                        }
                    }
                }
            }
        }
    }
};

} // namespace

ZvGraph build_phase1(const Process& p) {
    const TimedAutomaton& a = p.automaton;
    if (!a.is_valid_state(p.state)) {
        throw ModelError("start state violates the invariant of its location");
    }
    Phase1Builder b{a, std::make_shared<const std::vector<std::string>>(a.clocks()), max_constants(a)};
    std::vector<Cell> cells = b.decompose(b.explore(p.state));
    b.stabilize(cells);

    const std::size_t n = cells.size();
    const auto& actions = a.actions();
    std::vector<std::vector<std::vector<std::size_t>>> act(n, std::vector<std::vector<std::size_t>>(actions.size()));
    std::vector<std::vector<std::size_t>> eps(n);
    std::optional<std::size_t> initial;
    for (std::size_t i = 0; i < n; ++i) {
        const LocationId l = cells[i].location;
        if (!initial && l == p.state.location && cells[i].zone.contains(p.state.valuation)) {
            initial = i;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (cells[j].location == l && cells[i].zone.intersects(cells[j].zone.down())) {
                eps[i].push_back(j);
            }
        }
        for (auto idx : a.outgoing(l)) {
            const Edge& e = a.edges()[idx];
            const auto ai = static_cast<std::size_t>(std::lower_bound(actions.begin(), actions.end(), e.action) -
                                                     actions.begin());
            for (std::size_t j = 0; j < n; ++j) {
                if (cells[j].location == e.target && cells[i].zone.intersects(b.pre_edge(e, cells[j].zone))) {
                    act[i][ai].push_back(j);
                }
            }
        }
    }
    if (!initial) {
        throw std::logic_error("start state is not covered by the zone graph");
    }
    std::vector<std::vector<Cell>> node_cells;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
        node_cells.push_back({cells[i]});
        members.push_back({});
    }
    ZvGraph g = ZvgAssembler::assemble(Variant::Z1, p, node_cells, members, *initial, act, eps);
    return g;
}

namespace {

ZvGraph quotient(const ZvGraph& z1, const std::vector<std::size_t>& cls, Variant variant) {
    const std::size_t k = *std::max_element(cls.begin(), cls.end()) + 1;
    const std::size_t n_act = z1.actions().size();
    std::vector<std::vector<Cell>> cells(k);
    std::vector<std::vector<std::size_t>> members(k);
    std::vector<std::vector<std::vector<std::size_t>>> act(k, std::vector<std::vector<std::size_t>>(n_act));
    std::vector<std::vector<std::size_t>> eps(k);
    for (const auto& node : z1.nodes()) {
        const std::size_t c = cls[node.id];
        cells[c].insert(cells[c].end(), node.cells.begin(), node.cells.end());
        members[c].push_back(node.id);
        for (std::size_t a = 0; a < n_act; ++a) {
            for (auto v : z1.successors(node.id, z1.actions()[a])) {
                act[c][a].push_back(cls[v]);
            }
        }
        for (auto v : z1.epsilon_closure(node.id)) {
            eps[c].push_back(cls[v]);
        }
    }
    return ZvgAssembler::assemble(variant, z1.process(), cells, members, cls[z1.initial()], act, eps);
}

} // namespace

ZvGraph merge_bisimilar(const ZvGraph& z1) {
    if (z1.variant() != Variant::Z1) {
        throw std::invalid_argument("merging expects a Z1 graph");
    }
    return quotient(z1, bisimulation_classes(z1.to_lts()), Variant::Z);
}

ZvGraph merge_sim_equivalent(const ZvGraph& z1) {
    if (z1.variant() != Variant::Z1) {
        throw std::invalid_argument("merging expects a Z1 graph");
    }
    return quotient(z1, simulation_equivalence_classes(z1.to_lts()), Variant::Zsim);
}

ZvGraph build_graph(const Process& p, Variant v) {
    ZvGraph z1 = build_phase1(p);
    switch (v) {
    case Variant::Z1: return z1;
    case Variant::Z: return merge_bisimilar(z1);
    case Variant::Zsim: return merge_sim_equivalent(z1);
    }
    return z1;
}

// ---------------------------------------------------------------------------------------
// Export

std::string node_zone_text(const ZvGraph& g, const ZvgNode& n) {
    std::string out;
    for (std::size_t i = 0; i < n.cells.size(); ++i) {
        if (i > 0) {
            out += " | ";
        }
        out += g.automaton().location(n.cells[i].location).name + ": " + n.cells[i].zone.to_string();
    }
    return out;
}

namespace {

std::string location_set(const ZvGraph& g, const ZvgNode& n) {
    std::string out = "{";
    for (std::size_t i = 0; i < n.locations.size(); ++i) {
        out += (i > 0 ? "," : "") + g.automaton().location(n.locations[i]).name;
    }
    return out + "}";
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

} // namespace

std::string export_dot(const ZvGraph& g) {
    std::ostringstream os;
    os << "digraph \"" << dot_escape(g.automaton().name()) << "_" << to_string(g.variant()) << "\" {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& n : g.nodes()) {
        std::string label = "s" + std::to_string(n.id) + " " + location_set(g, n);
        for (const auto& c : n.cells) {
            label += "\\n" + dot_escape(g.automaton().location(c.location).name + ": " + c.zone.to_string());
        }
        label += "\\n(" + n.span.to_string() + ")";
        os << "  s" << n.id << " [label=\"" << label << "\"";
        if (n.id == g.initial()) {
            os << ", peripheries=2";
        }
        os << "];\n";
    }
    for (const auto& e : g.edges()) {
        os << "  s" << e.source << " -> s" << e.target << " [label=\"" << dot_escape(e.label) << "\"";
        if (e.label == kEpsilon) {
            os << ", style=dashed";
        }
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::ordered_json export_json(const ZvGraph& g) {
    const auto& a = g.automaton();
    nlohmann::ordered_json j;
    j["automaton"] = a.name();
    j["variant"] = std::string(to_string(g.variant()));
    j["clocks"] = a.clocks();
    j["actions"] = a.actions();
    j["initial"] = g.initial();
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : g.nodes()) {
        nlohmann::ordered_json node;
        node["id"] = n.id;
        node["locations"] = nlohmann::ordered_json::array();
        for (auto l : n.locations) {
            node["locations"].push_back(a.location(l).name);
        }
        node["zone"] = node_zone_text(g, n);
        node["cells"] = nlohmann::ordered_json::array();
        for (const auto& c : n.cells) {
            node["cells"].push_back({{"location", a.location(c.location).name}, {"zone", c.zone.to_string()}});
        }
        node["span"] = n.span.to_json();
        node["spanText"] = n.span.to_string();
        nlohmann::ordered_json ranges;
        for (ClockId x = 0; x < a.clock_count(); ++x) {
            ranges[a.clocks()[x]] = n.clock_ranges[x].to_json();
        }
        node["clockRanges"] = ranges;
        node["criticalClocks"] = nlohmann::ordered_json::array();
        for (auto x : n.critical_clocks) {
            node["criticalClocks"].push_back(a.clocks()[x]);
        }
        node["members"] = n.members;
        j["nodes"].push_back(std::move(node));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges()) {
        j["edges"].push_back(nlohmann::ordered_json::array({e.source, e.label, e.target}));
    }
    return j;
}

} // namespace tgl
