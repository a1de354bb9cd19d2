// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/relations.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <thread>

namespace tgl {

namespace {

struct RelationInfo {
    RelationId id;
    std::string_view name;
    std::string_view symbol;
};

constexpr RelationInfo kRelations[] = {
    {RelationId::TimedBisim, "timed-bisim", "~t"},
    {RelationId::IntervalBisim, "interval-bisim", "~i"},
    {RelationId::TimedPrebisim, "timed-prebisim", "<~"},
    {RelationId::TaBisim, "ta-bisim", "~u"},
    {RelationId::TaDelayBisim, "ta-delay-bisim", "~y"},
    {RelationId::TaObsBisim, "ta-obs-bisim", "~o"},
    {RelationId::TimedSimEquiv, "timed-sim-equiv", "~t-sim"},
    {RelationId::TaSimEquiv, "ta-sim-equiv", "~u-sim"},
    {RelationId::TaDelaySimEquiv, "ta-delay-sim-equiv", "~y-sim"},
    {RelationId::TaObsSimEquiv, "ta-obs-sim-equiv", "~o-sim"},
};

const RelationInfo& info(RelationId r) {
    for (const auto& i : kRelations) {
        if (i.id == r) {
            return i;
        }
    }
    throw std::invalid_argument("unknown relation");
}

GameSpec make_spec(Budget n, Variant g, DefenderPattern d, Beta b) {
    GameSpec s;
    s.alternations = n;
    s.rounds = std::nullopt;
    s.graph = g;
    s.defender = d;
    s.beta = b;
    return s;
}

} // namespace

const std::vector<RelationId>& all_relations() {
    static const std::vector<RelationId> all = [] {
        std::vector<RelationId> v;
        for (const auto& i : kRelations) {
            v.push_back(i.id);
        }
        return v;
    }();
    return all;
}

std::string_view to_string(RelationId r) { return info(r).name; }
std::string_view symbol(RelationId r) { return info(r).symbol; }

std::optional<RelationId> parse_relation(std::string_view name) {
    for (const auto& i : kRelations) {
        if (i.name == name) {
            return i.id;
        }
    }
    return std::nullopt;
}

GameSpec game_for(RelationId r) {
    constexpr Budget inf = std::nullopt;
    switch (r) {
    case RelationId::TaBisim: return make_spec(inf, Variant::Z, DefenderPattern::A, Beta::None);
    case RelationId::TimedBisim: return make_spec(inf, Variant::Z, DefenderPattern::A, Beta::Eq);
    case RelationId::IntervalBisim: return make_spec(inf, Variant::Z, DefenderPattern::A, Beta::FloorEq);
    case RelationId::TaDelayBisim: return make_spec(inf, Variant::Z, DefenderPattern::EA, Beta::None);
    case RelationId::TaObsBisim: return make_spec(inf, Variant::Z, DefenderPattern::EAE, Beta::None);
    case RelationId::TaSimEquiv: return make_spec(0, Variant::Z, DefenderPattern::A, Beta::None);
    case RelationId::TaDelaySimEquiv: return make_spec(0, Variant::Z, DefenderPattern::EA, Beta::None);
    case RelationId::TaObsSimEquiv: return make_spec(0, Variant::Z, DefenderPattern::EAE, Beta::None);
    case RelationId::TimedSimEquiv: return make_spec(0, Variant::Zsim, DefenderPattern::A, Beta::Eq);
    case RelationId::TimedPrebisim: {
        GameSpec s = make_spec(inf, Variant::Z, DefenderPattern::A, Beta::G1Leq);
        s.disjunct = std::make_shared<const GameSpec>(make_spec(inf, Variant::Z, DefenderPattern::A, Beta::G2Leq));
        return s;
    }
    }
    throw std::invalid_argument("unknown relation");
}

BoardSet BoardSet::build(const Process& p) {
    BoardSet b;
    auto z1 = std::make_shared<const ZvGraph>(build_phase1(p));
    b.z = std::make_shared<const ZvGraph>(merge_bisimilar(*z1));
    b.zsim = std::make_shared<const ZvGraph>(merge_sim_equivalent(*z1));
    b.z1 = std::move(z1);
    return b;
}

const ZvGraph& BoardSet::get(Variant v) const {
    switch (v) {
    case Variant::Z1: return *z1;
    case Variant::Z: return *z;
    case Variant::Zsim: return *zsim;
    }
    return *z;
}

namespace {

std::shared_ptr<const ZvGraph> board_ptr(const BoardSet& b, Variant v) {
    switch (v) {
    case Variant::Z1: return b.z1;
    case Variant::Z: return b.z;
    case Variant::Zsim: return b.zsim;
    }
    return b.z;
}

} // namespace

Verdict check(RelationId r, const BoardSet& left, const BoardSet& right, const SolveOptions& options) {
    const GameSpec spec = game_for(r);
    Verdict v;
    v.relation = r;
    v.left_board = board_ptr(left, spec.graph);
    v.right_board = board_ptr(right, spec.graph);
    v.result = solve(spec, *v.left_board, *v.right_board, options);
    v.holds = v.result.defender_wins;
    if (r == RelationId::TimedPrebisim && v.holds) {
        v.faster_side = *v.result.winning_disjunct == 0 ? "left" : "right";
    }
    return v;
}

Verdict check(RelationId r, const Process& left, const Process& right, const SolveOptions& options) {
    return check(r, BoardSet::build(left), BoardSet::build(right), options);
}

bool simulates(RelationId r, const BoardSet& left, const BoardSet& right) {
    const GameSpec spec = game_for(r);
    if (spec.alternations != Budget(0)) {
        throw std::invalid_argument("simulation direction is only defined for simulation equivalences");
    }
    const ZvGraph& l = left.get(spec.graph);
    const ZvGraph& rb = right.get(spec.graph);
    const SolvedGame game(spec, l, rb);
    return game.winning(Position{l.initial(), rb.initial(), Side::Left, 0});
}

nlohmann::ordered_json Verdict::to_json() const {
    nlohmann::ordered_json j;
    j["relation"] = std::string(tgl::to_string(relation));
    j["holds"] = holds;
    nlohmann::ordered_json cert;
    if (holds) {
        const auto& part = result.parts.at(*result.winning_disjunct);
        cert["kind"] = "winning-pairs";
        cert["game"] = part.spec().to_json();
        cert["pairs"] = nlohmann::ordered_json::array();
        for (const auto& [l, r] : part.winning_pairs()) {
            cert["pairs"].push_back(nlohmann::ordered_json::array({l, r}));
        }
    } else {
        cert["kind"] = "attacker-strategy";
        cert["strategies"] = nlohmann::ordered_json::array();
        for (const auto& part : result.parts) {
            nlohmann::ordered_json s;
            s["game"] = part.spec().to_json();
            s["tree"] = part.attacker_strategy()->to_json();
            cert["strategies"].push_back(std::move(s));
        }
    }
    j["certificate"] = std::move(cert);
    if (!faster_side.empty()) {
        j["fasterSide"] = faster_side;
    }
    return j;
}

std::string Verdict::to_table() const {
    std::ostringstream os;
    os << "relation   " << tgl::to_string(relation) << " (" << symbol(relation) << ")\n";
    os << "holds      " << (holds ? "yes" : "no") << "\n";
    os << "boards     " << left_board->size() << " x " << right_board->size() << " nodes ("
       << tgl::to_string(left_board->variant()) << ")\n";
    if (!faster_side.empty()) {
        os << "faster     " << faster_side << "\n";
    }
    if (holds) {
        os << "pairs      " << result.parts.at(*result.winning_disjunct).winning_pairs().size()
           << " defender-winning node pairs\n";
    } else {
        for (const auto& part : result.parts) {
            const Position start = part.start_position();
            os << "attacker   wins " << part.spec().to_json().dump() << " in at most " << part.rank(start).value_or(0)
               << " round(s)\n";
            if (auto m = part.best_attacker_move(start)) {
                os << "           first move: " << tgl::to_string(m->side) << " " << m->label << " -> s" << m->target
                   << "\n";
            } else {
                os << "           the start pair already violates " << tgl::to_string(part.spec().beta) << "\n";
            }
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------------------
// Hierarchy audit

const std::vector<Implication>& implication_lattice() {
    static const std::vector<Implication> edges = {
        {RelationId::TimedBisim, RelationId::IntervalBisim},
        {RelationId::IntervalBisim, RelationId::TimedPrebisim},
        {RelationId::TimedPrebisim, RelationId::TaBisim},
        {RelationId::TaBisim, RelationId::TaDelayBisim},
        {RelationId::TaDelayBisim, RelationId::TaObsBisim},
        {RelationId::TimedBisim, RelationId::TimedSimEquiv},
        {RelationId::TaBisim, RelationId::TaSimEquiv},
        {RelationId::TaDelayBisim, RelationId::TaDelaySimEquiv},
        {RelationId::TaObsBisim, RelationId::TaObsSimEquiv},
    };
    return edges;
}

bool AuditRow::holds(RelationId r) const {
    for (const auto& [id, h] : verdicts) {
        if (id == r) {
            return h;
        }
    }
    throw std::out_of_range("relation missing from audit row");
}

AuditReport hierarchy_audit(const std::vector<NamedPair>& corpus, unsigned workers) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    auto audit_one = [](const NamedPair& p) {
        AuditRow row;
        row.name = p.name;
        const BoardSet l = BoardSet::build(p.left);
        const BoardSet r = BoardSet::build(p.right);
        for (auto id : all_relations()) {
            row.verdicts.emplace_back(id, check(id, l, r).holds);
        }
        return row;
    };

    AuditReport report;
    report.rows.resize(corpus.size());
    if (workers == 1 || corpus.size() < 2) {
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            report.rows[i] = audit_one(corpus[i]);
        }
    } else {
        std::vector<std::future<void>> tasks;
        for (unsigned w = 0; w < workers; ++w) {
            tasks.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t i = w; i < corpus.size(); i += workers) {
                    report.rows[i] = audit_one(corpus[i]);
                }
            }));
        }
        for (auto& t : tasks) {
            t.get();
        }
    }

    for (const auto& edge : implication_lattice()) {
        std::vector<std::string> witnesses;
        for (const auto& row : report.rows) {
            const bool from = row.holds(edge.from);
            const bool to = row.holds(edge.to);
            if (from && !to) {
                report.violations.push_back({row.name, edge});
            }
            if (to && !from) {
                witnesses.push_back(row.name);
            }
        }
        report.separations.emplace_back(edge, std::move(witnesses));
    }
    return report;
}

nlohmann::ordered_json AuditReport::to_json() const {
    nlohmann::ordered_json j;
    j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        r["name"] = row.name;
        for (const auto& [id, h] : row.verdicts) {
            r["verdicts"][std::string(tgl::to_string(id))] = h;
        }
        j["pairs"].push_back(std::move(r));
    }
    j["violations"] = nlohmann::ordered_json::array();
    for (const auto& v : violations) {
        j["violations"].push_back({{"pair", v.pair},
                                   {"from", std::string(tgl::to_string(v.edge.from))},
                                   {"to", std::string(tgl::to_string(v.edge.to))}});
    }
    j["separations"] = nlohmann::ordered_json::array();
    for (const auto& [edge, names] : separations) {
        j["separations"].push_back({{"from", std::string(tgl::to_string(edge.from))},
                                    {"to", std::string(tgl::to_string(edge.to))},
                                    {"witnesses", names}});
    }
    return j;
}

std::string AuditReport::to_table() const {
    std::ostringstream os;
    std::size_t width = 4;
    for (const auto& row : rows) {
        width = std::max(width, row.name.size());
    }
    os << std::string(width, ' ');
    for (auto id : all_relations()) {
        os << "  " << symbol(id);
    }
    os << "\n";
    for (const auto& row : rows) {
        os << row.name << std::string(width - row.name.size(), ' ');
        for (const auto& [id, h] : row.verdicts) {
            const std::size_t w = symbol(id).size();
            os << "  " << std::string(w - 1, ' ') << (h ? "Y" : ".");
        }
        os << "\n";
    }
    os << "\nviolations: " << violations.size() << "\n";
    for (const auto& v : violations) {
        os << "  " << v.pair << ": " << symbol(v.edge.from) << " holds but " << symbol(v.edge.to) << " fails\n";
    }
    os << "strict separations:\n";
    for (const auto& [edge, names] : separations) {
        os << "  " << symbol(edge.from) << " => " << symbol(edge.to) << ": "
           << (names.empty() ? std::string("not witnessed") : std::to_string(names.size()) + " witness(es)") << "\n";
    }
    return os.str();
}

} // namespace tgl
