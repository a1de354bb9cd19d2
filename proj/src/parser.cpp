// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace tgl {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Op, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t column = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view line, std::size_t lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t col = i + 1;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < line.size() && ident_char(line[j])) {
                ++j;
            }
            out.push_back({Tok::Ident, std::string(line.substr(i, j - i)), col});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '-' && i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
            std::size_t j = i + 1;
            while (j < line.size() &&
                   (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.' || line[j] == '/')) {
                ++j;
            }
            out.push_back({Tok::Number, std::string(line.substr(i, j - i)), col});
            i = j;
        } else if (line.substr(i, 2) == "->" || line.substr(i, 2) == "<=" || line.substr(i, 2) == ">=") {
            out.push_back({Tok::Op, std::string(line.substr(i, 2)), col});
            i += 2;
        } else if (std::string_view("<>=&{},").find(c) != std::string_view::npos) {
            out.push_back({Tok::Op, std::string(1, c), col});
            ++i;
        } else {
            throw ParseError(lineno, col, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, "", line.size() + 1});
    return out;
}

struct RawAtom {
    Token clock;
    Rel rel;
    std::int64_t bound;
};

struct RawEdge {
    Token source, target, action;
    std::vector<RawAtom> guard;
    std::vector<Token> resets;
};

struct RawLocation {
    Token name;
    std::vector<RawAtom> invariant;
};

class LineParser {
public:
    LineParser(std::vector<Token> toks, std::size_t lineno) : toks_(std::move(toks)), lineno_(lineno) {}

    const Token& peek() const { return toks_[pos_]; }
    bool at_end() const { return peek().kind == Tok::End; }

    Token next() {
        Token t = toks_[pos_];
        if (t.kind != Tok::End) {
            ++pos_;
        }
        return t;
    }

    [[noreturn]] void fail(const Token& at, const std::string& msg) const {
        throw ParseError(lineno_, at.column, msg);
    }

    Token ident(const char* what) {
        Token t = next();
        if (t.kind != Tok::Ident) {
            fail(t, std::string("expected ") + what);
        }
        return t;
    }

    void keyword(std::string_view kw) {
        Token t = next();
        if (t.kind != Tok::Ident || t.text != kw) {
            fail(t, "expected '" + std::string(kw) + "'");
        }
    }

    void op(std::string_view o) {
        Token t = next();
        if (t.kind != Tok::Op || t.text != o) {
            fail(t, "expected '" + std::string(o) + "'");
        }
    }

    bool accept_keyword(std::string_view kw) {
        if (peek().kind == Tok::Ident && peek().text == kw) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool accept_op(std::string_view o) {
        if (peek().kind == Tok::Op && peek().text == o) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::vector<RawAtom> guard() {
        std::vector<RawAtom> out;
        if (accept_keyword("true")) {
            return out;
        }
        do {
            RawAtom a;
            a.clock = ident("clock name");
            Token r = next();
            if (r.kind != Tok::Op) {
                fail(r, "expected comparison operator");
            }
            if (r.text == "<") {
                a.rel = Rel::Less;
            } else if (r.text == "<=") {
                a.rel = Rel::LessEq;
            } else if (r.text == "=") {
                a.rel = Rel::Eq;
            } else if (r.text == ">=") {
                a.rel = Rel::GreaterEq;
            } else if (r.text == ">") {
                a.rel = Rel::Greater;
            } else {
                fail(r, "expected comparison operator");
            }
            Token c = next();
            if (c.kind != Tok::Number) {
                fail(c, "expected integer constant");
            }
            if (c.text.front() == '-') {
                fail(c, "negative constant '" + c.text + "'");
            }
            if (c.text.find_first_of("./") != std::string::npos) {
                fail(c, "non-integer constant '" + c.text + "'");
            }
            a.bound = std::stoll(c.text);
            out.push_back(a);
        } while (accept_op("&"));
        return out;
    }

    void expect_end() {
        if (!at_end()) {
            fail(peek(), "unexpected '" + peek().text + "'");
        }
    }

private:
    std::vector<Token> toks_;
    std::size_t lineno_;
    std::size_t pos_ = 0;
};

} // namespace

Process parse_automaton(std::string_view text) {
    std::vector<std::pair<Token, std::size_t>> clocks;
    std::optional<std::string> name;
    std::optional<std::pair<Token, std::size_t>> init;
    std::vector<std::pair<RawLocation, std::size_t>> locations;
    std::vector<std::pair<RawEdge, std::size_t>> edges;
    struct RawStart {
        Token location;
        std::vector<std::pair<Token, Token>> values;
        std::size_t line;
    };
    std::optional<RawStart> start;

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        LineParser p(lex(line, lineno), lineno);
        if (p.at_end()) {
            continue;
        }
        Token head = p.ident("declaration keyword");
        if (head.text == "clocks") {
            while (!p.at_end()) {
                clocks.emplace_back(p.ident("clock name"), lineno);
                p.accept_op(",");
            }
        } else if (head.text == "automaton") {
            if (name) {
                p.fail(head, "duplicate 'automaton' declaration");
            }
            name = p.ident("automaton name").text;
        } else if (head.text == "init") {
            if (init) {
                p.fail(head, "duplicate 'init' declaration");
            }
            init = {p.ident("location name"), lineno};
        } else if (head.text == "location") {
            RawLocation l;
            l.name = p.ident("location name");
            if (p.accept_keyword("invariant")) {
                l.invariant = p.guard();
            }
            locations.emplace_back(std::move(l), lineno);
        } else if (head.text == "edge") {
            RawEdge e;
            e.source = p.ident("source location");
            p.op("->");
            e.target = p.ident("target location");
            if (p.accept_keyword("when")) {
                e.guard = p.guard();
            }
            p.keyword("do");
            e.action = p.ident("action name");
            if (e.action.text == "eps" || e.action.text == "epsilon" || e.action.text == "tau") {
                p.fail(e.action, "'" + e.action.text + "' is reserved for delay moves");
            }
            if (p.accept_keyword("reset")) {
                p.op("{");
                if (!p.accept_op("}")) {
                    do {
                        e.resets.push_back(p.ident("clock name"));
                    } while (p.accept_op(","));
                    p.op("}");
                }
            }
            edges.emplace_back(std::move(e), lineno);
        } else if (head.text == "start") {
            if (start) {
                p.fail(head, "duplicate 'start' declaration");
            }
            RawStart s{p.ident("location name"), {}, lineno};
            if (p.accept_keyword("with")) {
                while (!p.at_end()) {
                    Token clock = p.ident("clock name");
                    p.op("=");
                    Token value = p.next();
                    if (value.kind != Tok::Number) {
                        p.fail(value, "expected clock value");
                    }
                    s.values.emplace_back(clock, value);
                }
            }
            start = std::move(s);
        } else {
            p.fail(head, "unknown declaration '" + head.text + "'");
        }
        p.expect_end();
    }

    if (clocks.empty()) {
        throw ParseError(1, 1, "missing 'clocks' declaration");
    }
    if (!init) {
        throw ParseError(lineno, 1, "missing 'init' declaration");
    }

    std::vector<std::string> clock_names;
    std::map<std::string, ClockId> clock_ids;
    for (const auto& [tok, line] : clocks) {
        if (!clock_ids.emplace(tok.text, clock_names.size()).second) {
            throw ParseError(line, tok.column, "duplicate clock '" + tok.text + "'");
        }
        clock_names.push_back(tok.text);
    }
    std::map<std::string, LocationId> loc_ids;
    for (const auto& [l, line] : locations) {
        if (!loc_ids.emplace(l.name.text, loc_ids.size()).second) {
            throw ParseError(line, l.name.column, "duplicate location '" + l.name.text + "'");
        }
    }
    auto resolve_clock = [&](const Token& t, std::size_t line) {
        auto it = clock_ids.find(t.text);
        if (it == clock_ids.end()) {
            throw ParseError(line, t.column, "unknown clock '" + t.text + "'");
        }
        return it->second;
    };
    auto resolve_location = [&](const Token& t, std::size_t line) {
        auto it = loc_ids.find(t.text);
        if (it == loc_ids.end()) {
            throw ParseError(line, t.column, "unknown location '" + t.text + "'");
        }
        return it->second;
    };
    auto resolve_guard = [&](const std::vector<RawAtom>& raw, std::size_t line) {
        Guard g;
        for (const auto& a : raw) {
            g.push_back({resolve_clock(a.clock, line), a.rel, a.bound});
        }
        return g;
    };

    std::vector<Location> locs;
    for (const auto& [l, line] : locations) {
        Location loc{l.name.text, resolve_guard(l.invariant, line)};
        for (std::size_t i = 0; i < loc.invariant.size(); ++i) {
            if (loc.invariant[i].rel != Rel::Less && loc.invariant[i].rel != Rel::LessEq) {
                throw ParseError(line, l.invariant[i].clock.column,
                                 "invariants may only bound clocks from above (x <= c, x < c)");
            }
        }
        locs.push_back(std::move(loc));
    }
    std::vector<Edge> es;
    for (const auto& [e, line] : edges) {
        Edge edge;
        edge.source = resolve_location(e.source, line);
        edge.target = resolve_location(e.target, line);
        edge.guard = resolve_guard(e.guard, line);
        edge.action = e.action.text;
        for (const auto& r : e.resets) {
            edge.resets.push_back(resolve_clock(r, line));
        }
        es.push_back(std::move(edge));
    }
    const LocationId l0 = resolve_location(init->first, init->second);

    TimedAutomaton automaton(name.value_or("A"), std::move(clock_names), std::move(locs), l0, std::move(es));
    TimedState state = automaton.initial_state();
    if (start) {
        state.location = resolve_location(start->location, start->line);
        for (const auto& [clock, value] : start->values) {
            const auto id = resolve_clock(clock, start->line);
            try {
                state.valuation[id] = parse_rational(value.text);
            } catch (const std::invalid_argument& e) {
                throw ParseError(start->line, value.column, e.what());
            }
        }
    }
    if (!automaton.is_valid_state(state)) {
        const std::size_t line = start ? start->line : init->second;
        throw ParseError(line, 1, "initial valuation violates the invariant of '" +
                                      automaton.location(state.location).name + "'");
    }
    return {std::move(automaton), std::move(state)};
}

Process load_automaton(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_automaton(ss.str());
}

std::string format_guard(const TimedAutomaton& a, const Guard& g) {
    if (g.empty()) {
        return "true";
    }
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i > 0) {
            out += " & ";
        }
        out += a.clocks()[g[i].clock] + " " + std::string(to_string(g[i].rel)) + " " + std::to_string(g[i].bound);
    }
    return out;
}

std::string print_automaton(const Process& p) {
    const auto& a = p.automaton;
    std::ostringstream out;
    out << "clocks";
    for (const auto& c : a.clocks()) {
        out << ' ' << c;
    }
    out << "\nautomaton " << a.name() << "\ninit " << a.location(a.initial()).name << '\n';
    for (const auto& l : a.locations()) {
        out << "location " << l.name;
        if (!l.invariant.empty()) {
            out << " invariant " << format_guard(a, l.invariant);
        }
        out << '\n';
    }
    for (const auto& e : a.edges()) {
        out << "edge " << a.location(e.source).name << " -> " << a.location(e.target).name << " when "
            << format_guard(a, e.guard) << " do " << e.action;
        if (!e.resets.empty()) {
            out << " reset {";
            for (std::size_t i = 0; i < e.resets.size(); ++i) {
                out << (i ? "," : "") << a.clocks()[e.resets[i]];
            }
            out << '}';
        }
        out << '\n';
    }
    if (p.state != a.initial_state()) {
        out << "start " << a.location(p.state.location).name << " with";
        for (std::size_t i = 0; i < a.clock_count(); ++i) {
            out << ' ' << a.clocks()[i] << '=' << to_string(p.state.valuation[i]);
        }
        out << '\n';
    }
    return out.str();
}

namespace {

nlohmann::ordered_json guard_json(const TimedAutomaton& a, const Guard& g) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& c : g) {
        nlohmann::ordered_json atom;
        atom["clock"] = a.clocks()[c.clock];
        atom["rel"] = std::string(to_string(c.rel));
        atom["bound"] = c.bound;
        out.push_back(std::move(atom));
    }
    return out;
}

} // namespace

nlohmann::ordered_json to_json(const Process& p) {
    const auto& a = p.automaton;
    nlohmann::ordered_json j;
    j["name"] = a.name();
    j["clocks"] = a.clocks();
    j["locations"] = nlohmann::ordered_json::array();
    for (const auto& l : a.locations()) {
        nlohmann::ordered_json loc;
        loc["name"] = l.name;
        loc["invariant"] = guard_json(a, l.invariant);
        j["locations"].push_back(std::move(loc));
    }
    j["initial"] = a.location(a.initial()).name;
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : a.edges()) {
        nlohmann::ordered_json edge;
        edge["source"] = a.location(e.source).name;
        edge["guard"] = guard_json(a, e.guard);
        edge["action"] = e.action;
        auto resets = nlohmann::ordered_json::array();
        for (auto r : e.resets) {
            resets.push_back(a.clocks()[r]);
        }
        edge["resets"] = std::move(resets);
        edge["target"] = a.location(e.target).name;
        j["edges"].push_back(std::move(edge));
    }
    nlohmann::ordered_json start;
    start["location"] = a.location(p.state.location).name;
    nlohmann::ordered_json val;
    for (std::size_t i = 0; i < a.clock_count(); ++i) {
        val[a.clocks()[i]] = to_string(p.state.valuation[i]);
    }
    start["valuation"] = std::move(val);
    j["start"] = std::move(start);
    return j;
}

} // namespace tgl
