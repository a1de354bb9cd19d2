// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: relation checks, graph exports, hierarchy audits, terminal play and
// the HTTP session service.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tgl/parser.hpp"
#include "tgl/relations.hpp"
#include "tgl/service.hpp"
#include "tgl/session.hpp"
#include "tgl/zvg.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kInputError = 2;

std::string relation_names() {
    std::string out;
    for (auto r : tgl::all_relations()) {
        out += out.empty() ? "" : ", ";
        out += tgl::to_string(r);
    }
    return out;
}

int run_check(const std::string& relation, const std::string& format, const std::string& a, const std::string& b) {
    const auto r = tgl::parse_relation(relation);
    if (!r) {
        std::cerr << "error: unknown relation '" << relation << "' (expected one of " << relation_names() << ")\n";
        return kInputError;
    }
    std::optional<tgl::Process> left;
    std::optional<tgl::Process> right;
    try {
        left = tgl::load_automaton(a);
        right = tgl::load_automaton(b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    const tgl::Verdict v = tgl::check(*r, *left, *right);
    if (format == "json") {
        std::cout << v.to_json().dump(2) << "\n";
    } else {
        std::cout << v.to_table();
    }
    return v.holds ? kHolds : kFails;
}

int run_graph(const std::string& variant, const std::string& format, const std::string& file) {
    const auto v = tgl::parse_variant(variant);
    if (!v) {
        std::cerr << "error: unknown variant '" << variant << "'\n";
        return kInputError;
    }
    std::optional<tgl::Process> p;
    try {
        p = tgl::load_automaton(file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    const tgl::ZvGraph g = tgl::build_graph(*p, *v);
    if (format == "json") {
        std::cout << tgl::export_json(g).dump(2) << "\n";
    } else {
        std::cout << tgl::export_dot(g);
    }
    return 0;
}

/// Pairs NAME_left.ta / NAME_right.ta found in `dir`.
int run_hierarchy(const std::string& dir, const std::string& format, unsigned workers) {
    std::map<std::string, std::pair<std::string, std::string>> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        const std::string stem = entry.path().stem().string();
        if (entry.path().extension() != ".ta") {
            continue;
        }
        for (const std::string suffix : {"_left", "_right"}) {
            if (stem.size() > suffix.size() && stem.ends_with(suffix)) {
                auto& slot = files[stem.substr(0, stem.size() - suffix.size())];
                (suffix == "_left" ? slot.first : slot.second) = entry.path().string();
            }
        }
    }
    if (ec) {
        std::cerr << "error: cannot read directory '" << dir << "': " << ec.message() << "\n";
        return kInputError;
    }
    std::vector<tgl::NamedPair> corpus;
    for (const auto& [name, paths] : files) {
        if (paths.first.empty() || paths.second.empty()) {
            std::cerr << "warning: '" << name << "' has no matching _left/_right file, skipped\n";
            continue;
        }
        try {
            corpus.push_back({name, tgl::load_automaton(paths.first), tgl::load_automaton(paths.second)});
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kInputError;
        }
    }
    if (corpus.empty()) {
        std::cerr << "error: no NAME_left.ta / NAME_right.ta pairs in '" << dir << "'\n";
        return kInputError;
    }
    const tgl::AuditReport report = tgl::hierarchy_audit(corpus, workers);
    if (format == "json") {
        std::cout << report.to_json().dump(2) << "\n";
    } else {
        std::cout << report.to_table();
    }
    return report.violations.empty() ? 0 : kFails;
}

void show(const tgl::Session& s) {
    const auto rec = s.record();
    const auto& cfg = rec["config"];
    std::cout << "pair (" << cfg["left"] << ", " << cfg["right"] << ")  round " << cfg["roundsPlayed"]
              << "  game " << cfg["disjunct"] << "\n";
    const auto& hist = s.history();
    for (std::size_t i = hist.size() > 2 ? hist.size() - 2 : 0; i < hist.size(); ++i) {
        const auto& e = hist[i];
        std::cout << "  " << (e.human ? "you" : "engine") << " (" << tgl::to_string(e.role) << "): "
                  << tgl::to_string(e.move.side) << " " << e.move.label << " -> " << e.move.target << "\n";
    }
}

int run_play(const std::string& relation, const std::string& human, const std::string& a, const std::string& b) {
    const auto r = tgl::parse_relation(relation);
    const auto role = tgl::parse_role(human);
    if (!r || !role) {
        std::cerr << "error: unknown relation or role\n";
        return kInputError;
    }
    std::optional<tgl::Process> left;
    std::optional<tgl::Process> right;
    try {
        left = tgl::load_automaton(a);
        right = tgl::load_automaton(b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    tgl::Session s(tgl::game_for(*r), *left, *right, *role);
    while (s.status() == tgl::SessionStatus::Live) {
        show(s);
        const auto moves = s.legal_moves_json();
        for (std::size_t i = 0; i < moves.size(); ++i) {
            std::cout << "  [" << i << "] " << moves[i]["side"].get<std::string>() << " "
                      << moves[i]["label"].get<std::string>() << " -> " << moves[i]["target"] << "\n";
        }
        std::cout << "move> " << std::flush;
        std::size_t choice = 0;
        if (!(std::cin >> choice)) {
            return 0;
        }
        if (choice >= moves.size()) {
            std::cout << "no such move\n";
            continue;
        }
        const auto& m = moves[choice];
        if (*role == tgl::Role::Attacker) {
            s.play({m["side"] == "left" ? tgl::Side::Left : tgl::Side::Right, m["label"].get<std::string>(),
                    m["target"].get<std::size_t>()});
        } else {
            s.reply(m["target"].get<std::size_t>());
        }
    }
    show(s);
    std::cout << tgl::to_string(s.status()) << ": " << s.outcome() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zone valuation graphs and games for timed relations"};
    app.require_subcommand(1);

    std::string relation;
    std::string format = "table";
    std::string file_a;
    std::string file_b;
    auto* check = app.add_subcommand("check", "Decide a relation between two automata (exit 0 holds, 1 fails)");
    check->add_option("--relation,-r", relation, "One of: " + relation_names())->required();
    check->add_option("--format,-f", format, "Output format")->check(CLI::IsMember({"json", "table"}));
    check->add_option("left", file_a, "Left automaton")->required();
    check->add_option("right", file_b, "Right automaton")->required();

    std::string variant;
    std::string graph_format = "dot";
    std::string graph_file;
    auto* graph = app.add_subcommand("graph", "Export a zone valuation graph");
    graph->add_option("--variant,-v", variant, "Graph variant")->required()->check(CLI::IsMember({"z1", "z", "zsim"}));
    graph->add_option("--format,-f", graph_format, "Output format")->check(CLI::IsMember({"dot", "json"}));
    graph->add_option("file", graph_file, "Automaton file")->required();

    std::string dir;
    std::string audit_format = "table";
    unsigned workers = 0;
    auto* hierarchy = app.add_subcommand("hierarchy", "Audit the implication lattice on NAME_left/NAME_right pairs");
    hierarchy->add_option("dir", dir, "Directory with .ta pairs")->required();
    hierarchy->add_option("--format,-f", audit_format, "Output format")->check(CLI::IsMember({"json", "table"}));
    hierarchy->add_option("--workers,-j", workers, "Worker threads (0 = all cores)");

    std::string play_relation;
    std::string human = "attacker";
    std::string play_a;
    std::string play_b;
    auto* play = app.add_subcommand("play", "Play a game in the terminal");
    play->add_option("--relation,-r", play_relation, "Relation whose game is played")->required();
    play->add_option("--human", human, "Role of the human")->check(CLI::IsMember({"attacker", "defender"}));
    play->add_option("left", play_a, "Left automaton")->required();
    play->add_option("right", play_b, "Right automaton")->required();

    int port = 8080;
    std::string host = "127.0.0.1";
    auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
    serve->add_option("--port,-p", port, "Port");
    serve->add_option("--host", host, "Address to bind");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        CLI::App* sub = nullptr;
        for (auto* s : app.get_subcommands()) {
            sub = s;
        }
        std::cerr << (sub != nullptr ? sub->help() : app.help());
        return kInputError;
    }

    if (*check) {
        return run_check(relation, format, file_a, file_b);
    }
    if (*graph) {
        return run_graph(variant, graph_format, graph_file);
    }
    if (*hierarchy) {
        return run_hierarchy(dir, audit_format, workers);
    }
    if (*play) {
        return run_play(play_relation, human, play_a, play_b);
    }
    if (*serve) {
        tgl::SessionService service;
        std::cerr << "listening on http://" << host << ":" << port << "\n";
        return tgl::serve_http(service, host, port) ? 0 : kInputError;
    }
    return kInputError;
}
