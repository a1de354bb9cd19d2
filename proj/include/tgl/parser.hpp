// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tgl/model.hpp"

namespace tgl {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Parses the line-oriented automaton format:
///
///     clocks x y
///     automaton NAME
///     init L
///     location L [invariant g]
///     edge L1 -> L2 when g do a [reset {x,y}]
///     start L with x=Q y=Q
///
/// Clocks missing from `start` are zero. Without `start` the process is (l0, v0).
Process parse_automaton(std::string_view text);

Process load_automaton(const std::string& path);

/// Canonical text form; parse_automaton(print_automaton(p)) == p.
std::string print_automaton(const Process& p);

std::string format_guard(const TimedAutomaton& a, const Guard& g);

/// Canonical JSON with stable key order.
nlohmann::ordered_json to_json(const Process& p);

} // namespace tgl
