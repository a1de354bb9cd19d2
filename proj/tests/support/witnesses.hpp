// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "tgl/model.hpp"
#include "tgl/relations.hpp"

namespace tgl::testkit {

/// Loads models/<name>.ta.
Process model(const std::string& name);

/// The pair <name>_left / <name>_right.
NamedPair witness(const std::string& name);

/// Every fixed witness pair: prebisim, crossed, delay, obs, simeq, interval.
std::vector<NamedPair> witness_corpus();

/// Every automaton in the models directory.
std::vector<Process> model_automata();

} // namespace tgl::testkit
