// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "witnesses.hpp"

#include "tgl/parser.hpp"

namespace tgl::testkit {

namespace {
const char* const kWitnesses[] = {"prebisim", "crossed", "delay", "obs", "simeq", "interval"};
}

Process model(const std::string& name) { return load_automaton(std::string(TGL_EXAMPLES_DIR) + "/" + name + ".ta"); }

NamedPair witness(const std::string& name) { return {name, model(name + "_left"), model(name + "_right")}; }

std::vector<NamedPair> witness_corpus() {
    std::vector<NamedPair> out;
    for (const char* w : kWitnesses) {
        out.push_back(witness(w));
    }
    return out;
}

std::vector<Process> model_automata() {
    std::vector<Process> out;
    for (const char* w : kWitnesses) {
        out.push_back(model(std::string(w) + "_left"));
        out.push_back(model(std::string(w) + "_right"));
    }
    return out;
}

} // namespace tgl::testkit
