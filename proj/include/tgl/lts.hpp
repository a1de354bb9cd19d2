// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace tgl {

/// A finite labelled transition system over states 0..n-1 and integer labels.
class Lts {
public:
    explicit Lts(std::size_t states) : out_(states) {}

    std::size_t size() const { return out_.size(); }
    void add(std::size_t source, std::size_t label, std::size_t target);

    /// Outgoing (label, target) pairs, sorted and without duplicates.
    const std::vector<std::pair<std::size_t, std::size_t>>& out(std::size_t s) const { return out_.at(s); }

private:
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out_;
};

/// Coarsest strong bisimulation. Returns a block index per state; blocks are numbered in
/// order of their smallest state.
std::vector<std::size_t> bisimulation_classes(const Lts& lts);

/// Largest simulation: result[i][j] is true iff state j simulates state i.
std::vector<std::vector<bool>> similarity(const Lts& lts);

/// Classes of mutual similarity, numbered in order of their smallest state.
std::vector<std::size_t> simulation_equivalence_classes(const Lts& lts);

} // namespace tgl
