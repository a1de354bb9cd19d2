// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/lts.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tgl {

void Lts::add(std::size_t source, std::size_t label, std::size_t target) {
    if (source >= out_.size() || target >= out_.size()) {
        throw std::out_of_range("transition references an unknown state");
    }
    auto& list = out_[source];
    const std::pair<std::size_t, std::size_t> t{label, target};
    auto it = std::lower_bound(list.begin(), list.end(), t);
    if (it == list.end() || *it != t) {
        list.insert(it, t);
    }
}

std::vector<std::size_t> bisimulation_classes(const Lts& lts) {
    // Signature refinement: a state's signature is its block together with the set of
    // (label, target block) pairs. Blocks only ever split, so the loop ends once the
    // block count stops growing.
    const std::size_t n = lts.size();
    std::vector<std::size_t> block(n, 0);
    std::size_t count = n == 0 ? 0 : 1;
    while (true) {
        using Signature = std::pair<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>>;
        std::map<Signature, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            Signature sig{block[s], {}};
            for (const auto& [label, target] : lts.out(s)) {
                sig.second.emplace_back(label, block[target]);
            }
            std::sort(sig.second.begin(), sig.second.end());
            sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
            auto [it, inserted] = ids.emplace(std::move(sig), ids.size());
            next[s] = it->second;
        }
        const bool stable = ids.size() == count;
        block = std::move(next);
        count = ids.size();
        if (stable) {
            return block;
        }
    }
}

std::vector<std::vector<bool>> similarity(const Lts& lts) {
    const std::size_t n = lts.size();
    std::vector<std::vector<bool>> sim(n, std::vector<bool>(n, true));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!sim[i][j]) {
                    continue;
                }
                for (const auto& [label, ti] : lts.out(i)) {
                    const auto& oj = lts.out(j);
                    const bool matched = std::any_of(oj.begin(), oj.end(), [&](const auto& t) {
                        return t.first == label && sim[ti][t.second];
                    });
                    if (!matched) {
                        sim[i][j] = false;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    return sim;
}

std::vector<std::size_t> simulation_equivalence_classes(const Lts& lts) {
    const auto sim = similarity(lts);
    const std::size_t n = lts.size();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> cls(n, unset);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] != unset) {
            continue;
        }
        cls[i] = next;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (cls[j] == unset && sim[i][j] && sim[j][i]) {
                cls[j] = next;
            }
        }
        ++next;
    }
    return cls;
}

} // namespace tgl
