// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/zone.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace tgl {

Zone::Zone(ClockNames clocks, std::size_t dim)
    : clocks_(std::move(clocks)), dim_(dim), m_(dim * dim, Bound::infinity()) {
    for (std::size_t i = 0; i < dim_; ++i) {
        ref(i, i) = Bound::le_zero();
        ref(0, i) = Bound::le_zero();
    }
}

Zone Zone::universal(ClockNames clocks) {
    const std::size_t dim = clocks->size() + 1;
    return Zone(std::move(clocks), dim);
}

Zone Zone::zero(ClockNames clocks) {
    Zone z = universal(std::move(clocks));
    std::fill(z.m_.begin(), z.m_.end(), Bound::le_zero());
    return z;
}

Zone Zone::region_of(ClockNames clocks, const Valuation& v) {
    Zone z = universal(std::move(clocks));
    if (v.size() != z.clock_count()) {
        throw std::invalid_argument("valuation does not match the clock set");
    }
    auto value = [&](std::size_t i) { return i == 0 ? Rational(0) : v[i - 1]; };
    for (std::size_t i = 0; i < z.dim_; ++i) {
        for (std::size_t j = 0; j < z.dim_; ++j) {
            if (i == j) {
                continue;
            }
            const Rational d = value(i) - value(j);
            z.ref(i, j) = is_integer(d) ? Bound::weak(d.numerator()) : Bound::strict(floor(d) + 1);
        }
    }
    z.canonicalize_in_place();
    return z;
}

void Zone::set_empty() {
    empty_ = true;
    std::fill(m_.begin(), m_.end(), Bound::strict(0));
}

void Zone::canonicalize_in_place() {
    if (empty_) {
        return;
    }
    for (std::size_t k = 0; k < dim_; ++k) {
        for (std::size_t i = 0; i < dim_; ++i) {
            const Bound ik = at(i, k);
            if (ik.is_infinite()) {
                continue;
            }
            for (std::size_t j = 0; j < dim_; ++j) {
                const Bound cand = ik + at(k, j);
                if (cand < at(i, j)) {
                    ref(i, j) = cand;
                }
            }
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            if (at(i, i) < Bound::le_zero()) {
                set_empty();
                return;
            }
        }
    }
}

Zone canonicalize(const Zone& z) {
    Zone out = z;
    out.canonicalize_in_place();
    return out;
}

Zone make_raw_zone(ClockNames clocks, const std::vector<std::vector<Bound>>& matrix) {
    Zone z = Zone::universal(std::move(clocks));
    if (matrix.size() != z.dim_) {
        throw std::invalid_argument("matrix dimension mismatch");
    }
    for (std::size_t i = 0; i < z.dim_; ++i) {
        if (matrix[i].size() != z.dim_) {
            throw std::invalid_argument("matrix dimension mismatch");
        }
        for (std::size_t j = 0; j < z.dim_; ++j) {
            z.ref(i, j) = matrix[i][j];
        }
    }
    z.canonicalize_in_place();
    return z;
}

Zone Zone::constrain(std::size_t i, std::size_t j, Bound b) const {
    if (empty_ || !(b < at(i, j))) {
        return *this;
    }
    Zone out = *this;
    out.ref(i, j) = b;
    out.canonicalize_in_place();
    return out;
}

Zone Zone::intersect(const ClockConstraint& c) const {
    if (c.clock >= clock_count()) {
        throw std::out_of_range("constraint on unknown clock");
    }
    const std::size_t i = c.clock + 1;
    switch (c.rel) {
    case Rel::Less: return constrain(i, 0, Bound::strict(c.bound));
    case Rel::LessEq: return constrain(i, 0, Bound::weak(c.bound));
    case Rel::Eq: return constrain(i, 0, Bound::weak(c.bound)).constrain(0, i, Bound::weak(-c.bound));
    case Rel::GreaterEq: return constrain(0, i, Bound::weak(-c.bound));
    case Rel::Greater: return constrain(0, i, Bound::strict(-c.bound));
    }
    return *this;
}

Zone Zone::intersect(const Guard& g) const {
    Zone out = *this;
    for (const auto& c : g) {
        out = out.intersect(c);
    }
    return out;
}

Zone Zone::intersect(const Zone& other) const {
    if (empty_ || other.empty_) {
        Zone out = *this;
        out.set_empty();
        return out;
    }
    Zone out = *this;
    for (std::size_t k = 0; k < m_.size(); ++k) {
        out.m_[k] = std::min(out.m_[k], other.m_[k]);
    }
    out.canonicalize_in_place();
    return out;
}

Zone Zone::up() const {
    if (empty_) {
        return *this;
    }
    Zone out = *this;
    for (std::size_t i = 1; i < dim_; ++i) {
        out.ref(i, 0) = Bound::infinity();
    }
    return out;
}

Zone Zone::down() const {
    if (empty_) {
        return *this;
    }
    Zone out = *this;
    for (std::size_t j = 1; j < dim_; ++j) {
        out.ref(0, j) = Bound::le_zero();
    }
    out.canonicalize_in_place();
    return out;
}

Zone Zone::reset(const std::vector<ClockId>& r) const {
    if (empty_) {
        return *this;
    }
    Zone out = *this;
    for (auto k : r) {
        if (k >= clock_count()) {
            throw std::out_of_range("reset of unknown clock");
        }
        const std::size_t i = k + 1;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (j == i) {
                continue;
            }
            out.ref(i, j) = out.at(0, j);
            out.ref(j, i) = out.at(j, 0);
        }
    }
    out.canonicalize_in_place();
    return out;
}

Zone Zone::free(const std::vector<ClockId>& r) const {
    if (empty_) {
        return *this;
    }
    Zone out = *this;
    for (auto k : r) {
        if (k >= clock_count()) {
            throw std::out_of_range("unknown clock");
        }
        const std::size_t i = k + 1;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (j == i) {
                continue;
            }
            out.ref(i, j) = Bound::infinity();
            out.ref(j, i) = out.at(j, 0);
        }
        out.ref(0, i) = Bound::le_zero();
    }
    out.canonicalize_in_place();
    return out;
}

Zone Zone::extrapolate(const std::vector<std::int64_t>& max_const) const {
    if (empty_) {
        return *this;
    }
    if (max_const.size() != clock_count()) {
        throw std::invalid_argument("maximal constants do not cover the clocks");
    }
    Zone out = *this;
    auto m = [&](std::size_t i) { return max_const[i - 1]; };
    // beyond[i]: clock i is known to exceed its maximal constant.
    std::vector<bool> beyond(dim_, false);
    for (std::size_t i = 1; i < dim_; ++i) {
        beyond[i] = at(0, i) < Bound::weak(-m(i));
    }
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            if (i == j) {
                continue;
            }
            Bound& b = out.ref(i, j);
            if (b.is_infinite()) {
                continue;
            }
            if (i > 0 && (b > Bound::weak(m(i)) || beyond[i] || (j > 0 && beyond[j]))) {
                b = Bound::infinity();
            } else if (i == 0 && j > 0 && beyond[j]) {
                b = Bound::strict(-m(j));
            }
        }
    }
    out.canonicalize_in_place();
    return out;
}

bool Zone::contains(const Valuation& v) const {
    if (empty_) {
        return false;
    }
    auto value = [&](std::size_t i) { return i == 0 ? Rational(0) : v.at(i - 1); };
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            const Bound b = at(i, j);
            if (i == j || b.is_infinite()) {
                continue;
            }
            const Rational d = value(i) - value(j);
            const Rational c(b.value());
            if (b.is_strict() ? !(d < c) : !(d <= c)) {
                return false;
            }
        }
    }
    return true;
}

bool Zone::subset_of(const Zone& other) const {
    if (empty_) {
        return true;
    }
    if (other.empty_) {
        return false;
    }
    for (std::size_t k = 0; k < m_.size(); ++k) {
        if (m_[k] > other.m_[k]) {
            return false;
        }
    }
    return true;
}

bool Zone::intersects(const Zone& other) const { return !intersect(other).is_empty(); }

std::vector<Zone> Zone::subtract(const Zone& other) const {
    if (empty_) {
        return {};
    }
    if (!intersects(other)) {
        return {*this};
    }
    std::vector<Zone> pieces;
    Zone rest = *this;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            if (i == j) {
                continue;
            }
            const Bound b = other.at(i, j);
            if (!(b < rest.at(i, j))) {
                continue;
            }
            Zone outside = rest.constrain(j, i, b.negated());
            if (!outside.is_empty()) {
                pieces.push_back(std::move(outside));
            }
            rest = rest.constrain(i, j, b);
            if (rest.is_empty()) {
                return pieces;
            }
        }
    }
    return pieces;
}

bool Zone::operator==(const Zone& other) const {
    if (empty_ || other.empty_) {
        return empty_ == other.empty_ && dim_ == other.dim_;
    }
    return dim_ == other.dim_ && m_ == other.m_;
}

std::string Zone::to_string() const {
    if (empty_) {
        return "false";
    }
    const auto& names = *clocks_;
    std::vector<std::string> parts;
    auto cmp = [](Bound b) { return b.is_strict() ? "<" : "<="; };
    for (std::size_t i = 1; i < dim_; ++i) {
        const std::string& x = names[i - 1];
        const Bound lo = lower(i);
        const Bound up = upper(i);
        const std::int64_t lo_val = -lo.value();
        const bool has_lo = lo != Bound::le_zero();
        if (!up.is_infinite() && up.is_weak() && lo.is_weak() && lo_val == up.value()) {
            parts.push_back(x + "=" + std::to_string(lo_val));
        } else if (has_lo && !up.is_infinite()) {
            parts.push_back(std::to_string(lo_val) + cmp(lo) + x + cmp(up) + std::to_string(up.value()));
        } else if (has_lo) {
            parts.push_back(x + (lo.is_strict() ? ">" : ">=") + std::to_string(lo_val));
        } else if (!up.is_infinite()) {
            parts.push_back(x + cmp(up) + std::to_string(up.value()));
        }
    }
    for (std::size_t i = 1; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            const std::string diff = names[i - 1] + "-" + names[j - 1];
            const Bound up = at(i, j);   // x_i - x_j <= up
            const Bound dn = at(j, i);   // x_j - x_i <= dn, i.e. x_i - x_j >= -dn
            const bool has_up = up < at(i, 0) + at(0, j);
            const bool has_dn = dn < at(j, 0) + at(0, i);
            if (has_up && has_dn && up.is_weak() && dn.is_weak() && up.value() == -dn.value()) {
                parts.push_back(diff + "=" + std::to_string(up.value()));
            } else if (has_up && has_dn) {
                parts.push_back(std::to_string(-dn.value()) + cmp(dn) + diff + cmp(up) + std::to_string(up.value()));
            } else if (has_up) {
                parts.push_back(diff + cmp(up) + std::to_string(up.value()));
            } else if (has_dn) {
                parts.push_back(diff + (dn.is_strict() ? ">" : ">=") + std::to_string(-dn.value()));
            }
        }
    }
    if (parts.empty()) {
        return "true";
    }
    std::string out = parts.front();
    for (std::size_t k = 1; k < parts.size(); ++k) {
        out += " & " + parts[k];
    }
    return out;
}

namespace {

ClockConstraint complement_half(const ClockConstraint& c) {
    switch (c.rel) {
    case Rel::Less: return {c.clock, Rel::GreaterEq, c.bound};
    case Rel::LessEq: return {c.clock, Rel::Greater, c.bound};
    case Rel::GreaterEq: return {c.clock, Rel::Less, c.bound};
    case Rel::Greater: return {c.clock, Rel::LessEq, c.bound};
    case Rel::Eq: break;
    }
    assert(false);
    return c;
}

} // namespace

std::vector<Zone> canonical_decomposition(const Guard& inv, const std::vector<Guard>& guards, const Zone& base) {
    if (base.is_empty()) {
        return {};
    }
    std::vector<ClockConstraint> atoms(inv.begin(), inv.end());
    for (const auto& g : guards) {
        atoms.insert(atoms.end(), g.begin(), g.end());
    }
    std::vector<Zone> cells{base};
    for (const auto& atom : atoms) {
        std::vector<ClockConstraint> sides;
        if (atom.rel == Rel::Eq) {
            sides = {{atom.clock, Rel::Less, atom.bound},
                     {atom.clock, Rel::Eq, atom.bound},
                     {atom.clock, Rel::Greater, atom.bound}};
        } else {
            sides = {atom, complement_half(atom)};
        }
        std::vector<Zone> next;
        for (const auto& cell : cells) {
            for (const auto& side : sides) {
                Zone piece = cell.intersect(side);
                if (!piece.is_empty()) {
                    next.push_back(std::move(piece));
                }
            }
        }
        cells = std::move(next);
    }
    return cells;
}

} // namespace tgl
