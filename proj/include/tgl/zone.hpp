// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "tgl/model.hpp"

namespace tgl {

/// Upper bound `< c`, `<= c` or unbounded on a clock difference.
///
/// Encoded as 2c + 1 for `<= c` and 2c for `< c`, so that the natural integer order is the
/// bound order: (c, strict) < (c, weak) < (c + 1, strict) < ... < unbounded.
class Bound {
public:
    static constexpr std::int64_t kInfRaw = std::numeric_limits<std::int64_t>::max();

    constexpr Bound() = default;

    static constexpr Bound weak(std::int64_t c) { return Bound(2 * c + 1); }
    static constexpr Bound strict(std::int64_t c) { return Bound(2 * c); }
    static constexpr Bound infinity() { return Bound(kInfRaw); }
    static constexpr Bound le_zero() { return weak(0); }

    constexpr bool is_infinite() const { return raw_ == kInfRaw; }
    constexpr bool is_strict() const { return !is_infinite() && (raw_ & 1) == 0; }
    constexpr bool is_weak() const { return !is_infinite() && (raw_ & 1) == 1; }
    /// Constant c of the bound; undefined for infinity.
    constexpr std::int64_t value() const { return raw_ >> 1; }
    constexpr std::int64_t raw() const { return raw_; }

    friend constexpr Bound operator+(Bound a, Bound b) {
        if (a.is_infinite() || b.is_infinite()) {
            return infinity();
        }
        return Bound(a.raw_ + b.raw_ - ((a.raw_ | b.raw_) & 1));
    }

    /// The complement: not (x - y <= c) is y - x < -c.
    constexpr Bound negated() const { return Bound(1 - raw_); }

    friend constexpr auto operator<=>(Bound, Bound) = default;

private:
    constexpr explicit Bound(std::int64_t raw) : raw_(raw) {}
    std::int64_t raw_ = 1;
};

using ClockNames = std::shared_ptr<const std::vector<std::string>>;

/// A convex zone as a difference bound matrix over the clocks plus reference clock 0.
/// Entry (i, j) bounds x_i - x_j; clock k of the automaton is DBM index k + 1.
///
/// Every public operation returns a canonical (shortest-path closed) zone, or the empty zone.
class Zone {
public:
    /// All valuations with every clock >= 0.
    static Zone universal(ClockNames clocks);
    /// The single valuation with every clock at 0.
    static Zone zero(ClockNames clocks);
    /// The tightest zone containing `v` whose bounds are integers: its region when no clock
    /// exceeds a maximal constant.
    static Zone region_of(ClockNames clocks, const Valuation& v);

    std::size_t dim() const { return dim_; }
    std::size_t clock_count() const { return dim_ - 1; }
    const ClockNames& clocks() const { return clocks_; }

    bool is_empty() const { return empty_; }

    Bound at(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }

    /// Upper bound on clock index i (1-based DBM index).
    Bound upper(std::size_t i) const { return at(i, 0); }
    /// Bound on -x_i; lower bound of x_i is the negation of its constant.
    Bound lower(std::size_t i) const { return at(0, i); }

    /// Adds x_i - x_j <= b and re-canonicalizes.
    Zone constrain(std::size_t i, std::size_t j, Bound b) const;
    Zone intersect(const ClockConstraint& c) const;
    Zone intersect(const Guard& g) const;
    Zone intersect(const Zone& other) const;

    /// Delay closure { v + d | v in z, d >= 0 }.
    Zone up() const;
    /// Past closure { v | exists d >= 0, v + d in z }.
    Zone down() const;
    /// Image under v[r] (clocks in r set to 0); clock ids are automaton clock ids.
    Zone reset(const std::vector<ClockId>& r) const;
    /// Removes every constraint on the given clocks (keeping them non-negative).
    Zone free(const std::vector<ClockId>& r) const;
    /// Maximal-constants widening; max_const[k] is the constant of automaton clock k.
    Zone extrapolate(const std::vector<std::int64_t>& max_const) const;

    bool contains(const Valuation& v) const;
    /// this is a subset of other.
    bool subset_of(const Zone& other) const;
    bool intersects(const Zone& other) const;

    /// this minus other, as pairwise disjoint convex pieces.
    std::vector<Zone> subtract(const Zone& other) const;

    /// Sorted conjunction such as `1<=x<2 & x-y=1`; "true" / "false" for the extremes.
    std::string to_string() const;

    bool operator==(const Zone& other) const;

private:
    Zone(ClockNames clocks, std::size_t dim);
    Bound& ref(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }
    void canonicalize_in_place();
    void set_empty();

    ClockNames clocks_;
    std::size_t dim_ = 1;
    std::vector<Bound> m_;
    bool empty_ = false;

    friend Zone canonicalize(const Zone& z);
    friend Zone make_raw_zone(ClockNames clocks, const std::vector<std::vector<Bound>>& matrix);
};

/// Shortest-path closure of an arbitrary matrix; the empty zone on a negative cycle.
Zone canonicalize(const Zone& z);

/// Builds a zone from a full bound matrix (not necessarily closed), then canonicalizes.
Zone make_raw_zone(ClockNames clocks, const std::vector<std::vector<Bound>>& matrix);

/// Partition of `base` into maximal convex cells on which every atom of `inv` and `guards`
/// has a constant truth value. Cells are disjoint, canonical and cover `base`.
std::vector<Zone> canonical_decomposition(const Guard& inv, const std::vector<Guard>& guards, const Zone& base);

} // namespace tgl
