// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <string>

#include <nlohmann/json.hpp>

#include "tgl/rational.hpp"

namespace tgl {

/// A rational extended with an infinitesimal coefficient and with infinity.
///
/// `base + delta_coeff * δ` where δ is positive but smaller than any rational, so values
/// compare lexicographically on (base, delta_coeff). Infinity is above every finite value.
/// Clock extremes use coefficients in {-1, 0, +1}; ranges and spans use {-2, -1, 0}.
class SymbolicValue {
public:
    SymbolicValue() = default;

    static SymbolicValue finite(Rational base, int delta_coeff = 0) { return {false, base, delta_coeff}; }
    static SymbolicValue infinity() { return {true, Rational(0), 0}; }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }
    /// Only meaningful for finite values.
    const Rational& base() const { return base_; }
    int delta_coeff() const { return delta_; }

    /// Difference of two values; infinity minus anything finite is infinity.
    /// Subtracting infinity is undefined and throws std::domain_error.
    friend SymbolicValue operator-(const SymbolicValue& a, const SymbolicValue& b);
    friend SymbolicValue operator-(const SymbolicValue& a, const Rational& b);

    /// Largest integer n with n <= value; the value must be finite.
    std::int64_t integer_part() const;
    /// True iff the value is an integer with no infinitesimal component.
    bool frac_zero() const;

    friend bool operator==(const SymbolicValue&, const SymbolicValue&) = default;
    friend std::strong_ordering operator<=>(const SymbolicValue& a, const SymbolicValue& b);

    /// "1-δ", "1-2δ", "5/2+δ", "0", "∞".
    std::string to_string() const;
    /// {"base": "5/2", "delta": -1} or the string "inf".
    nlohmann::ordered_json to_json() const;

private:
    SymbolicValue(bool infinite, Rational base, int delta) : infinite_(infinite), base_(base), delta_(delta) {}

    bool infinite_ = false;
    Rational base_{0};
    int delta_ = 0;
};

} // namespace tgl
