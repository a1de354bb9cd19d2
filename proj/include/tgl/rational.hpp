// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace tgl {

/// Exact clock values and delays. Always kept in lowest terms by boost.
///
/// Compare against Rational(n), not a bare integer: boost's mixed rational/int equality
/// recurses forever under C++20 rewritten comparison operators.
using Rational = boost::rational<std::int64_t>;

/// Parses "3", "2.4" or "7/3". Negative values are rejected.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "3", "12/5". Inverse of parse_rational for the fraction form.
std::string to_string(const Rational& q);

inline std::int64_t floor(const Rational& q) {
    const auto n = q.numerator();
    const auto d = q.denominator();
    return n >= 0 ? n / d : -((-n + d - 1) / d);
}

inline Rational frac(const Rational& q) { return q - Rational(floor(q)); }

inline bool is_integer(const Rational& q) { return q.denominator() == 1; }

} // namespace tgl
