// Copyright (c) tgl contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tgl/symbolic.hpp"

#include <stdexcept>

namespace tgl {

SymbolicValue operator-(const SymbolicValue& a, const SymbolicValue& b) {
    if (b.infinite_) {
        throw std::domain_error("cannot subtract an infinite value");
    }
    if (a.infinite_) {
        return SymbolicValue::infinity();
    }
    return SymbolicValue::finite(a.base_ - b.base_, a.delta_ - b.delta_);
}

SymbolicValue operator-(const SymbolicValue& a, const Rational& b) { return a - SymbolicValue::finite(b); }

std::int64_t SymbolicValue::integer_part() const {
    if (infinite_) {
        throw std::domain_error("infinite value has no integer part");
    }
    const std::int64_t f = floor(base_);
    return (is_integer(base_) && delta_ < 0) ? f - 1 : f;
}

bool SymbolicValue::frac_zero() const { return !infinite_ && is_integer(base_) && delta_ == 0; }

std::strong_ordering operator<=>(const SymbolicValue& a, const SymbolicValue& b) {
    if (a.infinite_ || b.infinite_) {
        return a.infinite_ <=> b.infinite_;
    }
    if (a.base_ != b.base_) {
        return a.base_ < b.base_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.delta_ <=> b.delta_;
}

std::string SymbolicValue::to_string() const {
    if (infinite_) {
        return "∞";
    }
    std::string out = tgl::to_string(base_);
    if (delta_ == 0) {
        return out;
    }
    const int mag = delta_ < 0 ? -delta_ : delta_;
    out += delta_ < 0 ? "-" : "+";
    if (mag != 1) {
        out += std::to_string(mag);
    }
    return out + "δ";
}

nlohmann::ordered_json SymbolicValue::to_json() const {
    if (infinite_) {
        return "inf";
    }
    nlohmann::ordered_json j;
    j["base"] = tgl::to_string(base_);
    j["delta"] = delta_;
    return j;
}

} // namespace tgl
