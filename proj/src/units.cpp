#include "jrcc/units.hpp"

#include <charconv>
#include <cstddef>

#include "jrcc/types.hpp"

namespace jrcc {

namespace {

struct UnitEntry {
    Quantity quantity;
    const char* token;
    double factor;
};

constexpr UnitEntry kUnits[] = {
    {Quantity::Length, "m", 1.0},
    {Quantity::Length, "cm", 1e-2},
    {Quantity::Length, "mm", 1e-3},
    {Quantity::Length, "um", 1e-6},
    {Quantity::Length, "\xc2\xb5m", 1e-6},  // µm
    {Quantity::Length, "nm", 1e-9},
    {Quantity::Angle, "rad", 1.0},
    {Quantity::Angle, "wraps", kRadPerWrap},
    {Quantity::Force, "N", 1.0},
    {Quantity::Force, "mN", 1e-3},
    {Quantity::Force, "kN", 1e3},
    {Quantity::Voltage, "V", 1.0},
    {Quantity::Voltage, "kV", 1e3},
    {Quantity::Stress, "Pa", 1.0},
    {Quantity::Stress, "kPa", 1e3},
    {Quantity::Stress, "MPa", 1e6},
    {Quantity::Stress, "GPa", 1e9},
    {Quantity::Stress, "N/cm2", 1e4},
    {Quantity::Resistivity, "ohm.m", 1.0},
    {Quantity::Resistivity, "ohm.cm", 1e-2},
};

}  // namespace

std::optional<double> unit_factor(Quantity quantity, std::string_view token) {
    if (quantity == Quantity::Dimensionless) {
        if (token.empty()) return 1.0;
        return std::nullopt;
    }
    for (const UnitEntry& entry : kUnits) {
        if (entry.quantity == quantity && token == entry.token) return entry.factor;
    }
    return std::nullopt;
}

std::string unit_token_list(Quantity quantity) {
    if (quantity == Quantity::Dimensionless) return "(none)";
    std::string out;
    for (const UnitEntry& entry : kUnits) {
        if (entry.quantity != quantity) continue;
        if (!out.empty()) out += ", ";
        out += entry.token;
    }
    return out;
}

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc{} && result.ptr == end;
}

}  // namespace jrcc
