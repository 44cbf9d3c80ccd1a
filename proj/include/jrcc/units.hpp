#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace jrcc {

/// Physical dimension a config value may carry. Every conversion is a
/// single scale factor applied when the value crosses the text boundary;
/// everything behind the boundary is SI.
enum class Quantity {
    Length,
    Angle,
    Force,
    Voltage,
    Stress,
    Resistivity,
    Dimensionless,
};

/// Scale factor to SI for a unit token, or nullopt when the token is not
/// accepted for the quantity. Dimensionless accepts only the empty token.
std::optional<double> unit_factor(Quantity quantity, std::string_view token);

/// Accepted tokens for the quantity, comma separated, for help and error text.
std::string unit_token_list(Quantity quantity);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

/// Strict full-token parse, independent of locale. No surrounding
/// whitespace, no trailing characters.
bool parse_double(std::string_view text, double& out);

}  // namespace jrcc
