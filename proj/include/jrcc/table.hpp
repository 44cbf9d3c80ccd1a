#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace jrcc {

/// One table cell: a finite number, free text, a not-applicable marker
/// (metric undefined for an otherwise valid row, e.g. per-area metrics at
/// zero wrap angle), or an infeasibility marker (the row's parameter
/// combination violates an invariant and was not evaluated).
struct Cell {
    enum class Kind { Number, Text, NA, Infeasible };

    Kind kind = Kind::NA;
    double number = 0.0;
    std::string text;

    static Cell num(double v) { return {Kind::Number, v, {}}; }
    static Cell str(std::string s) { return {Kind::Text, 0.0, std::move(s)}; }
    static Cell na() { return {Kind::NA, 0.0, {}}; }
    static Cell infeasible() { return {Kind::Infeasible, 0.0, {}}; }

    bool operator==(const Cell& other) const {
        if (kind != other.kind) return false;
        switch (kind) {
            case Kind::Number: return number == other.number;
            case Kind::Text: return text == other.text;
            default: return true;
        }
    }
};

/// Provenance stamped onto every emitted table.
struct Provenance {
    std::string tool_version;
    std::string input_sha256;
    std::string generated_at;  // ISO-8601 UTC

    bool operator==(const Provenance&) const = default;
};

/// Rectangular result table with unit-suffixed column names. Row order and
/// column order are part of the contract (deterministic output).
struct ResultTable {
    Provenance provenance;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells);
    bool row_feasible(std::size_t i) const;

    bool operator==(const ResultTable&) const = default;
};

}  // namespace jrcc
