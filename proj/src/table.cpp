#include "jrcc/table.hpp"

#include <cmath>
#include <stdexcept>

namespace jrcc {

void ResultTable::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns.size())
        throw std::logic_error("table row width does not match column count");
    for (const Cell& c : cells)
        if (c.kind == Cell::Kind::Number && !std::isfinite(c.number))
            throw std::logic_error("table cells must hold finite numbers");
    rows.push_back(std::move(cells));
}

bool ResultTable::row_feasible(std::size_t i) const {
    for (const Cell& c : rows.at(i))
        if (c.kind == Cell::Kind::Infeasible) return false;
    return true;
}

}  // namespace jrcc
