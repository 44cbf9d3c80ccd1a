#include "jrcc/io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstddef>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "jrcc/errors.hpp"
#include "jrcc/model.hpp"

namespace jrcc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

struct RawCell {
    std::string text;
    bool quoted = false;
};

struct RawRow {
    std::vector<RawCell> cells;
    std::size_t line = 0;
};

bool blank_to_eol(std::string_view text, std::size_t i) {
    for (; i < text.size() && text[i] != '\n'; ++i) {
        if (text[i] != ' ' && text[i] != '\t' && text[i] != '\r') return false;
    }
    return true;
}

/// RFC-4180-style scanner: quoted cells may hold commas, doubled quotes and
/// newlines. A `#` at line start opens a comment through end of line; blank
/// lines are skipped. Line numbers are 1-based physical lines.
std::vector<RawRow> scan_csv(std::string_view text,
                             std::vector<std::pair<std::size_t, std::string>>* comments) {
    std::vector<RawRow> rows;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (text[i] == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (blank_to_eol(text, i)) {
            while (i < n && text[i] != '\n') ++i;
            continue;
        }
        if (text[i] == '#') {
            std::size_t j = i + 1;
            while (j < n && text[j] != '\n') ++j;
            if (comments != nullptr) {
                comments->emplace_back(line, std::string(trim(text.substr(i + 1, j - i - 1))));
            }
            i = j;
            continue;
        }

        RawRow row;
        row.line = line;
        while (true) {
            RawCell cell;
            if (i < n && text[i] == '"') {
                cell.quoted = true;
                ++i;
                while (true) {
                    if (i >= n) throw ParseError(row.line, "unterminated quoted cell");
                    const char c = text[i];
                    if (c == '"') {
                        if (i + 1 < n && text[i + 1] == '"') {
                            cell.text += '"';
                            i += 2;
                        } else {
                            ++i;
                            break;
                        }
                    } else {
                        if (c == '\n') ++line;
                        cell.text += c;
                        ++i;
                    }
                }
                if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    throw ParseError(line, "unexpected character after closing quote");
                }
            } else {
                std::size_t j = i;
                while (j < n && text[j] != ',' && text[j] != '\n') ++j;
                std::size_t end = j;
                if (end > i && text[end - 1] == '\r' && (j == n || text[j] == '\n')) --end;
                cell.text.assign(text.substr(i, end - i));
                i = j;
            }
            row.cells.push_back(std::move(cell));
            if (i < n && text[i] == ',') {
                ++i;
                continue;
            }
            break;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

bool csv_needs_quote(const std::string& s) {
    if (s.empty() || s.front() == '#') return true;
    if (s.find_first_of(",\"\n\r") != std::string::npos) return true;
    const std::string_view t = trim(s);
    if (t.empty() || t == "N/A" || t == "INFEASIBLE") return true;
    double v;
    return parse_double(t, v);
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_text(const std::string& s) {
    return csv_needs_quote(s) ? csv_quote(s) : s;
}

std::string csv_cell(const Cell& cell) {
    switch (cell.kind) {
        case Cell::Kind::Number: return format_double(cell.number);
        case Cell::Kind::Text: return csv_text(cell.text);
        case Cell::Kind::NA: return "N/A";
        case Cell::Kind::Infeasible: return "INFEASIBLE";
    }
    throw std::logic_error("unhandled cell kind");
}

Cell classify_cell(const RawCell& raw) {
    if (raw.quoted) return Cell::str(raw.text);
    const std::string_view t = trim(raw.text);
    if (t == "N/A") return Cell::na();
    if (t == "INFEASIBLE") return Cell::infeasible();
    double v;
    if (parse_double(t, v) && std::isfinite(v)) return Cell::num(v);
    return Cell::str(raw.text);
}

const char* si_unit_token(Quantity quantity) {
    switch (quantity) {
        case Quantity::Length: return "m";
        case Quantity::Angle: return "rad";
        case Quantity::Force: return "N";
        case Quantity::Voltage: return "V";
        case Quantity::Stress: return "Pa";
        case Quantity::Resistivity: return "ohm.m";
        case Quantity::Dimensionless: return "";
    }
    throw std::logic_error("unhandled quantity");
}

const DesignKey* find_design_key(std::string_view key) {
    for (const DesignKey& dk : design_schema()) {
        if (key == dk.key) return &dk;
    }
    return nullptr;
}

std::string write_table_csv(const ResultTable& table) {
    std::string out;
    out += "# tool_version=" + table.provenance.tool_version + "\n";
    out += "# input_sha256=" + table.provenance.input_sha256 + "\n";
    out += "# generated_at=" + table.provenance.generated_at + "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out += ',';
        out += csv_text(table.columns[c]);
    }
    out += '\n';
    for (const std::vector<Cell>& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += ',';
            out += csv_cell(row[c]);
        }
        out += '\n';
    }
    return out;
}

ResultTable parse_table_csv(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string>> comments;
    const std::vector<RawRow> rows = scan_csv(text, &comments);

    ResultTable table;
    for (const auto& [line, comment] : comments) {
        const std::size_t eq = comment.find('=');
        if (eq == std::string::npos) continue;
        const std::string_view key = trim(std::string_view(comment).substr(0, eq));
        const std::string value = comment.substr(eq + 1);
        if (key == "tool_version") table.provenance.tool_version = value;
        else if (key == "input_sha256") table.provenance.input_sha256 = value;
        else if (key == "generated_at") table.provenance.generated_at = value;
    }

    if (rows.empty()) throw ParseError("missing header row");
    for (const RawCell& cell : rows[0].cells) table.columns.push_back(cell.text);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].cells.size() != table.columns.size()) {
            throw ParseError(rows[r].line,
                             "expected " + std::to_string(table.columns.size()) +
                                 " cells, got " + std::to_string(rows[r].cells.size()));
        }
        std::vector<Cell> cells;
        cells.reserve(rows[r].cells.size());
        for (const RawCell& raw : rows[r].cells) cells.push_back(classify_cell(raw));
        table.add_row(std::move(cells));
    }
    return table;
}

std::string write_table_json(const ResultTable& table) {
    ordered_json j;
    j["metadata"] = {{"tool_version", table.provenance.tool_version},
                     {"input_sha256", table.provenance.input_sha256},
                     {"generated_at", table.provenance.generated_at}};
    j["columns"] = table.columns;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const bool feasible = table.row_feasible(i);
        ordered_json obj = ordered_json::object();
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const Cell& cell = table.rows[i][c];
            switch (cell.kind) {
                case Cell::Kind::Number: obj[table.columns[c]] = cell.number; break;
                case Cell::Kind::Text: obj[table.columns[c]] = cell.text; break;
                case Cell::Kind::NA:
                    if (!feasible) {
                        throw std::logic_error(
                            "JSON output cannot represent a row mixing NA and INFEASIBLE");
                    }
                    obj[table.columns[c]] = nullptr;
                    break;
                case Cell::Kind::Infeasible: obj[table.columns[c]] = nullptr; break;
            }
        }
        obj["feasible"] = feasible;
        rows.push_back(std::move(obj));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

ResultTable parse_table_json(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    ResultTable table;
    try {
        const ordered_json& meta = j.at("metadata");
        table.provenance.tool_version = meta.value("tool_version", "");
        table.provenance.input_sha256 = meta.value("input_sha256", "");
        table.provenance.generated_at = meta.value("generated_at", "");
        for (const ordered_json& col : j.at("columns")) {
            table.columns.push_back(col.get<std::string>());
        }
        for (const ordered_json& row : j.at("rows")) {
            const bool feasible = row.value("feasible", true);
            std::vector<Cell> cells;
            cells.reserve(table.columns.size());
            for (const std::string& col : table.columns) {
                const ordered_json& v = row.at(col);
                if (v.is_null()) {
                    cells.push_back(feasible ? Cell::na() : Cell::infeasible());
                } else if (v.is_string()) {
                    cells.push_back(Cell::str(v.get<std::string>()));
                } else if (v.is_number()) {
                    cells.push_back(Cell::num(v.get<double>()));
                } else {
                    throw ParseError("unsupported JSON cell type in column '" + col + "'");
                }
            }
            table.add_row(std::move(cells));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid table JSON: ") + e.what());
    }
    return table;
}

}  // namespace

const std::vector<DesignKey>& design_schema() {
    static const std::vector<DesignKey> schema = {
        {"shaft_radius", Quantity::Length, true, false},
        {"wrap_angle", Quantity::Angle, true, false},
        {"pretension", Quantity::Force, true, false},
        {"band_width", Quantity::Length, true, false},
        {"band_thickness", Quantity::Length, true, false},
        {"band_yield_stress", Quantity::Stress, true, false},
        {"dielectric_thickness", Quantity::Length, true, false},
        {"dielectric_permittivity", Quantity::Dimensionless, true, false},
        {"dielectric_resistivity", Quantity::Resistivity, false, false},
        {"dielectric_name", Quantity::Dimensionless, false, true},
        {"gap", Quantity::Length, true, false},
        {"gas_permittivity", Quantity::Dimensionless, false, false},
        {"cof", Quantity::Dimensionless, true, false},
        {"voltage", Quantity::Voltage, true, false},
    };
    return schema;
}

void set_design_value(ClutchDesign& design, OperatingPoint& op, std::string_view key,
                      double value_si) {
    if (key == "shaft_radius") design.geometry.shaft_radius = value_si;
    else if (key == "wrap_angle") design.geometry.wrap_angle = value_si;
    else if (key == "pretension") design.geometry.pretension = value_si;
    else if (key == "band_width") design.band.width = value_si;
    else if (key == "band_thickness") design.band.thickness = value_si;
    else if (key == "band_yield_stress") design.band.yield_stress = value_si;
    else if (key == "dielectric_thickness") design.dielectric.thickness = value_si;
    else if (key == "dielectric_permittivity") design.dielectric.rel_permittivity = value_si;
    else if (key == "dielectric_resistivity") design.dielectric.volume_resistivity = value_si;
    else if (key == "gap") design.interface.gap = value_si;
    else if (key == "gas_permittivity") design.interface.gas_permittivity = value_si;
    else if (key == "cof") design.interface.cof = value_si;
    else if (key == "voltage") op.voltage = value_si;
    else if (key == "dielectric_name") {
        throw ValidationError(std::string(key), "takes text, not a number");
    } else {
        throw ValidationError(std::string(key), "unknown design key");
    }
}

std::vector<MeasurementRecord> parse_measurements(std::string_view text) {
    const std::vector<RawRow> rows = scan_csv(text, nullptr);
    if (rows.empty()) throw ParseError("missing header row");

    static constexpr const char* kBase[] = {"wrap_angle_rad", "voltage_V", "pretension_N",
                                            "slip_torque_Nm"};
    const RawRow& header = rows[0];
    bool header_ok = header.cells.size() >= 4;
    for (std::size_t c = 0; header_ok && c < 4; ++c) {
        header_ok = header.cells[c].text == kBase[c];
    }
    std::size_t k = 4;
    bool has_power = false, has_label = false;
    if (header_ok && k < header.cells.size() && header.cells[k].text == "power_mW_per_cm2") {
        has_power = true;
        ++k;
    }
    if (header_ok && k < header.cells.size() && header.cells[k].text == "label") {
        has_label = true;
        ++k;
    }
    if (!header_ok || k != header.cells.size()) {
        throw ParseError(header.line,
                         "expected header wrap_angle_rad,voltage_V,pretension_N,"
                         "slip_torque_Nm[,power_mW_per_cm2][,label]");
    }

    std::vector<MeasurementRecord> records;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const RawRow& row = rows[r];
        if (row.cells.size() != header.cells.size()) {
            throw ParseError(row.line, "expected " + std::to_string(header.cells.size()) +
                                           " cells, got " + std::to_string(row.cells.size()));
        }
        auto number_at = [&](std::size_t c, const char* column) {
            double v;
            if (!parse_double(trim(row.cells[c].text), v) || !std::isfinite(v)) {
                throw ParseError(row.line, std::string("column ") + column +
                                               " is not a number: '" + row.cells[c].text + "'");
            }
            return v;
        };
        MeasurementRecord rec;
        rec.wrap_angle = number_at(0, kBase[0]);
        rec.voltage = number_at(1, kBase[1]);
        rec.pretension = number_at(2, kBase[2]);
        rec.slip_torque = number_at(3, kBase[3]);
        if (has_power && !trim(row.cells[4].text).empty()) {
            rec.power_areal = number_at(4, "power_mW_per_cm2") * 10.0;  // mW/cm^2 -> W/m^2
        }
        if (has_label) rec.label = row.cells[header.cells.size() - 1].text;
        try {
            validate(rec, records.size());
        } catch (const ValidationError& e) {
            throw ParseError(row.line, e.what());
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::pair<ClutchDesign, OperatingPoint> parse_design(std::string_view text) {
    ClutchDesign design;
    OperatingPoint op;
    std::map<std::string, std::size_t, std::less<>> seen;

    std::size_t line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line;

        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view content = trim(raw);
        if (content.empty()) continue;

        const std::size_t eq = content.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line, "expected 'key = value unit'");
        }
        const std::string_view key = trim(content.substr(0, eq));
        const std::string_view rest = trim(content.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "missing key before '='");

        const DesignKey* dk = find_design_key(key);
        if (dk == nullptr) throw ParseError(line, "unknown key '" + std::string(key) + "'");
        if (const auto it = seen.find(key); it != seen.end()) {
            throw ParseError(line, "duplicate key '" + std::string(key) + "' (first on line " +
                                       std::to_string(it->second) + ")");
        }
        seen.emplace(std::string(key), line);

        if (dk->text) {
            design.dielectric.name = std::string(rest);
            continue;
        }
        if (rest.empty()) throw ParseError(line, "missing value for '" + std::string(key) + "'");
        const std::size_t space = rest.find_first_of(" \t");
        const std::string_view value_token = rest.substr(0, space);
        std::string_view unit_token;
        if (space != std::string_view::npos) {
            unit_token = trim(rest.substr(space));
            if (unit_token.find_first_of(" \t") != std::string_view::npos) {
                throw ParseError(line, "unexpected text after the unit of '" + std::string(key) + "'");
            }
        }

        double value;
        if (!parse_double(value_token, value)) {
            throw ParseError(line, "value for '" + std::string(key) + "' is not a number: '" +
                                       std::string(value_token) + "'");
        }
        const std::optional<double> factor = unit_factor(dk->quantity, unit_token);
        if (!factor) {
            if (dk->quantity == Quantity::Dimensionless) {
                throw ParseError(line, "'" + std::string(key) + "' takes no unit");
            }
            if (unit_token.empty()) {
                throw ParseError(line, "'" + std::string(key) + "' needs a unit; accepted: " +
                                           unit_token_list(dk->quantity));
            }
            throw ParseError(line, "unknown unit '" + std::string(unit_token) + "' for '" +
                                       std::string(key) + "'; accepted: " +
                                       unit_token_list(dk->quantity));
        }
        const double si = value * *factor;
        if (!std::isfinite(si)) throw ParseError(line, "value for '" + std::string(key) + "' is out of range");
        set_design_value(design, op, key, si);
    }

    for (const DesignKey& dk : design_schema()) {
        if (dk.required && seen.find(dk.key) == seen.end()) {
            throw ParseError("missing key '" + std::string(dk.key) + "'");
        }
    }
    validate(design);
    validate(op);
    return {design, op};
}

std::string write_design(const ClutchDesign& design, const OperatingPoint& op) {
    validate(design);
    validate(op);
    auto value_of = [&](std::string_view key) {
        if (key == "shaft_radius") return design.geometry.shaft_radius;
        if (key == "wrap_angle") return design.geometry.wrap_angle;
        if (key == "pretension") return design.geometry.pretension;
        if (key == "band_width") return design.band.width;
        if (key == "band_thickness") return design.band.thickness;
        if (key == "band_yield_stress") return design.band.yield_stress;
        if (key == "dielectric_thickness") return design.dielectric.thickness;
        if (key == "dielectric_permittivity") return design.dielectric.rel_permittivity;
        if (key == "dielectric_resistivity") return *design.dielectric.volume_resistivity;
        if (key == "gap") return design.interface.gap;
        if (key == "gas_permittivity") return design.interface.gas_permittivity;
        if (key == "cof") return design.interface.cof;
        if (key == "voltage") return op.voltage;
        throw std::logic_error("unhandled design key");
    };

    std::string out = "# clutch design, SI units\n";
    for (const DesignKey& dk : design_schema()) {
        if (dk.text) {
            if (!design.dielectric.name.empty()) {
                out += std::string(dk.key) + " = " + design.dielectric.name + "\n";
            }
            continue;
        }
        if (std::string_view(dk.key) == "dielectric_resistivity" &&
            !design.dielectric.volume_resistivity) {
            continue;
        }
        out += std::string(dk.key) + " = " + format_double(value_of(dk.key));
        const char* unit = si_unit_token(dk.quantity);
        if (unit[0] != '\0') out += std::string(" ") + unit;
        out += '\n';
    }
    return out;
}

std::string write_table(const ResultTable& table, TableFormat format) {
    for (const std::string& col : table.columns) {
        if (col == "feasible") {
            throw std::logic_error("'feasible' is a reserved column name");
        }
    }
    return format == TableFormat::Csv ? write_table_csv(table) : write_table_json(table);
}

ResultTable parse_table(std::string_view text, TableFormat format) {
    return format == TableFormat::Csv ? parse_table_csv(text) : parse_table_json(text);
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

std::string now_iso8601_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw std::runtime_error("failed writing file '" + path + "'");
}

}  // namespace jrcc
