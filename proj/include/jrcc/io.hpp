#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jrcc/calibration.hpp"
#include "jrcc/table.hpp"
#include "jrcc/types.hpp"
#include "jrcc/units.hpp"

namespace jrcc {

inline constexpr const char* kToolVersion = "jrcc 0.1.0";

enum class TableFormat { Csv, Json };

/// One key of the design config schema, in file order.
struct DesignKey {
    const char* key;
    Quantity quantity;
    bool required;
    bool text;  // free-text value, no number or unit
};

const std::vector<DesignKey>& design_schema();

/// Assigns an SI value to the named design or operating-point field.
/// Unknown keys raise ValidationError; text keys are not settable this way.
void set_design_value(ClutchDesign& design, OperatingPoint& op, std::string_view key,
                      double value_si);

/// Measurement CSV with the exact header
/// wrap_angle_rad,voltage_V,pretension_N,slip_torque_Nm[,power_mW_per_cm2][,label]
/// `#` comment lines are skipped; any malformed row rejects the whole file
/// with its 1-based line number. Power converts mW/cm^2 -> W/m^2 on entry.
std::vector<MeasurementRecord> parse_measurements(std::string_view text);

/// `key = value unit` config text, `#` comments, mandatory units on every
/// physical quantity, unknown and duplicate keys rejected. Returns the
/// validated design in SI.
std::pair<ClutchDesign, OperatingPoint> parse_design(std::string_view text);

/// Inverse of parse_design; emits SI units so the round trip is bit-exact.
std::string write_design(const ClutchDesign& design, const OperatingPoint& op);

/// CSV: provenance as `# key=value` comments, RFC-4180 quoting, LF line
/// endings, shortest round-trip numbers, N/A and INFEASIBLE marker tokens.
/// JSON: object with `metadata`, `columns`, and `rows` (one object per row,
/// null for marker cells, per-row `feasible` flag distinguishing them).
std::string write_table(const ResultTable& table, TableFormat format);

/// Inverse of write_table: parse_table(write_table(t), f) == t.
ResultTable parse_table(std::string_view text, TableFormat format);

std::string sha256_hex(std::string_view data);

std::string now_iso8601_utc();

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace jrcc
