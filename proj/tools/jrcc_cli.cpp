#include <cmath>
#include <cstddef>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "jrcc/calibration.hpp"
#include "jrcc/errors.hpp"
#include "jrcc/explorer.hpp"
#include "jrcc/io.hpp"
#include "jrcc/model.hpp"
#include "jrcc/table.hpp"
#include "jrcc/types.hpp"
#include "jrcc/units.hpp"

namespace {

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string unit_help() {
    return "Unit tokens: length " + jrcc::unit_token_list(jrcc::Quantity::Length) +
           "; angle " + jrcc::unit_token_list(jrcc::Quantity::Angle) + "; force " +
           jrcc::unit_token_list(jrcc::Quantity::Force) + "; voltage " +
           jrcc::unit_token_list(jrcc::Quantity::Voltage) + "; stress " +
           jrcc::unit_token_list(jrcc::Quantity::Stress) + "; resistivity " +
           jrcc::unit_token_list(jrcc::Quantity::Resistivity) +
           ". Dimensionless keys (cof, permittivities) take no unit.";
}

const jrcc::DesignKey* schema_key(const std::string& key) {
    for (const jrcc::DesignKey& dk : jrcc::design_schema()) {
        if (key == dk.key) return &dk;
    }
    return nullptr;
}

/// Groups gobbled tokens: a token containing '=' opens a group, bare tokens
/// (unit suffixes) attach to the open group. Supports both
/// `--set voltage=450 V` and the quoted `--set "voltage=450 V"`.
struct TokenGroup {
    std::string head;
    std::vector<std::string> tail;
};

std::vector<TokenGroup> group_tokens(const std::vector<std::string>& tokens, const char* flag) {
    std::vector<TokenGroup> groups;
    for (const std::string& token : tokens) {
        if (token.find('=') != std::string::npos) {
            groups.push_back({token, {}});
        } else if (!groups.empty()) {
            groups.back().tail.push_back(token);
        } else {
            throw jrcc::ParseError("stray token '" + token + "' after " + flag +
                                   "; expected name=value first");
        }
    }
    return groups;
}

void apply_overrides(jrcc::ClutchDesign& design, jrcc::OperatingPoint& op,
                     const std::vector<std::string>& tokens) {
    for (const TokenGroup& group : group_tokens(tokens, "--set")) {
        const std::size_t eq = group.head.find('=');
        const std::string key = trim_copy(group.head.substr(0, eq));
        std::vector<std::string> parts = split_ws(group.head.substr(eq + 1));
        parts.insert(parts.end(), group.tail.begin(), group.tail.end());

        const jrcc::DesignKey* dk = schema_key(key);
        if (dk == nullptr) throw jrcc::ValidationError(key, "unknown design key");
        if (dk->text) throw jrcc::ValidationError(key, "takes text, not a numeric override");
        if (parts.empty()) throw jrcc::ParseError("missing value in --set " + group.head);
        if (parts.size() > 2) {
            throw jrcc::ParseError("too many tokens in --set for '" + key + "'");
        }
        double value = 0.0;
        if (!jrcc::parse_double(parts[0], value)) {
            throw jrcc::ParseError("value for '" + key + "' is not a number: '" + parts[0] + "'");
        }
        const std::string unit = parts.size() == 2 ? parts[1] : "";
        const std::optional<double> factor = jrcc::unit_factor(dk->quantity, unit);
        if (!factor) {
            if (dk->quantity == jrcc::Quantity::Dimensionless) {
                throw jrcc::ParseError("'" + key + "' takes no unit");
            }
            if (unit.empty()) {
                throw jrcc::ParseError("'" + key + "' needs a unit; accepted: " +
                                       jrcc::unit_token_list(dk->quantity));
            }
            throw jrcc::ParseError("unknown unit '" + unit + "' for '" + key + "'; accepted: " +
                                   jrcc::unit_token_list(dk->quantity));
        }
        jrcc::set_design_value(design, op, key, value * *factor);
    }
}

/// Inclusive START:STOP:STEP range, or a single value.
std::vector<double> parse_range(const std::string& text) {
    double single = 0.0;
    if (jrcc::parse_double(text, single)) return {single};
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    double start = 0.0, stop = 0.0, step = 0.0;
    if (c1 == std::string::npos || c2 == std::string::npos ||
        text.find(':', c2 + 1) != std::string::npos ||
        !jrcc::parse_double(text.substr(0, c1), start) ||
        !jrcc::parse_double(text.substr(c1 + 1, c2 - c1 - 1), stop) ||
        !jrcc::parse_double(text.substr(c2 + 1), step)) {
        throw jrcc::ParseError("bad range '" + text + "'; expected START:STOP:STEP or a value");
    }
    if (!(step > 0.0)) throw jrcc::ParseError("range step must be positive in '" + text + "'");
    if (stop < start) throw jrcc::ParseError("range stop is below start in '" + text + "'");
    const std::size_t count = static_cast<std::size_t>((stop - start) / step + 1e-9) + 1;
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = start + static_cast<double>(i) * step;
    return values;
}

struct AxisName {
    const char* name;
    jrcc::SweepParam param;
    jrcc::Quantity quantity;
    double default_factor;
};

constexpr AxisName kAxisNames[] = {
    {"voltage", jrcc::SweepParam::Voltage, jrcc::Quantity::Voltage, 1.0},
    {"wrap_angle", jrcc::SweepParam::WrapAngle, jrcc::Quantity::Angle, 1.0},
    {"wraps", jrcc::SweepParam::WrapAngle, jrcc::Quantity::Angle, jrcc::kRadPerWrap},
    {"gap", jrcc::SweepParam::Gap, jrcc::Quantity::Length, 1.0},
    {"band_thickness", jrcc::SweepParam::BandThickness, jrcc::Quantity::Length, 1.0},
    {"band_width", jrcc::SweepParam::BandWidth, jrcc::Quantity::Length, 1.0},
    {"shaft_radius", jrcc::SweepParam::ShaftRadius, jrcc::Quantity::Length, 1.0},
    {"pretension", jrcc::SweepParam::Pretension, jrcc::Quantity::Force, 1.0},
};

std::vector<jrcc::SweepAxis> parse_axes(const std::vector<std::string>& tokens) {
    std::vector<jrcc::SweepAxis> axes;
    for (const TokenGroup& group : group_tokens(tokens, "--axis")) {
        const std::size_t eq = group.head.find('=');
        const std::string name = trim_copy(group.head.substr(0, eq));
        std::vector<std::string> parts = split_ws(group.head.substr(eq + 1));
        parts.insert(parts.end(), group.tail.begin(), group.tail.end());

        const AxisName* axis = nullptr;
        for (const AxisName& a : kAxisNames) {
            if (name == a.name) axis = &a;
        }
        if (axis == nullptr) {
            std::string known;
            for (const AxisName& a : kAxisNames) {
                if (!known.empty()) known += ", ";
                known += a.name;
            }
            throw jrcc::ParseError("unknown axis '" + name + "'; accepted: " + known);
        }
        if (parts.empty()) throw jrcc::ParseError("missing range in --axis " + group.head);
        if (parts.size() > 2) throw jrcc::ParseError("too many tokens in --axis for '" + name + "'");
        double factor = axis->default_factor;
        if (parts.size() == 2) {
            const std::optional<double> f = jrcc::unit_factor(axis->quantity, parts[1]);
            if (!f) {
                throw jrcc::ParseError("unknown unit '" + parts[1] + "' for axis '" + name +
                                       "'; accepted: " + jrcc::unit_token_list(axis->quantity));
            }
            factor = *f;
        }
        jrcc::SweepAxis out;
        out.param = axis->param;
        for (double v : parse_range(parts[0])) out.values.push_back(v * factor);
        axes.push_back(std::move(out));
    }
    return axes;
}

jrcc::Metric parse_metric(const std::string& name) {
    if (name == "t_load") return jrcc::Metric::TLoad;
    if (name == "torque" || name == "holding_torque") return jrcc::Metric::HoldingTorque;
    if (name == "band_stress_eq") return jrcc::Metric::BandStressEq;
    if (name == "band_stress" || name == "band_stress_exact") return jrcc::Metric::BandStressExact;
    if (name == "specific_shear_stress" || name == "sss") return jrcc::Metric::SpecificShearStress;
    if (name == "specific_power" || name == "power") return jrcc::Metric::SpecificPower;
    if (name == "coulomb_pressure") return jrcc::Metric::CoulombPressure;
    if (name == "jr_pressure") return jrcc::Metric::JrPressure;
    if (name == "beta" || name == "beta_total") return jrcc::Metric::BetaTotal;
    if (name == "advantage" || name == "advantage_exact") return jrcc::Metric::AdvantageExact;
    throw jrcc::ParseError(
        "unknown metric '" + name +
        "'; accepted: t_load, torque, band_stress_eq, band_stress, specific_shear_stress, "
        "specific_power, coulomb_pressure, jr_pressure, beta, advantage");
}

/// Range plus optional unit token, e.g. {"0:500:100", "V"}.
std::vector<double> parse_grid(const std::vector<std::string>& tokens, jrcc::Quantity quantity,
                               double default_factor, const char* flag) {
    if (tokens.empty() || tokens.size() > 2) {
        throw jrcc::ParseError(std::string(flag) + " expects RANGE [unit]");
    }
    double factor = default_factor;
    if (tokens.size() == 2) {
        const std::optional<double> f = jrcc::unit_factor(quantity, tokens[1]);
        if (!f) {
            throw jrcc::ParseError("unknown unit '" + tokens[1] + "' for " + flag +
                                   "; accepted: " + jrcc::unit_token_list(quantity));
        }
        factor = *f;
    }
    std::vector<double> values = parse_range(tokens[0]);
    for (double& v : values) v *= factor;
    return values;
}

void emit_table(jrcc::ResultTable table, const std::string& hashed_input,
                const std::string& output, const std::string& format) {
    table.provenance.tool_version = jrcc::kToolVersion;
    table.provenance.input_sha256 = jrcc::sha256_hex(hashed_input);
    table.provenance.generated_at = jrcc::now_iso8601_utc();
    const jrcc::TableFormat f =
        format == "json" ? jrcc::TableFormat::Json : jrcc::TableFormat::Csv;
    const std::string text = jrcc::write_table(table, f);
    if (output.empty() || output == "-") {
        std::cout << text;
    } else {
        jrcc::write_file(output, text);
    }
}

jrcc::Cell opt_cell(const std::optional<double>& v, double scale) {
    return v ? jrcc::Cell::num(*v * scale) : jrcc::Cell::na();
}

struct PredictArgs {
    std::string design_path;
    std::vector<std::string> set_tokens;
    std::string output;
    std::string format = "csv";
};

int run_predict(const PredictArgs& args) {
    const std::string text = jrcc::read_file(args.design_path);
    auto [design, op] = jrcc::parse_design(text);
    apply_overrides(design, op, args.set_tokens);
    jrcc::validate(design);
    jrcc::validate(op);

    const jrcc::Prediction p = jrcc::predict(op, design);
    jrcc::ResultTable table;
    table.columns = {"t_load_N",
                     "holding_torque_Nm",
                     "band_stress_Pa",
                     "specific_shear_stress_N_per_cm2",
                     "specific_power_mW_per_cm2",
                     "coulomb_pressure_Pa",
                     "jr_pressure_Pa",
                     "beta_total_Pa",
                     "alpha_N_per_rad",
                     "advantage_exact"};
    table.add_row({jrcc::Cell::num(p.t_load), jrcc::Cell::num(p.holding_torque),
                   jrcc::Cell::num(p.band_stress), opt_cell(p.specific_shear_stress, 1e-4),
                   opt_cell(p.specific_power, 0.1), jrcc::Cell::num(p.pressures.coulomb_pressure),
                   jrcc::Cell::num(p.pressures.jr_pressure),
                   jrcc::Cell::num(p.pressures.beta_total),
                   jrcc::Cell::num(p.pressures.alpha_per_radian),
                   opt_cell(p.advantage_exact, 1.0)});
    emit_table(std::move(table), text, args.output, args.format);

    const jrcc::ConstraintReport report = jrcc::check_constraints(design, op, 1.0);
    if (!report.feasible) {
        std::cerr << "note: band stress " << jrcc::format_double(report.exact_stress)
                  << " Pa exceeds the yield stress "
                  << jrcc::format_double(design.band.yield_stress) << " Pa (margin "
                  << jrcc::format_double(report.stress_margin) << ")\n";
    }
    for (const std::string& warning : report.warnings) {
        std::cerr << "note: " << warning << "\n";
    }
    return 0;
}

struct FitArgs {
    std::string kind;
    std::string measurements_path;
    std::string design_path;
    std::vector<std::string> set_tokens;
    std::string bounds = "0.1:100";  // um
    std::string emit_curve;
    std::string output;
    std::string format = "csv";
};

int run_fit(const FitArgs& args) {
    const std::string measurements_text = jrcc::read_file(args.measurements_path);
    const std::string design_text = jrcc::read_file(args.design_path);
    const std::vector<jrcc::MeasurementRecord> records =
        jrcc::parse_measurements(measurements_text);
    auto [design, op] = jrcc::parse_design(design_text);
    apply_overrides(design, op, args.set_tokens);
    jrcc::validate(design);

    jrcc::FitResult result;
    std::string unit = "";
    if (args.kind == "cof") {
        result = jrcc::fit_cof(records, design.geometry.shaft_radius);
    } else if (args.kind == "gap") {
        const std::size_t colon = args.bounds.find(':');
        double lo = 0.0, hi = 0.0;
        if (colon == std::string::npos ||
            !jrcc::parse_double(args.bounds.substr(0, colon), lo) ||
            !jrcc::parse_double(args.bounds.substr(colon + 1), hi)) {
            throw jrcc::ParseError("bad --bounds '" + args.bounds + "'; expected LO:HI in um");
        }
        result = jrcc::fit_gap(records, design, {lo * 1e-6, hi * 1e-6});
        unit = "m";
    } else {
        result = jrcc::fit_resistivity(records, design.dielectric);
        unit = "ohm.m";
    }

    std::ostream& out = std::cout;
    out << "parameter = " << result.parameter_name << "\n";
    out << "value = " << jrcc::format_double(result.value) << (unit.empty() ? "" : " " + unit)
        << "\n";
    if (args.kind == "gap") {
        out << "value_um = " << jrcc::format_double(result.value * 1e6) << "\n";
    }
    out << "residual_sse = " << jrcc::format_double(result.residual_sse) << "\n";
    out << "pearson_r = " << jrcc::format_double(result.pearson_r) << "\n";
    out << "n_records = " << result.n_records << "\n";
    out << "bounds = " << jrcc::format_double(result.bounds_used.first) << " .. "
        << jrcc::format_double(result.bounds_used.second) << (unit.empty() ? "" : " " + unit)
        << "\n";
    out << "at_bound = " << (result.at_bound ? "yes" : "no") << "\n";

    if (!args.emit_curve.empty()) {
        jrcc::ResultTable curve;
        if (args.kind == "resistivity") {
            jrcc::DielectricSpec fitted = design.dielectric;
            fitted.volume_resistivity = result.value;
            curve.columns = {"voltage_V", "measured_mW_per_cm2", "predicted_mW_per_cm2"};
            for (const jrcc::MeasurementRecord& rec : records) {
                if (!rec.power_areal) continue;
                const double predicted =
                    jrcc::specific_power(jrcc::OperatingPoint{rec.voltage}, fitted);
                curve.add_row({jrcc::Cell::num(rec.voltage),
                               jrcc::Cell::num(*rec.power_areal * 0.1),
                               jrcc::Cell::num(predicted * 0.1)});
            }
        } else {
            jrcc::ClutchDesign fitted = design;
            if (args.kind == "cof") fitted.interface.cof = result.value;
            else fitted.interface.gap = result.value;
            curve.columns = {"wrap_angle_rad", "voltage_V", "pretension_N",
                             "measured_torque_Nm", "predicted_torque_Nm"};
            for (const jrcc::MeasurementRecord& rec : records) {
                jrcc::ClutchDesign d = fitted;
                d.geometry.wrap_angle = rec.wrap_angle;
                d.geometry.pretension = rec.pretension;
                const double predicted =
                    jrcc::governing_tension(jrcc::OperatingPoint{rec.voltage}, d) *
                    d.geometry.shaft_radius;
                curve.add_row({jrcc::Cell::num(rec.wrap_angle), jrcc::Cell::num(rec.voltage),
                               jrcc::Cell::num(rec.pretension), jrcc::Cell::num(rec.slip_torque),
                               jrcc::Cell::num(predicted)});
            }
        }
        emit_table(std::move(curve), measurements_text + design_text, args.emit_curve,
                   args.format);
    }

    if (result.at_bound) {
        std::cerr << "fit failed: minimizer pinned at a bound (suspect data or model "
                     "mismatch); estimate written above is not trustworthy\n";
        return 3;
    }
    return 0;
}

struct SweepArgs {
    std::string design_path;
    std::vector<std::string> set_tokens;
    std::vector<std::string> axis_tokens;
    std::vector<std::string> metric_names;
    unsigned threads = 1;
    std::string output;
    std::string format = "csv";
};

int run_sweep_cmd(const SweepArgs& args) {
    const std::string text = jrcc::read_file(args.design_path);
    auto [design, op] = jrcc::parse_design(text);
    apply_overrides(design, op, args.set_tokens);

    jrcc::SweepSpec spec;
    spec.axes = parse_axes(args.axis_tokens);
    if (args.metric_names.empty()) {
        spec.metrics = {jrcc::Metric::HoldingTorque};
    } else {
        for (const std::string& name : args.metric_names) {
            spec.metrics.push_back(parse_metric(name));
        }
    }
    jrcc::ResultTable table = jrcc::run_sweep(design, op, spec, args.threads);
    emit_table(std::move(table), text, args.output, args.format);
    return 0;
}

struct CompareArgs {
    std::string design_path;
    std::vector<std::string> set_tokens;
    std::vector<std::string> voltage_tokens;
    std::vector<std::string> angle_tokens;
    std::vector<std::string> wrap_tokens;
    std::string output;
    std::string format = "csv";
};

int run_compare(const CompareArgs& args) {
    const std::string text = jrcc::read_file(args.design_path);
    auto [design, op] = jrcc::parse_design(text);
    apply_overrides(design, op, args.set_tokens);

    const std::vector<double> voltages =
        parse_grid(args.voltage_tokens, jrcc::Quantity::Voltage, 1.0, "--voltages");
    std::vector<double> thetas;
    if (!args.angle_tokens.empty() && !args.wrap_tokens.empty()) {
        throw jrcc::ParseError("give either --angles or --wraps, not both");
    }
    if (!args.wrap_tokens.empty()) {
        thetas = parse_grid(args.wrap_tokens, jrcc::Quantity::Angle, jrcc::kRadPerWrap, "--wraps");
    } else if (!args.angle_tokens.empty()) {
        thetas = parse_grid(args.angle_tokens, jrcc::Quantity::Angle, 1.0, "--angles");
    } else {
        throw jrcc::ParseError("one of --angles or --wraps is required");
    }
    jrcc::ResultTable table = jrcc::compare_planar(design, voltages, thetas);
    emit_table(std::move(table), text, args.output, args.format);
    return 0;
}

struct CheckArgs {
    std::string design_path;
    std::vector<std::string> set_tokens;
    double safety_factor = 1.0;
};

int run_check(const CheckArgs& args) {
    const std::string text = jrcc::read_file(args.design_path);
    auto [design, op] = jrcc::parse_design(text);
    apply_overrides(design, op, args.set_tokens);

    const jrcc::ConstraintReport report =
        jrcc::check_constraints(design, op, args.safety_factor);
    std::cout << "feasible = " << (report.feasible ? "yes" : "no") << "\n";
    std::cout << "exact_stress_Pa = " << jrcc::format_double(report.exact_stress) << "\n";
    std::cout << "allowable_stress_Pa = "
              << jrcc::format_double(design.band.yield_stress / args.safety_factor) << "\n";
    std::cout << "safety_factor = " << jrcc::format_double(args.safety_factor) << "\n";
    std::cout << "stress_margin = " << jrcc::format_double(report.stress_margin) << "\n";
    std::cout << "ratio_term = " << jrcc::format_double(report.ratio_term) << "\n";
    for (const std::string& warning : report.warnings) {
        std::cout << "warning: " << warning << "\n";
    }
    return report.feasible ? 0 : 4;
}

struct SolveArgs {
    std::string design_path;
    std::vector<std::string> set_tokens;
    double target_torque = 0.0;
    bool has_target = false;
    double theta_max_wraps = 4.0;
    bool max_voltage = false;
    double safety_factor = 1.0;
    double ceiling = jrcc::kVoltageCeiling;
};

int run_solve(const SolveArgs& args) {
    const std::string text = jrcc::read_file(args.design_path);
    auto [design, op] = jrcc::parse_design(text);
    apply_overrides(design, op, args.set_tokens);

    if (args.has_target == args.max_voltage) {
        throw jrcc::ParseError("solve needs exactly one of --target-torque or --max-voltage");
    }
    if (args.has_target) {
        const jrcc::WrapSolution sol = jrcc::min_wrap_for_torque(
            design, op, args.target_torque, args.theta_max_wraps * jrcc::kRadPerWrap);
        const char* status = sol.status == jrcc::WrapStatus::Ok ? "ok"
                             : sol.status == jrcc::WrapStatus::InfeasibleAngle
                                 ? "infeasible_angle"
                                 : "infeasible_strength";
        std::cout << "status = " << status << "\n";
        std::cout << "wrap_angle_rad = " << jrcc::format_double(sol.theta) << "\n";
        std::cout << "wrap_angle_wraps = " << jrcc::format_double(sol.theta / jrcc::kRadPerWrap)
                  << "\n";
        jrcc::ClutchDesign d = design;
        d.geometry.wrap_angle = sol.theta;
        std::cout << "torque_at_angle_Nm = "
                  << jrcc::format_double(jrcc::governing_tension(op, d) *
                                         d.geometry.shaft_radius)
                  << "\n";
        if (sol.status == jrcc::WrapStatus::InfeasibleStrength) {
            std::cout << "band_strength_limit_Nm = "
                      << jrcc::format_double(jrcc::max_torque(design.band,
                                                              design.geometry.shaft_radius,
                                                              design.band.yield_stress))
                      << "\n";
        }
        return sol.status == jrcc::WrapStatus::Ok ? 0 : 4;
    }

    std::vector<std::string> warnings;
    const double v = jrcc::max_voltage_for_stress(design, args.safety_factor, args.ceiling,
                                                  &warnings);
    std::cout << "max_voltage_V = " << jrcc::format_double(v) << "\n";
    std::cout << "safety_factor = " << jrcc::format_double(args.safety_factor) << "\n";
    std::cout << "ceiling_V = " << jrcc::format_double(args.ceiling) << "\n";
    for (const std::string& warning : warnings) {
        std::cout << "warning: " << warning << "\n";
    }
    return (v == 0.0 && !warnings.empty()) ? 4 : 0;
}

struct EfficiencyArgs {
    std::string design_path;
    std::vector<std::string> set_tokens;
    std::vector<std::string> voltage_tokens;
    std::vector<std::string> wrap_specs;
    bool planar = false;
    double planar_gap_um = 0.0;
    bool has_planar_gap = false;
    std::string output;
    std::string format = "csv";
};

int run_efficiency(const EfficiencyArgs& args) {
    const std::string text = jrcc::read_file(args.design_path);
    auto [design, op] = jrcc::parse_design(text);
    apply_overrides(design, op, args.set_tokens);

    const std::vector<double> voltages =
        parse_grid(args.voltage_tokens, jrcc::Quantity::Voltage, 1.0, "--voltages");
    std::vector<jrcc::EfficiencyFamily> families;
    for (const std::string& spec : args.wrap_specs) {
        jrcc::EfficiencyFamily family;
        const std::size_t at = spec.find('@');
        const std::string wraps_text = spec.substr(0, at);
        if (!jrcc::parse_double(wraps_text, family.wraps)) {
            throw jrcc::ParseError("bad --wrap '" + spec + "'; expected WRAPS[@GAP_UM]");
        }
        if (at != std::string::npos) {
            double gap_um = 0.0;
            if (!jrcc::parse_double(spec.substr(at + 1), gap_um)) {
                throw jrcc::ParseError("bad gap in --wrap '" + spec + "'; expected WRAPS[@GAP_UM]");
            }
            family.gap_override = gap_um * 1e-6;
        }
        families.push_back(family);
    }
    std::optional<double> planar_gap;
    if (args.has_planar_gap) planar_gap = args.planar_gap_um * 1e-6;

    jrcc::ResultTable table =
        jrcc::efficiency_curve(design, voltages, families, args.planar, planar_gap);
    emit_table(std::move(table), text, args.output, args.format);
    return 0;
}

void add_output_options(CLI::App* cmd, std::string& output, std::string& format) {
    cmd->add_option("-o,--output", output, "Output path ('-' or empty for stdout)");
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void add_set_option(CLI::App* cmd, std::vector<std::string>& tokens) {
    cmd->add_option("--set", tokens,
                    "Override design values, KEY=VALUE UNIT (repeatable). " + unit_help())
        ->expected(-1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Johnsen-Rahbek electrostatic capstan clutch modeling toolkit"};
    app.set_version_flag("--version", jrcc::kToolVersion);
    app.require_subcommand(1);
    app.footer(unit_help());

    PredictArgs predict_args;
    CLI::App* predict = app.add_subcommand("predict", "Evaluate the model at one operating point");
    predict->add_option("design", predict_args.design_path, "Design config file")->required();
    add_set_option(predict, predict_args.set_tokens);
    add_output_options(predict, predict_args.output, predict_args.format);

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand("fit", "Calibrate a parameter from slip-test records");
    fit->add_option("kind", fit_args.kind, "Parameter to fit")
        ->required()
        ->check(CLI::IsMember({"cof", "gap", "resistivity"}));
    fit->add_option("measurements", fit_args.measurements_path, "Measurement CSV")->required();
    fit->add_option("design", fit_args.design_path, "Design config file")->required();
    fit->add_option("--bounds", fit_args.bounds, "Gap search bounds LO:HI in um")
        ->capture_default_str();
    fit->add_option("--emit-curve", fit_args.emit_curve,
                    "Write a predicted-vs-measured table to this path");
    add_set_option(fit, fit_args.set_tokens);
    add_output_options(fit, fit_args.output, fit_args.format);

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Tabulate metrics over parameter grids");
    sweep->add_option("design", sweep_args.design_path, "Design config file")->required();
    sweep->add_option("--axis", sweep_args.axis_tokens,
                      "Sweep axis NAME=START:STOP:STEP [unit] (repeatable; axes nest "
                      "left-to-right, last fastest). Names: voltage, wrap_angle, wraps, gap, "
                      "band_thickness, band_width, shaft_radius, pretension")
        ->expected(-1)
        ->required();
    sweep->add_option("--metric", sweep_args.metric_names,
                      "Output metric (repeatable): t_load, torque, band_stress_eq, band_stress, "
                      "specific_shear_stress, specific_power, coulomb_pressure, jr_pressure, "
                      "beta, advantage");
    sweep->add_option("--threads", sweep_args.threads, "Worker threads")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    add_set_option(sweep, sweep_args.set_tokens);
    add_output_options(sweep, sweep_args.output, sweep_args.format);

    CompareArgs compare_args;
    CLI::App* compare =
        app.add_subcommand("compare", "Capstan vs planar tension and advantage over a grid");
    compare->alias("advantage");
    compare->add_option("design", compare_args.design_path, "Design config file")->required();
    compare->add_option("--voltages", compare_args.voltage_tokens, "Voltage grid RANGE [unit]")
        ->expected(-1)
        ->required();
    compare->add_option("--angles", compare_args.angle_tokens, "Wrap angle grid RANGE [unit]")
        ->expected(-1);
    compare->add_option("--wraps", compare_args.wrap_tokens, "Wrap count grid RANGE")
        ->expected(-1);
    add_set_option(compare, compare_args.set_tokens);
    add_output_options(compare, compare_args.output, compare_args.format);

    CheckArgs check_args;
    CLI::App* check = app.add_subcommand("check", "Feasibility against the band strength limit");
    check->add_option("design", check_args.design_path, "Design config file")->required();
    check->add_option("--safety-factor", check_args.safety_factor, "Yield stress divisor (>= 1)")
        ->capture_default_str();
    add_set_option(check, check_args.set_tokens);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Invert the model for wrap angle or voltage");
    solve->add_option("design", solve_args.design_path, "Design config file")->required();
    CLI::Option* target = solve->add_option("--target-torque", solve_args.target_torque,
                                            "Find the smallest wrap angle for this torque (N*m)");
    solve->add_option("--theta-max", solve_args.theta_max_wraps,
                      "Largest wrap angle to consider, in wraps")
        ->capture_default_str();
    solve->add_flag("--max-voltage", solve_args.max_voltage,
                    "Find the largest voltage within the stress limit");
    solve->add_option("--safety-factor", solve_args.safety_factor, "Yield stress divisor (>= 1)")
        ->capture_default_str();
    solve->add_option("--ceiling", solve_args.ceiling, "Voltage ceiling in V")
        ->capture_default_str();
    add_set_option(solve, solve_args.set_tokens);

    EfficiencyArgs efficiency_args;
    CLI::App* efficiency = app.add_subcommand(
        "efficiency", "Specific power vs specific shear stress per wrap family");
    efficiency->add_option("design", efficiency_args.design_path, "Design config file")
        ->required();
    efficiency->add_option("--voltages", efficiency_args.voltage_tokens,
                           "Voltage grid RANGE [unit]")
        ->expected(-1)
        ->required();
    efficiency->add_option("--wrap", efficiency_args.wrap_specs,
                           "Wrap family WRAPS[@GAP_UM] (repeatable)");
    efficiency->add_flag("--planar", efficiency_args.planar, "Include the planar reference");
    CLI::Option* planar_gap_opt =
        efficiency->add_option("--planar-gap", efficiency_args.planar_gap_um,
                               "Gap for the planar reference, in um");
    add_set_option(efficiency, efficiency_args.set_tokens);
    add_output_options(efficiency, efficiency_args.output, efficiency_args.format);

    try {
        app.parse(argc, argv);
        solve_args.has_target = target->count() > 0;
        efficiency_args.has_planar_gap = planar_gap_opt->count() > 0;

        if (app.got_subcommand(predict)) return run_predict(predict_args);
        if (app.got_subcommand(fit)) return run_fit(fit_args);
        if (app.got_subcommand(sweep)) return run_sweep_cmd(sweep_args);
        if (app.got_subcommand(compare)) return run_compare(compare_args);
        if (app.got_subcommand(check)) return run_check(check_args);
        if (app.got_subcommand(solve)) return run_solve(solve_args);
        if (app.got_subcommand(efficiency)) return run_efficiency(efficiency_args);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const jrcc::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jrcc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jrcc::FitError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
