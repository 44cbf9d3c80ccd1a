#include "jrcc/explorer.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <utility>

#include "jrcc/errors.hpp"
#include "jrcc/model.hpp"
#include "jrcc/units.hpp"

namespace jrcc {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ValidationError(field, what);
}

constexpr std::size_t kMaxSweepRows = 1'000'000;
constexpr double kThetaTol = 1e-6;   // rad
constexpr double kRatioWarn = 0.05;  // free-rotation quality threshold

void check_grid(const std::vector<double>& values, const char* field) {
    require(!values.empty(), field, "must not be empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        require(std::isfinite(values[i]) && values[i] >= 0.0,
                std::string(field) + "[" + std::to_string(i) + "]",
                "must be non-negative and finite");
    }
}

Cell optional_metric(const std::optional<double>& v, double scale) {
    return v ? Cell::num(*v * scale) : Cell::na();
}

Cell metric_cell(Metric metric, const Prediction& p, const BandStressResult& bs) {
    switch (metric) {
        case Metric::TLoad: return Cell::num(p.t_load);
        case Metric::HoldingTorque: return Cell::num(p.holding_torque);
        case Metric::BandStressEq: return Cell::num(bs.eq_stress);
        case Metric::BandStressExact: return Cell::num(bs.exact_stress);
        case Metric::SpecificShearStress:
            return optional_metric(p.specific_shear_stress, 1e-4);  // Pa -> N/cm^2
        case Metric::SpecificPower:
            return optional_metric(p.specific_power, 0.1);  // W/m^2 -> mW/cm^2
        case Metric::CoulombPressure: return Cell::num(p.pressures.coulomb_pressure);
        case Metric::JrPressure: return Cell::num(p.pressures.jr_pressure);
        case Metric::BetaTotal: return Cell::num(p.pressures.beta_total);
        case Metric::AdvantageExact: return optional_metric(p.advantage_exact, 1.0);
    }
    throw std::logic_error("unhandled metric");
}

}  // namespace

const char* metric_column_name(Metric metric) {
    switch (metric) {
        case Metric::TLoad: return "t_load_N";
        case Metric::HoldingTorque: return "holding_torque_Nm";
        case Metric::BandStressEq: return "band_stress_eq_Pa";
        case Metric::BandStressExact: return "band_stress_exact_Pa";
        case Metric::SpecificShearStress: return "specific_shear_stress_N_per_cm2";
        case Metric::SpecificPower: return "specific_power_mW_per_cm2";
        case Metric::CoulombPressure: return "coulomb_pressure_Pa";
        case Metric::JrPressure: return "jr_pressure_Pa";
        case Metric::BetaTotal: return "beta_total_Pa";
        case Metric::AdvantageExact: return "advantage_exact";
    }
    throw std::logic_error("unhandled metric");
}

const char* param_column_name(SweepParam param) {
    switch (param) {
        case SweepParam::Voltage: return "voltage_V";
        case SweepParam::WrapAngle: return "wrap_angle_rad";
        case SweepParam::Gap: return "gap_m";
        case SweepParam::BandThickness: return "band_thickness_m";
        case SweepParam::BandWidth: return "band_width_m";
        case SweepParam::ShaftRadius: return "shaft_radius_m";
        case SweepParam::Pretension: return "pretension_N";
    }
    throw std::logic_error("unhandled sweep parameter");
}

void apply_param(ClutchDesign& design, OperatingPoint& op, SweepParam param, double value) {
    switch (param) {
        case SweepParam::Voltage: op.voltage = value; return;
        case SweepParam::WrapAngle: design.geometry.wrap_angle = value; return;
        case SweepParam::Gap: design.interface.gap = value; return;
        case SweepParam::BandThickness: design.band.thickness = value; return;
        case SweepParam::BandWidth: design.band.width = value; return;
        case SweepParam::ShaftRadius: design.geometry.shaft_radius = value; return;
        case SweepParam::Pretension: design.geometry.pretension = value; return;
    }
    throw std::logic_error("unhandled sweep parameter");
}

void validate(const SweepSpec& spec) {
    require(!spec.axes.empty(), "axes", "need at least one sweep axis");
    require(!spec.metrics.empty(), "metrics", "need at least one output metric");
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
        const std::string field = "axes[" + std::to_string(i) + "]";
        require(!spec.axes[i].values.empty(), field + ".values", "must not be empty");
        for (std::size_t j = 0; j < spec.axes[i].values.size(); ++j) {
            require(std::isfinite(spec.axes[i].values[j]),
                    field + ".values[" + std::to_string(j) + "]", "must be finite");
        }
        for (std::size_t j = 0; j < i; ++j) {
            require(spec.axes[j].param != spec.axes[i].param, field + ".param",
                    "duplicate sweep parameter");
        }
    }
    for (std::size_t i = 0; i < spec.metrics.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            require(spec.metrics[j] != spec.metrics[i],
                    "metrics[" + std::to_string(i) + "]", "duplicate metric");
        }
    }
}

ResultTable run_sweep(const ClutchDesign& base, const OperatingPoint& op,
                      const SweepSpec& spec, unsigned threads) {
    validate(spec);

    std::size_t total = 1;
    for (const SweepAxis& axis : spec.axes) {
        require(total <= kMaxSweepRows / axis.values.size(), "axes",
                "sweep exceeds the row limit of " + std::to_string(kMaxSweepRows));
        total *= axis.values.size();
    }

    ResultTable table;
    for (const SweepAxis& axis : spec.axes) table.columns.emplace_back(param_column_name(axis.param));
    for (Metric metric : spec.metrics) table.columns.emplace_back(metric_column_name(metric));
    table.rows.resize(total);

    // Last axis varies fastest: lexicographic order of the axes as given.
    auto compute_row = [&](std::size_t index) {
        std::vector<double> values(spec.axes.size());
        std::size_t rem = index;
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            const std::vector<double>& axis = spec.axes[a].values;
            values[a] = axis[rem % axis.size()];
            rem /= axis.size();
        }
        std::vector<Cell> cells;
        cells.reserve(spec.axes.size() + spec.metrics.size());
        for (double v : values) cells.push_back(Cell::num(v));

        ClutchDesign design = base;
        OperatingPoint point = op;
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            apply_param(design, point, spec.axes[a].param, values[a]);
        }
        try {
            const Prediction p = predict(point, design);
            const BandStressResult bs = band_stress(point, design);
            for (Metric metric : spec.metrics) cells.push_back(metric_cell(metric, p, bs));
        } catch (const ValidationError&) {
            // The combination violates an invariant: keep the row, mark it.
            for (std::size_t m = 0; m < spec.metrics.size(); ++m) {
                cells.push_back(Cell::infeasible());
            }
        }
        return cells;
    };

    const unsigned workers = std::min<unsigned>(std::max(threads, 1u),
                                                std::min<std::size_t>(total, 256));
    if (workers <= 1) {
        for (std::size_t i = 0; i < total; ++i) table.rows[i] = compute_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::atomic<bool> failed{false};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
                        table.rows[i] = compute_row(i);
                    }
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (failed) std::rethrow_exception(error);
    }
    return table;
}

ConstraintReport check_constraints(const ClutchDesign& design, const OperatingPoint& op,
                                   double safety_factor) {
    validate(design);
    validate(op);
    require(std::isfinite(safety_factor) && safety_factor >= 1.0, "safety_factor",
            "must be >= 1 and finite");

    ConstraintReport report;
    report.exact_stress = band_stress(op, design).exact_stress;
    const double allowable = design.band.yield_stress / safety_factor;
    report.stress_margin = report.exact_stress > 0.0
                               ? std::min(allowable / report.exact_stress, kMarginCap)
                               : kMarginCap;
    report.feasible = report.stress_margin >= 1.0;

    const double beta = ea_pressure(op, design).beta_total;
    const double lr = design.band.width * design.geometry.shaft_radius;
    const double t_hold = design.geometry.pretension;
    report.ratio_term = beta > 0.0 ? t_hold / (lr * beta) : (t_hold > 0.0 ? kMarginCap : 0.0);
    if (report.ratio_term > kRatioWarn) {
        report.warnings.push_back(
            "pretension-to-adhesion ratio " + format_double(report.ratio_term) +
            " exceeds " + format_double(kRatioWarn) + "; the disengaged clutch will drag");
    }
    return report;
}

WrapSolution min_wrap_for_torque(const ClutchDesign& design, const OperatingPoint& op,
                                 double target_torque, double theta_max) {
    validate(design);
    validate(op);
    require(std::isfinite(target_torque) && target_torque > 0.0, "target_torque",
            "must be positive and finite");
    require(std::isfinite(theta_max) && theta_max > 0.0, "theta_max",
            "must be positive and finite");

    const double r = design.geometry.shaft_radius;
    auto torque_at = [&](double theta) {
        ClutchDesign d = design;
        d.geometry.wrap_angle = theta;
        return governing_tension(op, d) * r;
    };

    bool achievable = false;
    double theta = theta_max;
    if (torque_at(0.0) >= target_torque) {
        achievable = true;
        theta = 0.0;
    } else if (torque_at(theta_max) >= target_torque) {
        // Tension grows strictly with theta: bisect, keep the feasible end.
        double lo = 0.0, hi = theta_max;
        for (int iter = 0; iter < 200 && hi - lo > kThetaTol; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (torque_at(mid) >= target_torque) hi = mid; else lo = mid;
        }
        achievable = true;
        theta = hi;
    }

    if (target_torque > max_torque(design.band, r, design.band.yield_stress)) {
        return {WrapStatus::InfeasibleStrength, theta};
    }
    if (!achievable) return {WrapStatus::InfeasibleAngle, theta_max};
    return {WrapStatus::Ok, theta};
}

double max_voltage_for_stress(const ClutchDesign& design, double safety_factor,
                              double ceiling, std::vector<std::string>* warnings) {
    validate(design);
    require(std::isfinite(safety_factor) && safety_factor >= 1.0, "safety_factor",
            "must be >= 1 and finite");
    require(std::isfinite(ceiling) && ceiling > 0.0, "ceiling", "must be positive and finite");
    require(design.geometry.wrap_angle > 0.0, "geometry.wrap_angle",
            "must be positive to invert for voltage");

    const double allowable = design.band.yield_stress / safety_factor;
    const double section = design.band.width * design.band.thickness;
    const double x = design.interface.cof * design.geometry.wrap_angle;
    const double growth = std::exp(x);
    const double hold_stress = design.geometry.pretension * growth / section;
    if (hold_stress > allowable) {
        if (warnings != nullptr) {
            warnings->push_back("pretension alone stresses the band to " +
                                format_double(hold_stress) + " Pa, above the allowed " +
                                format_double(allowable) + " Pa; no voltage is safe");
        }
        return 0.0;
    }

    // Both adhesive pressure terms scale with V^2, so the stress limit
    // inverts in closed form from beta at 1 V.
    const double beta_unit = ea_pressure(OperatingPoint{1.0}, design).beta_total;
    const double numerator = allowable * section - design.geometry.pretension * growth;
    const double denominator =
        beta_unit * design.band.width * design.geometry.shaft_radius * std::expm1(x);
    const double closed = std::min(std::sqrt(numerator / denominator), ceiling);

    // Bisect the same limit and insist the two answers agree.
    auto stress_at = [&](double voltage) {
        return band_stress(OperatingPoint{voltage}, design).exact_stress;
    };
    double bisected = ceiling;
    if (stress_at(ceiling) > allowable) {
        double lo = 0.0, hi = ceiling;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (stress_at(mid) <= allowable) lo = mid; else hi = mid;
        }
        bisected = lo;
    }
    if (std::fabs(bisected - closed) > 1e-9 * std::max(1.0, closed)) {
        throw std::logic_error("voltage inversion paths disagree: closed form " +
                               format_double(closed) + " V vs bisection " +
                               format_double(bisected) + " V");
    }
    return closed;
}

ResultTable compare_planar(const ClutchDesign& design, const std::vector<double>& voltages,
                           const std::vector<double>& thetas) {
    validate(design);
    check_grid(voltages, "voltages");
    check_grid(thetas, "thetas");

    ResultTable table;
    table.columns = {"voltage_V",         "wrap_angle_rad",  "capstan_tension_N",
                     "planar_tension_N",  "advantage_exact", "advantage_approx"};
    for (double voltage : voltages) {
        const OperatingPoint op{voltage};
        for (double theta : thetas) {
            ClutchDesign d = design;
            d.geometry.wrap_angle = theta;
            std::vector<Cell> row{Cell::num(voltage), Cell::num(theta),
                                  Cell::num(governing_tension(op, d)),
                                  Cell::num(planar_tension(op, d))};
            if (theta == 0.0) {
                // Both advantage forms tend to 1 as the angle vanishes.
                row.push_back(Cell::num(1.0));
                row.push_back(Cell::num(1.0));
            } else {
                const double beta = ea_pressure(op, d).beta_total;
                if (beta > 0.0) {
                    const AdvantageResult adv = advantage(d.geometry.pretension, d, beta);
                    row.push_back(Cell::num(adv.exact));
                    row.push_back(Cell::num(adv.approx));
                } else {
                    // Without adhesion there is no planar tension to compare.
                    const double x = d.interface.cof * theta;
                    row.push_back(Cell::na());
                    row.push_back(Cell::num(std::expm1(x) / x));
                }
            }
            table.add_row(std::move(row));
        }
    }
    return table;
}

ResultTable efficiency_curve(const ClutchDesign& design, const std::vector<double>& voltages,
                             const std::vector<EfficiencyFamily>& families,
                             bool include_planar, std::optional<double> planar_gap) {
    validate(design);
    if (!design.dielectric.volume_resistivity) {
        throw ValidationError("dielectric.volume_resistivity",
                              "required for specific power; supply it in the design or "
                              "calibrate it with fit_resistivity");
    }
    check_grid(voltages, "voltages");
    require(!families.empty() || include_planar, "families",
            "need at least one wrap family or the planar reference");
    for (std::size_t i = 0; i < families.size(); ++i) {
        const std::string field = "families[" + std::to_string(i) + "]";
        require(std::isfinite(families[i].wraps) && families[i].wraps > 0.0,
                field + ".wraps", "must be positive and finite");
        if (families[i].gap_override) {
            require(std::isfinite(*families[i].gap_override) && *families[i].gap_override > 0.0,
                    field + ".gap", "must be positive and finite");
        }
    }
    if (planar_gap) {
        require(std::isfinite(*planar_gap) && *planar_gap > 0.0, "planar_gap",
                "must be positive and finite");
    }

    ResultTable table;
    table.columns = {"family",   "wraps",
                     "gap_m",    "voltage_V",
                     "specific_power_mW_per_cm2", "specific_shear_stress_N_per_cm2"};
    for (const EfficiencyFamily& family : families) {
        ClutchDesign d = design;
        if (family.gap_override) d.interface.gap = *family.gap_override;
        d.geometry.wrap_angle = family.wraps * kRadPerWrap;
        const std::string label = format_double(family.wraps) + " wraps";
        for (double voltage : voltages) {
            const OperatingPoint op{voltage};
            const double power = specific_power(op, d.dielectric) * 0.1;  // mW/cm^2
            const double sss =
                specific_shear_stress(governing_tension(op, d), d) * 1e-4;  // N/cm^2
            table.add_row({Cell::str(label), Cell::num(family.wraps),
                           Cell::num(d.interface.gap), Cell::num(voltage), Cell::num(power),
                           Cell::num(sss)});
        }
    }
    if (include_planar) {
        ClutchDesign d = design;
        if (planar_gap) d.interface.gap = *planar_gap;
        for (double voltage : voltages) {
            const OperatingPoint op{voltage};
            const double power = specific_power(op, d.dielectric) * 0.1;
            // A planar clutch transfers mu * beta of shear per unit area.
            const double sss = d.interface.cof * ea_pressure(op, d).beta_total * 1e-4;
            table.add_row({Cell::str("planar"), Cell::na(), Cell::num(d.interface.gap),
                           Cell::num(voltage), Cell::num(power), Cell::num(sss)});
        }
    }
    return table;
}

}  // namespace jrcc
