#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jrcc/table.hpp"
#include "jrcc/types.hpp"

namespace jrcc {

/// Design or operating parameter a sweep may vary.
enum class SweepParam {
    Voltage,
    WrapAngle,
    Gap,
    BandThickness,
    BandWidth,
    ShaftRadius,
    Pretension,
};

/// Scalar outputs a sweep can tabulate, one column each.
enum class Metric {
    TLoad,
    HoldingTorque,
    BandStressEq,
    BandStressExact,
    SpecificShearStress,
    SpecificPower,
    CoulombPressure,
    JrPressure,
    BetaTotal,
    AdvantageExact,
};

struct SweepAxis {
    SweepParam param = SweepParam::Voltage;
    std::vector<double> values;  // SI units of the parameter
};

struct SweepSpec {
    std::vector<SweepAxis> axes;   // row order is lexicographic in this order
    std::vector<Metric> metrics;
};

/// Feasibility of one operating point against the band strength limit.
struct ConstraintReport {
    double exact_stress = 0.0;   // Pa, at the slip-limit tension
    double stress_margin = 0.0;  // (yield/safety_factor) / exact_stress, capped
    bool feasible = false;       // stress_margin >= 1
    double ratio_term = 0.0;     // T_hold/(l*r*beta); free rotation wants << 1
    std::vector<std::string> warnings;
};

enum class WrapStatus {
    Ok,
    InfeasibleAngle,     // theta_max still falls short of the target
    InfeasibleStrength,  // band snaps below the target regardless of angle
};

struct WrapSolution {
    WrapStatus status = WrapStatus::Ok;
    double theta = 0.0;  // rad; smallest angle meeting the target when Ok
};

/// Margin and ratio values are capped here instead of reporting infinity.
inline constexpr double kMarginCap = 1e9;
/// Default ceiling for voltage inversions with no binding stress limit.
inline constexpr double kVoltageCeiling = 1e4;  // V

const char* metric_column_name(Metric metric);
const char* param_column_name(SweepParam param);

/// Sets the swept field on the design or operating point.
void apply_param(ClutchDesign& design, OperatingPoint& op, SweepParam param, double value);

void validate(const SweepSpec& spec);

/// Cartesian sweep over the axes, one row per combination in lexicographic
/// order. Combinations that violate a field invariant produce rows whose
/// metric cells carry the infeasible marker; metrics undefined at a valid
/// point (per-area values at zero wrap, power without resistivity) are NA.
/// Row content is independent of `threads`.
ResultTable run_sweep(const ClutchDesign& base, const OperatingPoint& op,
                      const SweepSpec& spec, unsigned threads = 1);

/// Compares the stress at the slip-limit tension against
/// yield_stress / safety_factor. Infeasibility is a result, not an error.
ConstraintReport check_constraints(const ClutchDesign& design, const OperatingPoint& op,
                                   double safety_factor = 1.0);

/// Smallest wrap angle whose slip-limit torque reaches target_torque, by
/// bisection to 1e-6 rad. Targets above the band's strength limit are
/// flagged even when the tension side is achievable.
WrapSolution min_wrap_for_torque(const ClutchDesign& design, const OperatingPoint& op,
                                 double target_torque, double theta_max);

/// Largest voltage keeping the slip-limit band stress within
/// yield_stress / safety_factor, capped at `ceiling`. Closed form in V^2,
/// cross-checked internally against bisection to 1e-9 relative. Returns 0
/// with a warning when the pretension alone exceeds the limit.
double max_voltage_for_stress(const ClutchDesign& design, double safety_factor = 1.0,
                              double ceiling = kVoltageCeiling,
                              std::vector<std::string>* warnings = nullptr);

/// Capstan vs planar tension with the advantage over the (voltage, angle)
/// grid. Zero-angle rows report the limit advantage 1; zero-voltage rows
/// have no finite exact advantage and carry NA there.
ResultTable compare_planar(const ClutchDesign& design, const std::vector<double>& voltages,
                           const std::vector<double>& thetas);

/// One family of the efficiency comparison: a wrap count plus an optional
/// gap measured for that wrap.
struct EfficiencyFamily {
    double wraps = 1.0;
    std::optional<double> gap_override;  // m
};

/// Specific power vs specific shear stress per family over the voltage
/// grid. The planar reference transfers mu*beta per unit contact area at
/// the same areal power. Requires a dielectric resistivity.
ResultTable efficiency_curve(const ClutchDesign& design, const std::vector<double>& voltages,
                             const std::vector<EfficiencyFamily>& families,
                             bool include_planar = false,
                             std::optional<double> planar_gap = std::nullopt);

}  // namespace jrcc
