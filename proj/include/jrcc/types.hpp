#pragma once

#include <optional>
#include <string>

namespace jrcc {

/// Vacuum permittivity, F/m (CODATA 2018).
inline constexpr double kEpsilon0 = 8.8541878128e-12;

/// One full wrap of the band around the shaft, rad.
inline constexpr double kRadPerWrap = 6.283185307179586476925286766559;  // 2*pi

/// Dielectric layer bonded to the shaft. All lengths in m, resistivity in
/// ohm*m. Resistivity is optional: it only feeds the leakage-power model and
/// may be fitted later instead of supplied.
struct DielectricSpec {
    double thickness = 0.0;          // m
    double rel_permittivity = 1.0;   // dimensionless, >= 1
    std::optional<double> volume_resistivity;  // ohm*m, > 0 when present
    std::string name;
};

/// Band-dielectric contact interface.
struct InterfaceSpec {
    double gap = 0.0;              // effective air gap, m
    double gas_permittivity = 1.0; // dimensionless, >= 1 (air = 1)
    double cof = 0.0;              // coefficient of friction, (0, 2)
};

/// Capstan band cross-section and strength.
struct BandSpec {
    double thickness = 0.0;    // m
    double width = 0.0;        // m
    double yield_stress = 0.0; // Pa
};

/// Shaft and wrap geometry plus pretension on the free end.
struct CapstanGeometry {
    double shaft_radius = 0.0; // m
    double wrap_angle = 0.0;   // rad, >= 0
    double pretension = 0.0;   // N, >= 0
};

/// A fully assembled clutch design.
struct ClutchDesign {
    DielectricSpec dielectric;
    InterfaceSpec interface;
    BandSpec band;
    CapstanGeometry geometry;
};

/// Electrical operating point.
struct OperatingPoint {
    double voltage = 0.0;  // V, >= 0
};

/// Electroadhesive pressure split into its two mechanisms, plus the
/// per-radian adhesive force alpha = beta * width * shaft_radius.
struct PressureBreakdown {
    double coulomb_pressure = 0.0;  // Pa
    double jr_pressure = 0.0;       // Pa
    double beta_total = 0.0;        // Pa, coulomb + jr
    double alpha_per_radian = 0.0;  // N/rad
};

/// Capstan-vs-planar advantage factor. `exact` keeps the pretension term,
/// `approx` drops it; ratio_term = pretension / (width * radius * beta).
struct AdvantageResult {
    double exact = 0.0;
    double approx = 0.0;
    double ratio_term = 0.0;
};

/// Band tensile stress two ways: the closed form that neglects pretension,
/// and the exact load tension over the cross-section.
struct BandStressResult {
    double eq_stress = 0.0;    // Pa, (r/h)*beta*(e^(mu*theta)-1)
    double exact_stress = 0.0; // Pa, t_load / (width * thickness)
};

/// Full model output at one operating point. Per-area metrics are absent
/// at wrap_angle = 0 (no contact area); specific_power is absent when the
/// dielectric resistivity is unknown; advantage is absent at 0 V (no
/// electroadhesion to compare against).
struct Prediction {
    double t_load = 0.0;         // N
    double holding_torque = 0.0; // N*m
    double band_stress = 0.0;    // Pa, exact
    std::optional<double> specific_shear_stress;  // Pa
    std::optional<double> specific_power;         // W/m^2
    PressureBreakdown pressures;
    std::optional<double> advantage_exact;
};

// Invariant checks. Throw ValidationError naming the offending field; the
// `prefix` is prepended to the field path when validating nested specs.
void validate(const DielectricSpec& spec, const std::string& prefix = "dielectric");
void validate(const InterfaceSpec& spec, const std::string& prefix = "interface");
void validate(const BandSpec& spec, const std::string& prefix = "band");
void validate(const CapstanGeometry& spec, const std::string& prefix = "geometry");
void validate(const ClutchDesign& design);
void validate(const OperatingPoint& op);

}  // namespace jrcc
