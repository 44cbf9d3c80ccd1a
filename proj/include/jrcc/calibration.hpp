#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jrcc/types.hpp"

namespace jrcc {

/// One slip test: the clutch was loaded at the given wrap angle, voltage and
/// pretension until it slipped at slip_torque. power_areal (W/m^2) is present
/// only when leakage power was recorded alongside.
struct MeasurementRecord {
    double wrap_angle = 0.0;   // rad, > 0
    double voltage = 0.0;      // V, >= 0
    double pretension = 0.0;   // N, >= 0
    double slip_torque = 0.0;  // N*m, >= 0
    std::optional<double> power_areal;  // W/m^2
    std::string label;
};

/// Outcome of a parameter fit.
struct FitResult {
    std::string parameter_name;
    double value = 0.0;            // SI units of the parameter
    double residual_sse = 0.0;     // sum of squared residuals, fit units
    double pearson_r = 1.0;        // measured vs predicted; 1.0 when n < 2
    std::size_t n_records = 0;
    std::pair<double, double> bounds_used{0.0, 0.0};
    bool at_bound = false;         // minimizer pinned at a bound: suspect data
};

void validate(const MeasurementRecord& rec, std::size_t index);

/// Coefficient of friction from 0 V slip tests at a common wrap angle.
/// Inverts the capstan relation per record, mu_i = ln(T_i/T_hold_i)/theta,
/// and averages (the log-space least-squares solution for a shared theta).
/// Records at nonzero voltage are rejected: electroadhesion would bias mu.
FitResult fit_cof(const std::vector<MeasurementRecord>& records, double shaft_radius);

/// Effective air gap from slip tests at a common wrap angle, by bounded
/// scalar least squares in torque space. `base` supplies everything except
/// the gap (its gap field is ignored); wrap angle, voltage and pretension
/// come from each record. Default bounds [0.1 um, 100 um], absolute
/// x-tolerance 1e-10 m.
FitResult fit_gap(const std::vector<MeasurementRecord>& records,
                  const ClutchDesign& base,
                  std::pair<double, double> bounds = {0.1e-6, 100e-6});

/// Dielectric volume resistivity from recorded leakage power, least squares
/// on the V^2 law P = V^2/(rho*d). A single record inverts exactly.
FitResult fit_resistivity(const std::vector<MeasurementRecord>& records,
                          const DielectricSpec& dielectric);

/// Pearson correlation between measured slip torques and the torques the
/// model predicts for each record's operating point.
double goodness_of_fit(const std::vector<MeasurementRecord>& records,
                       const ClutchDesign& design);

}  // namespace jrcc
