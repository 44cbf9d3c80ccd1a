#include "jrcc/model.hpp"

#include <cmath>
#include <string>

#include "jrcc/errors.hpp"

namespace jrcc {

namespace {

void require(bool ok, const char* field, const char* msg) {
    if (!ok) throw ValidationError(field, msg);
}

}  // namespace

void validate(const DielectricSpec& spec, const std::string& prefix) {
    if (!(spec.thickness > 0.0))
        throw ValidationError(prefix + ".thickness", "must be > 0");
    if (!(spec.rel_permittivity >= 1.0))
        throw ValidationError(prefix + ".rel_permittivity", "must be >= 1");
    if (spec.volume_resistivity && !(*spec.volume_resistivity > 0.0))
        throw ValidationError(prefix + ".volume_resistivity", "must be > 0");
}

void validate(const InterfaceSpec& spec, const std::string& prefix) {
    if (!(spec.gap > 0.0))
        throw ValidationError(prefix + ".gap", "must be > 0");
    if (!(spec.gas_permittivity >= 1.0))
        throw ValidationError(prefix + ".gas_permittivity", "must be >= 1");
    if (!(spec.cof > 0.0 && spec.cof < 2.0))
        throw ValidationError(prefix + ".cof", "must be in (0, 2)");
}

void validate(const BandSpec& spec, const std::string& prefix) {
    if (!(spec.thickness > 0.0))
        throw ValidationError(prefix + ".thickness", "must be > 0");
    if (!(spec.width > 0.0))
        throw ValidationError(prefix + ".width", "must be > 0");
    if (!(spec.yield_stress > 0.0))
        throw ValidationError(prefix + ".yield_stress", "must be > 0");
}

void validate(const CapstanGeometry& spec, const std::string& prefix) {
    if (!(spec.shaft_radius > 0.0))
        throw ValidationError(prefix + ".shaft_radius", "must be > 0");
    if (!(spec.wrap_angle >= 0.0))
        throw ValidationError(prefix + ".wrap_angle", "must be >= 0");
    if (!(spec.pretension >= 0.0))
        throw ValidationError(prefix + ".pretension", "must be >= 0");
}

void validate(const ClutchDesign& design) {
    validate(design.dielectric);
    validate(design.interface);
    validate(design.band);
    validate(design.geometry);
}

void validate(const OperatingPoint& op) {
    if (!(op.voltage >= 0.0))
        throw ValidationError("voltage", "must be >= 0");
}

double coulomb_pressure(const OperatingPoint& op, const DielectricSpec& d,
                        const InterfaceSpec& iface) {
    validate(op);
    validate(d);
    validate(iface);
    const double field_factor =
        iface.gas_permittivity * d.rel_permittivity /
        (d.thickness * iface.gas_permittivity + iface.gap * d.rel_permittivity);
    return 0.5 * kEpsilon0 * op.voltage * op.voltage * field_factor * field_factor;
}

double jr_pressure(const OperatingPoint& op, const InterfaceSpec& iface) {
    validate(op);
    validate(iface);
    const double field_factor = iface.gas_permittivity / iface.gap;
    return 0.5 * kEpsilon0 * op.voltage * op.voltage * field_factor * field_factor;
}

PressureBreakdown ea_pressure(const OperatingPoint& op, const ClutchDesign& design) {
    PressureBreakdown out;
    out.coulomb_pressure = coulomb_pressure(op, design.dielectric, design.interface);
    out.jr_pressure = jr_pressure(op, design.interface);
    out.beta_total = out.coulomb_pressure + out.jr_pressure;
    out.alpha_per_radian =
        out.beta_total * design.band.width * design.geometry.shaft_radius;
    return out;
}

double capstan_tension(double t_hold, double mu, double theta) {
    require(t_hold >= 0.0, "t_hold", "must be >= 0");
    require(mu > 0.0, "mu", "must be > 0");
    require(theta >= 0.0, "theta", "must be >= 0 (clutch resists one direction only)");
    return t_hold * std::exp(mu * theta);
}

double es_capstan_tension(double t_hold, double mu, double theta, double alpha) {
    require(t_hold >= 0.0, "t_hold", "must be >= 0");
    require(mu > 0.0, "mu", "must be > 0");
    require(theta >= 0.0, "theta", "must be >= 0 (clutch resists one direction only)");
    require(alpha >= 0.0, "alpha", "must be >= 0");
    const double gain = std::exp(mu * theta);
    return t_hold * gain + alpha * (gain - 1.0);
}

double governing_tension(const OperatingPoint& op, const ClutchDesign& design) {
    const PressureBreakdown p = ea_pressure(op, design);
    return es_capstan_tension(design.geometry.pretension, design.interface.cof,
                              design.geometry.wrap_angle, p.alpha_per_radian);
}

double planar_tension(const OperatingPoint& op, const ClutchDesign& design) {
    const PressureBreakdown p = ea_pressure(op, design);
    return design.interface.cof * p.beta_total * design.band.width *
           design.geometry.shaft_radius * design.geometry.wrap_angle;
}

AdvantageResult advantage(double t_hold, const ClutchDesign& design, double beta) {
    validate(design);
    require(t_hold >= 0.0, "t_hold", "must be >= 0");
    require(design.geometry.wrap_angle > 0.0, "geometry.wrap_angle",
            "must be > 0 for the advantage factor (limit at 0 is exactly 1)");
    require(beta > 0.0, "beta", "must be > 0");

    const double x = design.interface.cof * design.geometry.wrap_angle;
    AdvantageResult out;
    out.ratio_term =
        t_hold / (design.band.width * design.geometry.shaft_radius * beta);
    // expm1 keeps the small-x limit accurate; (e^x - 1)/x -> 1 + x/2 + ...
    out.approx = std::expm1(x) / x;
    out.exact = ((out.ratio_term + 1.0) * std::exp(x) - 1.0) / x;
    return out;
}

BandStressResult band_stress(const OperatingPoint& op, const ClutchDesign& design) {
    validate(design);
    const PressureBreakdown p = ea_pressure(op, design);
    const double growth =
        std::expm1(design.interface.cof * design.geometry.wrap_angle);
    BandStressResult out;
    out.eq_stress = design.geometry.shaft_radius / design.band.thickness *
                    p.beta_total * growth;
    out.exact_stress = governing_tension(op, design) /
                       (design.band.width * design.band.thickness);
    return out;
}

double max_torque(const BandSpec& band, double shaft_radius, double yield_stress) {
    validate(band);
    require(shaft_radius > 0.0, "shaft_radius", "must be > 0");
    require(yield_stress >= 0.0, "yield_stress", "must be >= 0");
    return band.width * band.thickness * shaft_radius * yield_stress;
}

double specific_shear_stress(double t_load, const ClutchDesign& design) {
    validate(design);
    require(t_load >= 0.0, "t_load", "must be >= 0");
    require(design.geometry.wrap_angle > 0.0, "geometry.wrap_angle",
            "must be > 0 (zero contact area)");
    return t_load / (design.band.width * design.geometry.shaft_radius *
                     design.geometry.wrap_angle);
}

double specific_power(const OperatingPoint& op, const DielectricSpec& d) {
    validate(op);
    validate(d);
    if (!d.volume_resistivity)
        throw ValidationError("dielectric.volume_resistivity",
                              "unknown; supply it or fit it from a power measurement");
    return op.voltage * op.voltage / (*d.volume_resistivity * d.thickness);
}

double ode_tension_oracle(const OperatingPoint& op, const ClutchDesign& design,
                          int n_steps) {
    require(n_steps >= 1000, "n_steps", "must be >= 1000");
    const PressureBreakdown p = ea_pressure(op, design);
    const double mu = design.interface.cof;
    const double alpha = p.alpha_per_radian;
    const double h = design.geometry.wrap_angle / n_steps;

    auto deriv = [mu, alpha](double t) { return mu * (t + alpha); };

    double t = design.geometry.pretension;
    for (int i = 0; i < n_steps; ++i) {
        const double k1 = deriv(t);
        const double k2 = deriv(t + 0.5 * h * k1);
        const double k3 = deriv(t + 0.5 * h * k2);
        const double k4 = deriv(t + h * k3);
        t += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return t;
}

Prediction predict(const OperatingPoint& op, const ClutchDesign& design) {
    validate(design);
    validate(op);

    Prediction out;
    out.pressures = ea_pressure(op, design);
    out.t_load = es_capstan_tension(design.geometry.pretension, design.interface.cof,
                                    design.geometry.wrap_angle,
                                    out.pressures.alpha_per_radian);
    out.holding_torque = out.t_load * design.geometry.shaft_radius;
    out.band_stress = out.t_load / (design.band.width * design.band.thickness);
    if (design.geometry.wrap_angle > 0.0)
        out.specific_shear_stress = specific_shear_stress(out.t_load, design);
    if (design.dielectric.volume_resistivity)
        out.specific_power = specific_power(op, design.dielectric);
    if (design.geometry.wrap_angle > 0.0 && out.pressures.beta_total > 0.0)
        out.advantage_exact =
            advantage(design.geometry.pretension, design, out.pressures.beta_total)
                .exact;
    return out;
}

}  // namespace jrcc
