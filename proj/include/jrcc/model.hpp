#pragma once

#include "jrcc/types.hpp"

namespace jrcc {

/// Coulombic electroadhesive pressure: the dielectric bulk and the air gap
/// act as series capacitors, so
///   p_C = (eps0/2) * V^2 * (eps_g*eps_d / (d*eps_g + g*eps_d))^2.
double coulomb_pressure(const OperatingPoint& op, const DielectricSpec& d,
                        const InterfaceSpec& iface);

/// Johnsen-Rahbek pressure: charge migrates to the dielectric surface, so the
/// whole voltage drops across the micron-scale gap,
///   p_JR = (eps0/2) * V^2 * (eps_g/g)^2.
double jr_pressure(const OperatingPoint& op, const InterfaceSpec& iface);

/// Total electroadhesive pressure beta = p_C + p_JR and the per-radian
/// adhesive force alpha = beta * width * shaft_radius.
PressureBreakdown ea_pressure(const OperatingPoint& op, const ClutchDesign& design);

/// Classic capstan amplification: t_hold * e^(mu*theta). Rejects theta < 0
/// (the clutch only resists motion in the wrap direction).
double capstan_tension(double t_hold, double mu, double theta);

/// Electrostatic capstan holding tension for an arbitrary per-radian
/// adhesive force: t_hold*e^(mu*theta) + alpha*(e^(mu*theta) - 1).
double es_capstan_tension(double t_hold, double mu, double theta, double alpha);

/// Slip-limit holding tension of the full design at one operating point;
/// es_capstan_tension with alpha from ea_pressure.
double governing_tension(const OperatingPoint& op, const ClutchDesign& design);

/// Holding tension of the equal-area planar clutch: mu * beta * l * r * theta.
double planar_tension(const OperatingPoint& op, const ClutchDesign& design);

/// Capstan/planar advantage factor,
///   exact  = ((t_hold/(l*r*beta) + 1)*e^(mu*theta) - 1) / (mu*theta)
///   approx = (e^(mu*theta) - 1) / (mu*theta)
/// Requires theta > 0 and beta > 0 (the theta -> 0 limit, exactly 1, is the
/// caller's to take).
AdvantageResult advantage(double t_hold, const ClutchDesign& design, double beta);

/// Band tensile stress at the slip limit, both via the closed form that
/// assumes negligible pretension and exactly. eq_stress <= exact_stress,
/// equal iff pretension = 0.
BandStressResult band_stress(const OperatingPoint& op, const ClutchDesign& design);

/// Torque at which the band cross-section reaches `yield_stress`:
/// width * thickness * shaft_radius * yield_stress.
double max_torque(const BandSpec& band, double shaft_radius, double yield_stress);

/// Load tension over apparent contact area l*r*theta. Requires theta > 0.
double specific_shear_stress(double t_load, const ClutchDesign& design);

/// Ohmic leakage power density through the dielectric: V^2 / (rho * d).
/// Requires a known volume resistivity.
double specific_power(const OperatingPoint& op, const DielectricSpec& d);

/// Independent cross-check of governing_tension: integrates the free-body
/// relation dT/dtheta = mu * (T + beta*l*r) from T(0) = t_hold with
/// fixed-step classical RK4. Converges to the closed form as n_steps grows;
/// n_steps must be >= 1000.
double ode_tension_oracle(const OperatingPoint& op, const ClutchDesign& design,
                          int n_steps);

/// Evaluate everything at once.
Prediction predict(const OperatingPoint& op, const ClutchDesign& design);

}  // namespace jrcc
