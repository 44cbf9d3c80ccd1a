#include "jrcc/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "jrcc/errors.hpp"
#include "jrcc/model.hpp"

namespace jrcc {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ValidationError(field, what);
}

std::string rec_field(std::size_t index, const char* field) {
    return "records[" + std::to_string(index) + "]." + field;
}

/// Pearson correlation, or 1.0 for degenerate inputs (n < 2 or a constant
/// series). Fits report it as a secondary quality signal; residual_sse is
/// the primary one.
double pearson_lenient(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2) return 1.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return 1.0;
    if (std::equal(x.begin(), x.end(), y.begin())) return 1.0;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

/// Bounded scalar minimization (golden section with parabolic refinement).
/// Terminates when the bracket pins x within 2*xatol. The objective must be
/// finite everywhere it is probed.
double brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                      double xatol, double* f_at_min) {
    constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
    constexpr int kMaxIter = 500;

    double a = lo, b = hi;
    double x = a + kGolden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < kMaxIter; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol = xatol + std::numeric_limits<double>::epsilon() * std::fabs(x);
        const double t2 = 2.0 * tol;
        if (std::fabs(x - m) <= t2 - 0.5 * (b - a)) break;

        double p = 0.0, q = 0.0, r = 0.0;
        if (std::fabs(e) > tol) {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p; else q = -q;
            r = e;
            e = d;
        }
        if (std::fabs(p) < std::fabs(0.5 * q * r) && p > q * (a - x) && p < q * (b - x)) {
            d = p / q;  // parabolic step stays inside the bracket
            const double u = x + d;
            if (u - a < t2 || b - u < t2) d = (x < m) ? tol : -tol;
        } else {
            e = (x < m) ? b - x : a - x;
            d = kGolden * e;
        }
        const double u = (std::fabs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    if (f_at_min != nullptr) *f_at_min = fx;
    return x;
}

void check_common_wrap(const std::vector<MeasurementRecord>& records, const char* fit) {
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].wrap_angle != records[0].wrap_angle) {
            throw FitError(std::string(fit) + " needs records at one wrap angle; record " +
                           std::to_string(i) + " differs from record 0");
        }
    }
}

}  // namespace

void validate(const MeasurementRecord& rec, std::size_t index) {
    require(std::isfinite(rec.wrap_angle) && rec.wrap_angle > 0.0,
            rec_field(index, "wrap_angle"), "must be positive and finite");
    require(std::isfinite(rec.voltage) && rec.voltage >= 0.0,
            rec_field(index, "voltage"), "must be non-negative and finite");
    require(std::isfinite(rec.pretension) && rec.pretension >= 0.0,
            rec_field(index, "pretension"), "must be non-negative and finite");
    require(std::isfinite(rec.slip_torque) && rec.slip_torque >= 0.0,
            rec_field(index, "slip_torque"), "must be non-negative and finite");
    if (rec.power_areal) {
        require(std::isfinite(*rec.power_areal) && *rec.power_areal >= 0.0,
                rec_field(index, "power_mW_per_cm2"), "must be non-negative and finite");
    }
}

FitResult fit_cof(const std::vector<MeasurementRecord>& records, double shaft_radius) {
    require(std::isfinite(shaft_radius) && shaft_radius > 0.0, "shaft_radius",
            "must be positive and finite");
    if (records.empty()) throw FitError("cof fit needs at least one record");
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate(records[i], i);
        if (records[i].voltage != 0.0) {
            throw FitError("cof fit record " + std::to_string(i) +
                           " has nonzero voltage; electroadhesion would bias the fit");
        }
        if (!(records[i].pretension > 0.0)) {
            throw FitError("cof fit record " + std::to_string(i) +
                           " has zero pretension; the friction ratio is undefined");
        }
        if (!(records[i].slip_torque > 0.0)) {
            throw FitError("cof fit record " + std::to_string(i) +
                           " has zero slip torque; the friction ratio is undefined");
        }
    }
    check_common_wrap(records, "cof fit");

    const double theta = records[0].wrap_angle;
    double sum_mu = 0.0;
    std::vector<double> log_ratio(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double tension = records[i].slip_torque / shaft_radius;
        log_ratio[i] = std::log(tension / records[i].pretension);
        sum_mu += log_ratio[i] / theta;
    }
    const double mu = sum_mu / static_cast<double>(records.size());
    if (!(mu > 0.0 && mu < 2.0)) {
        throw FitError("fitted cof " + std::to_string(mu) +
                       " is outside the physical range (0, 2); check the slip torques");
    }

    FitResult result;
    result.parameter_name = "cof";
    result.value = mu;
    result.n_records = records.size();
    result.bounds_used = {0.0, 2.0};
    for (double lr : log_ratio) {
        const double res = lr - mu * theta;
        result.residual_sse += res * res;
    }
    std::vector<double> measured(records.size()), predicted(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        measured[i] = records[i].slip_torque;
        predicted[i] = records[i].pretension * std::exp(mu * theta) * shaft_radius;
    }
    result.pearson_r = pearson_lenient(measured, predicted);
    return result;
}

FitResult fit_gap(const std::vector<MeasurementRecord>& records, const ClutchDesign& base,
                  std::pair<double, double> bounds) {
    require(std::isfinite(bounds.first) && std::isfinite(bounds.second) &&
                bounds.first > 0.0 && bounds.first < bounds.second,
            "bounds", "gap bounds must satisfy 0 < lo < hi");
    if (records.size() < 3) throw FitError("gap fit needs at least three records");
    bool any_voltage = false;
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate(records[i], i);
        if (records[i].voltage > 0.0) any_voltage = true;
    }
    check_common_wrap(records, "gap fit");
    if (!any_voltage) {
        throw FitError("gap fit needs records at nonzero voltage; "
                       "at 0 V the model does not depend on the gap");
    }

    const double r = base.geometry.shaft_radius;
    require(std::isfinite(r) && r > 0.0, "design.geometry.shaft_radius",
            "must be positive and finite");

    auto tension_at = [&](const MeasurementRecord& rec, double gap) {
        ClutchDesign d = base;
        d.interface.gap = gap;
        d.geometry.wrap_angle = rec.wrap_angle;
        d.geometry.pretension = rec.pretension;
        return governing_tension(OperatingPoint{rec.voltage}, d);
    };
    auto objective = [&](double gap) {
        double sse = 0.0;
        for (const MeasurementRecord& rec : records) {
            const double res = tension_at(rec, gap) - rec.slip_torque / r;
            sse += res * res;
        }
        if (!std::isfinite(sse)) {
            throw FitError("gap fit objective is not finite at gap = " +
                           std::to_string(gap * 1e6) + " um");
        }
        return sse;
    };

    constexpr double kXTol = 1e-10;  // m
    objective(bounds.first);
    objective(bounds.second);
    double sse = 0.0;
    const double gap = brent_minimize(objective, bounds.first, bounds.second, kXTol, &sse);

    FitResult result;
    result.parameter_name = "gap";
    result.value = gap;
    result.residual_sse = sse;
    result.n_records = records.size();
    result.bounds_used = bounds;
    result.at_bound = (gap - bounds.first <= 10.0 * kXTol) ||
                      (bounds.second - gap <= 10.0 * kXTol);
    std::vector<double> measured(records.size()), predicted(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        measured[i] = records[i].slip_torque;
        predicted[i] = tension_at(records[i], gap) * r;
    }
    result.pearson_r = pearson_lenient(measured, predicted);
    return result;
}

FitResult fit_resistivity(const std::vector<MeasurementRecord>& records,
                          const DielectricSpec& dielectric) {
    validate(dielectric);
    std::vector<double> volts, powers;
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate(records[i], i);
        if (!records[i].power_areal) continue;
        volts.push_back(records[i].voltage);
        powers.push_back(*records[i].power_areal);
    }
    if (volts.empty()) throw FitError("resistivity fit needs records with recorded power");
    bool any_power = false;
    for (double p : powers) any_power = any_power || p > 0.0;
    if (!any_power) {
        throw FitError("all recorded powers are zero; resistivity is unbounded");
    }

    // Least squares for P = c*V^2: c = sum(P*V^2) / sum(V^4).
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < volts.size(); ++i) {
        const double v2 = volts[i] * volts[i];
        num += powers[i] * v2;
        den += v2 * v2;
    }
    if (!(den > 0.0) || !(num > 0.0)) {
        throw FitError("resistivity fit needs positive power at nonzero voltage");
    }
    const double c = num / den;
    const double rho = 1.0 / (c * dielectric.thickness);

    FitResult result;
    result.parameter_name = "dielectric_resistivity";
    result.value = rho;
    result.n_records = volts.size();
    result.bounds_used = {0.0, std::numeric_limits<double>::infinity()};
    std::vector<double> predicted(volts.size());
    for (std::size_t i = 0; i < volts.size(); ++i) {
        predicted[i] = c * volts[i] * volts[i];
        const double res = predicted[i] - powers[i];
        result.residual_sse += res * res;
    }
    result.pearson_r = pearson_lenient(powers, predicted);
    return result;
}

double goodness_of_fit(const std::vector<MeasurementRecord>& records,
                       const ClutchDesign& design) {
    if (records.size() < 2) throw FitError("goodness of fit needs at least two records");
    const double r = design.geometry.shaft_radius;
    std::vector<double> measured(records.size()), predicted(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate(records[i], i);
        ClutchDesign d = design;
        d.geometry.wrap_angle = records[i].wrap_angle;
        d.geometry.pretension = records[i].pretension;
        measured[i] = records[i].slip_torque;
        predicted[i] = governing_tension(OperatingPoint{records[i].voltage}, d) * r;
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        mx += measured[i];
        my += predicted[i];
    }
    mx /= static_cast<double>(records.size());
    my /= static_cast<double>(records.size());
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double dx = measured[i] - mx;
        const double dy = predicted[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0)) throw FitError("measured slip torques have zero variance");
    if (!(syy > 0.0)) throw FitError("predicted slip torques have zero variance");
    if (std::equal(measured.begin(), measured.end(), predicted.begin())) return 1.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace jrcc
