#pragma once

#include "newtondrag/geometry.hpp"

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace newtondrag {

/// f(t) = t/(1+t²)² · (−7/4 + 3t⁴/4 + t² − ln t), strictly increasing on t ≥ 1 with f(1) = 0.
double f_profile(double t);

/// Root of f(T) = M/R by bracketing bisection. `tol` bounds the residual
/// |f(T) − M/R| relative to max(1, M/R). Throws NumericalFailure after 200 steps.
double solve_T(double M, double R, double tol = 1e-12);

struct RadialPoint {
    double r = 0.0;
    double u = 0.0;
};

/// Optimal radial profile of height M over the disk of radius R: a plateau on
/// [0, r0] followed by the parametric branch t ∈ [1, T], where t = |u'(r)|.
struct RadialOptimum {
    double M = 0.0;
    double R = 0.0;
    double T = 1.0;
    double r0 = 0.0;
    double resistance = 0.0;  // 2π ∫₀^R r/(1+u'²) dr
    double C0 = 0.0;          // resistance / (πR²)
    double C_el = 0.0;        // Euler–Lagrange constant r u'/(1+u'²)² = −r0/4

    double radius_at(double t) const;
    double height_at(double t) const;
    double dr_dt(double t) const;
    RadialPoint sample(double t) const { return {radius_at(t), height_at(t)}; }

    /// Slope parameter t with r(t) = r, for r in [r0, R].
    double slope_at_radius(double r) const;
    double height_at_radius(double r) const;

    /// Plateau start (0, M) followed by n points uniform in t on [1, T].
    std::vector<RadialPoint> polyline(int n) const;

    /// Piecewise-linear radial profile through `polyline(n)`.
    ConcaveProfile to_profile(int n = 2000) const;
};

RadialOptimum radial_optimum(double M, double R);

/// max over n samples of |C(t) − C_el| / |C_el| with C(t) = r(t)·(−t)/(1+t²)².
double el_residual(const RadialOptimum& optimum, int n_samples);

struct AsymptoticsRow {
    double ratio = 0.0;      // M/R
    double r0_scaled = 0.0;  // r0/R · (M/R)³ → 27/16
    double c0_scaled = 0.0;  // C0 · (M/R)²  → 27/32
};

std::vector<AsymptoticsRow> asymptotics_table(std::span<const double> ratios);
void write_asymptotics_csv(std::ostream& out, std::span<const AsymptoticsRow> rows);

/// det ∇²u = u''·u'/r of the radial optimum at radius r ∈ (r0, R).
double radial_hessian_det(const RadialOptimum& optimum, double r);

/// Same for a piecewise-linear radial profile: zero inside curved segments.
double radial_hessian_det(const ConcaveProfile& profile, double r);

nlohmann::json radial_optimum_to_json(const RadialOptimum& optimum, int polyline_samples);

/// Adaptive Gauss–Kronrod (7/15) quadrature with relative tolerance `rel_tol`.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

}  // namespace newtondrag
