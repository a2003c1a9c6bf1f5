#include "newtondrag/radial_solver.hpp"

#include "newtondrag/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <cstdio>

namespace newtondrag {

namespace {

constexpr double pi = std::numbers::pi;

// −7/4 + 3t⁴/4 + t² − ln t
double shape_polynomial(double t) { return -1.75 + 0.75 * t * t * t * t + t * t - std::log(t); }

struct KronrodResult {
    double value;
    double error;
};

// 15-point Kronrod extension of the 7-point Gauss rule.
KronrodResult gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    static constexpr std::array<double, 8> xk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                              0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                              0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                              0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                              0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                              0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                              0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = wk[7] * fc;
    double gauss = wg[3] * fc;
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * xk[j];
        const double sum = f(centre - dx) + f(centre + dx);
        kronrod += wk[j] * sum;
        if (j % 2 == 1) gauss += wg[j / 2] * sum;
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    struct Interval {
        double a, b;
        KronrodResult r;
    };
    std::vector<Interval> intervals{{a, b, gauss_kronrod(f, a, b)}};
    for (int iteration = 0; iteration < 2000; ++iteration) {
        double value = 0.0;
        double error = 0.0;
        for (const auto& iv : intervals) {
            value += iv.r.value;
            error += iv.r.error;
        }
        if (error <= rel_tol * std::abs(value) || error == 0.0) return value;
        auto worst = std::max_element(intervals.begin(), intervals.end(),
                                      [](const Interval& x, const Interval& y) { return x.r.error < y.r.error; });
        const Interval split = *worst;
        const double mid = 0.5 * (split.a + split.b);
        *worst = {split.a, mid, gauss_kronrod(f, split.a, mid)};
        intervals.push_back({mid, split.b, gauss_kronrod(f, mid, split.b)});
    }
    throw NumericalFailure("adaptive quadrature did not reach the requested tolerance");
}

double f_profile(double t) {
    require(std::isfinite(t) && t >= 1.0, "f is defined for t >= 1");
    const double q = 1.0 + t * t;
    return t / (q * q) * shape_polynomial(t);
}

double solve_T(double M, double R, double tol) {
    require(std::isfinite(M) && M > 0.0, "height M must be positive");
    require(std::isfinite(R) && R > 0.0, "radius R must be positive");
    require(std::isfinite(tol) && tol > 0.0, "tolerance must be positive");
    const double target = M / R;
    require(std::isfinite(target), "M/R overflows");
    const double accept = tol * std::max(1.0, target);
    if (target <= accept) return 1.0;

    double lo = 1.0;
    double hi = 2.0;
    int steps = 0;
    for (double f = f_profile(hi); !(f > target); f = f_profile(hi)) {
        // f overflows to NaN near t ~ 1e77, which caps the reachable M/R
        if (!std::isfinite(f) || ++steps > 400) throw NumericalFailure("could not bracket f(T) = M/R");
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double residual = f_profile(mid) - target;
        if (std::abs(residual) <= accept) return mid;
        if (residual < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    throw NumericalFailure("bisection for T did not converge within 200 steps");
}

double RadialOptimum::radius_at(double t) const {
    const double q = 1.0 + t * t;
    return r0 / (4.0 * t) * q * q;
}

double RadialOptimum::height_at(double t) const { return M - 0.25 * r0 * shape_polynomial(t); }

double RadialOptimum::dr_dt(double t) const {
    const double q = 1.0 + t * t;
    return 0.25 * r0 * q * (3.0 * t * t - 1.0) / (t * t);
}

double RadialOptimum::slope_at_radius(double r) const {
    require(r >= r0 * (1.0 - 1e-14) && r <= R * (1.0 + 1e-14), "radius outside the curved branch");
    double lo = 1.0;
    double hi = T;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (radius_at(mid) < r)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double RadialOptimum::height_at_radius(double r) const {
    require(r >= 0.0 && r <= R * (1.0 + 1e-14), "radius outside the disk");
    if (r <= r0) return M;
    return height_at(slope_at_radius(r));
}

std::vector<RadialPoint> RadialOptimum::polyline(int n) const {
    require(n >= 2, "polyline needs at least two samples");
    std::vector<RadialPoint> points{{0.0, M}};
    for (int i = 0; i < n; ++i) {
        const double t = (i == n - 1) ? T : 1.0 + (T - 1.0) * i / (n - 1);
        points.push_back(sample(t));
    }
    points[1] = {r0, M};
    points.back() = {R, 0.0};
    return points;
}

ConcaveProfile RadialOptimum::to_profile(int n) const {
    const auto points = polyline(n);
    std::vector<double> knots;
    std::vector<double> values;
    for (const auto& p : points) {
        if (!knots.empty() && p.r <= knots.back()) continue;
        knots.push_back(p.r);
        values.push_back(std::max(0.0, p.u));
    }
    return ConcaveProfile::radial(std::move(knots), std::move(values));
}

RadialOptimum radial_optimum(double M, double R) {
    RadialOptimum opt;
    opt.M = M;
    opt.R = R;
    opt.T = solve_T(M, R);
    const double q = 1.0 + opt.T * opt.T;
    opt.r0 = 4.0 * R * opt.T / (q * q);
    opt.C_el = -0.25 * opt.r0;
    double curved = 0.0;
    if (opt.T > 1.0) {
        curved = integrate_adaptive(
            [&](double t) { return opt.radius_at(t) * opt.dr_dt(t) / (1.0 + t * t); }, 1.0, opt.T, 1e-10);
    }
    // Plateau: integrand 1 on [0, r0] contributes πr0² exactly.
    opt.resistance = pi * opt.r0 * opt.r0 + 2.0 * pi * curved;
    opt.C0 = opt.resistance / (pi * R * R);
    return opt;
}

double el_residual(const RadialOptimum& optimum, int n_samples) {
    require(n_samples >= 1, "at least one sample is required");
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double t = n_samples == 1 ? 1.0 : 1.0 + (optimum.T - 1.0) * i / (n_samples - 1);
        const double q = 1.0 + t * t;
        const double c = optimum.radius_at(t) * (-t) / (q * q);
        worst = std::max(worst, std::abs(c - optimum.C_el) / std::abs(optimum.C_el));
    }
    return worst;
}

std::vector<AsymptoticsRow> asymptotics_table(std::span<const double> ratios) {
    std::vector<AsymptoticsRow> rows;
    for (double ratio : ratios) {
        require(std::isfinite(ratio) && ratio >= 1.0, "asymptotic ratios must be >= 1");
        const RadialOptimum opt = radial_optimum(ratio, 1.0);
        rows.push_back({ratio, opt.r0 * ratio * ratio * ratio, opt.C0 * ratio * ratio});
    }
    return rows;
}

void write_asymptotics_csv(std::ostream& out, std::span<const AsymptoticsRow> rows) {
    out << "ratio,r0_scaled,c0_scaled\n";
    char line[160];
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", row.ratio, row.r0_scaled, row.c0_scaled);
        out << line;
    }
}

double radial_hessian_det(const RadialOptimum& optimum, double r) {
    require(r > optimum.r0 && r < optimum.R, "radius must lie strictly inside the curved branch (r0, R)");
    const double t = optimum.slope_at_radius(r);
    // u' = −t, u'' = −1/(dr/dt)
    return t / (r * optimum.dr_dt(t));
}

double radial_hessian_det(const ConcaveProfile& profile, double r) {
    require(profile.kind() == ProfileKind::radial, "profile is not radial");
    const auto& knots = profile.knots();
    const auto& values = profile.values();
    require(r > 0.0 && r < knots.back(), "radius outside the disk");
    auto it = std::lower_bound(knots.begin() + 1, knots.end(), r);
    const auto seg = static_cast<std::size_t>(it - knots.begin()) - 1;
    require(!(values[seg] == profile.cap() && values[seg + 1] == profile.cap()), "radius lies on the plateau");
    return 0.0;
}

nlohmann::json radial_optimum_to_json(const RadialOptimum& opt, int polyline_samples) {
    std::vector<double> r;
    std::vector<double> u;
    for (const auto& p : opt.polyline(polyline_samples)) {
        r.push_back(p.r);
        u.push_back(p.u);
    }
    return {{"M", opt.M},   {"R", opt.R},   {"T", opt.T},     {"r0", opt.r0},
            {"resistance", opt.resistance}, {"C0", opt.C0},   {"C_el", opt.C_el},
            {"polyline", {{"r", r}, {"u", u}}}};
}

}  // namespace newtondrag
