#pragma once

#include "newtondrag/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace newtondrag {

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

/// Particle velocity distribution ρ(v), treated as a probability density.
struct VelocityDensity {
    enum class Kind { dirac, gaussian, empirical };

    Kind kind = Kind::dirac;
    Vec3 mean;          // dirac drift or gaussian mean
    double sigma = 0.0; // gaussian only
    std::vector<Vec3> samples;
    std::vector<double> weights;

    static VelocityDensity dirac(Vec3 drift);
    static VelocityDensity gaussian(Vec3 mean, double sigma);
    static VelocityDensity empirical(std::vector<Vec3> samples, std::vector<double> weights);
};

nlohmann::json density_to_json(const VelocityDensity& density);
VelocityDensity density_from_json(const nlohmann::json& j);

enum class ConstraintKind { height, volume, surface, lift };

/// One of: height bound M, volume bound V, free-surface bound S, or a minimum
/// lift L₀ along `direction` (lift constraints also carry a height bound).
struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::height;
    double value = 1.0;
    Vec2 direction{1.0, 0.0};
    double height = 0.0;  // lift only

    static ConstraintSpec height_bound(double M);
    static ConstraintSpec volume_bound(double V);
    static ConstraintSpec surface_bound(double S);
    static ConstraintSpec min_lift(double L0, Vec2 direction, double M);
};

std::string to_string(ConstraintKind kind);
nlohmann::json constraint_to_json(const ConstraintSpec& spec);
ConstraintSpec constraint_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Cartesian functionals over the piecewise-linear interpolant on a mesh
// ---------------------------------------------------------------------------

/// φ(x, u, ∇u); must be nonnegative and finite.
using Integrand = std::function<double(Vec2 x, double u, Vec2 gradient)>;

/// 1/(1+|g|²).
double newton_integrand(Vec2 x, double u, Vec2 gradient);

/// ∫_Ω φ(x, u, ∇u) dx with the edge-midpoint rule on each triangle; u is the
/// nodal interpolant, so its gradient is constant per triangle.
double generic_functional(const Mesh& mesh, std::span<const double> heights, const Integrand& phi);
double generic_functional(const ConcaveProfile& profile, const Mesh& mesh, const Integrand& phi);

/// F(u) = ∫_Ω dx / (1 + |∇u|²).
double newton_resistance(const Mesh& mesh, std::span<const double> heights);
double newton_resistance(const ConcaveProfile& profile, const Mesh& mesh);

/// L(u) = ∫_Ω (∇u·e)/(1 + |∇u|²) dx for a unit direction e.
double lift(const Mesh& mesh, std::span<const double> heights, Vec2 direction);
double lift(const ConcaveProfile& profile, const Mesh& mesh, Vec2 direction);

double volume(const Mesh& mesh, std::span<const double> heights);
double volume(const ConcaveProfile& profile, const Mesh& mesh);

/// Graph area ∫√(1+|∇u|²) plus the lateral wall ∫_{∂Ω} u.
double free_surface(const ConcaveProfile& profile, const Mesh& mesh, const BoundarySamples& boundary);

/// Per-triangle gradient of the nodal interpolant.
Vec2 triangle_gradient(const Mesh& mesh, std::span<const double> heights, std::size_t triangle);

/// Record emitted for every evaluation.
struct FunctionalResult {
    double value = 0.0;
    double estimated_error = 0.0;
    double mesh_h = 0.0;
    std::optional<std::uint64_t> seed;
    double scale = 1.0;  // physical prefactor ρv², not folded into value
};

nlohmann::json result_to_json(const FunctionalResult& result);

/// Evaluates `functional` on a mesh of size h and on its 2× refinement; the
/// difference is the error estimate for the coarse value.
FunctionalResult evaluate_with_error(const ConcaveProfile& profile, double h,
                                     const std::function<double(const ConcaveProfile&, const Mesh&)>& functional);

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

struct AdmissibilityReport {
    ConstraintKind kind = ConstraintKind::height;
    bool feasible = false;
    double min_height = 0.0;        // over extreme points and mesh vertices
    double max_height = 0.0;        // ‖u‖∞ over mesh vertices and boundary samples
    double nonnegativity_slack = 0.0;
    double value = 0.0;             // M-bound: ‖u‖∞; V: ∫u; S: free surface; lift: L(u)
    double slack = 0.0;             // bound − value (≥ 0 when satisfied; lift: value − L₀)
    double implied_height_bound = 0.0;  // (d+1)V/|Ω| or S·d/|∂Ω| (M for the others)
    double implied_bound_slack = 0.0;
};

nlohmann::json admissibility_to_json(const AdmissibilityReport& report);

/// Tolerance used for nonnegativity at extreme points.
inline constexpr double nonnegativity_tolerance = 1e-9;

AdmissibilityReport in_CM(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec);
AdmissibilityReport in_VV(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec);
AdmissibilityReport in_HS(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec);
AdmissibilityReport in_lift_class(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec);
AdmissibilityReport check_admissible(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec);

// ---------------------------------------------------------------------------
// Intrinsic (boundary) functionals
// ---------------------------------------------------------------------------

/// ∫_{∂E} (ν_n)₊³ dH², with n the vertical axis.
double boundary_resistance(const TriangulatedSurface& surface);

using BoundaryIntegrand = std::function<double(Vec3 x, Vec3 normal)>;

/// Σ_faces area·f(centroid, ν).
double generic_boundary_functional(const TriangulatedSurface& surface, const BoundaryIntegrand& f);

/// R(E) = ∫_{∂E} f(ν) dH² with f(ν) = −2ν ∫ (v·ν)₋² ρ(v) dv. Dirac densities
/// are integrated analytically; gaussian ones by seeded antithetic Monte Carlo
/// with `velocity_samples` draws; empirical ones by their weighted sum.
Vec3 temperature_force(const TriangulatedSurface& surface, const VelocityDensity& density,
                       int velocity_samples = 100000, std::uint64_t seed = 0);

/// The inner kernel ∫ (v·ν)₋² ρ(v) dv for a single normal (same sampling rules).
double impact_kernel(Vec3 normal, const VelocityDensity& density, std::span<const Vec3> velocity_draws);

/// Velocity draws used by temperature_force for non-dirac densities.
std::vector<Vec3> draw_velocities(const VelocityDensity& density, int count, std::uint64_t seed);

}  // namespace newtondrag
