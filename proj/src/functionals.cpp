#include "newtondrag/functionals.hpp"

#include "newtondrag/errors.hpp"

#include <algorithm>
#include <cmath>

namespace newtondrag {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Constraint specs
// ---------------------------------------------------------------------------

namespace {

void require_positive(double value, const char* what) {
    require(std::isfinite(value) && value > 0.0, std::string(what) + " must be positive");
}

}  // namespace

ConstraintSpec ConstraintSpec::height_bound(double M) {
    require_positive(M, "height bound");
    return {ConstraintKind::height, M, {1.0, 0.0}, M};
}

ConstraintSpec ConstraintSpec::volume_bound(double V) {
    require_positive(V, "volume bound");
    return {ConstraintKind::volume, V, {1.0, 0.0}, 0.0};
}

ConstraintSpec ConstraintSpec::surface_bound(double S) {
    require_positive(S, "surface bound");
    return {ConstraintKind::surface, S, {1.0, 0.0}, 0.0};
}

ConstraintSpec ConstraintSpec::min_lift(double L0, Vec2 direction, double M) {
    require_positive(L0, "lift requirement");
    require_positive(M, "height bound");
    require(std::abs(norm(direction) - 1.0) < 1e-12, "lift direction must be a unit vector");
    return {ConstraintKind::lift, L0, direction, M};
}

std::string to_string(ConstraintKind kind) {
    switch (kind) {
        case ConstraintKind::height: return "height";
        case ConstraintKind::volume: return "volume";
        case ConstraintKind::surface: return "surface";
        case ConstraintKind::lift: return "lift";
    }
    return "unknown";
}

json constraint_to_json(const ConstraintSpec& spec) {
    json j{{"kind", to_string(spec.kind)}, {"value", spec.value}};
    if (spec.kind == ConstraintKind::lift) {
        j["direction"] = {spec.direction.x, spec.direction.y};
        j["M"] = spec.height;
    }
    return j;
}

ConstraintSpec constraint_from_json(const json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        const double value = j.at("value").get<double>();
        if (kind == "height") return ConstraintSpec::height_bound(value);
        if (kind == "volume") return ConstraintSpec::volume_bound(value);
        if (kind == "surface") return ConstraintSpec::surface_bound(value);
        if (kind == "lift") {
            Vec2 dir{1.0, 0.0};
            if (j.contains("direction")) dir = {j["direction"].at(0).get<double>(), j["direction"].at(1).get<double>()};
            return ConstraintSpec::min_lift(value, dir, j.at("M").get<double>());
        }
        throw InvalidArgument("unknown constraint kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed constraint: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Cartesian functionals
// ---------------------------------------------------------------------------

double newton_integrand(Vec2, double, Vec2 gradient) { return 1.0 / (1.0 + norm2(gradient)); }

Vec2 triangle_gradient(const Mesh& mesh, std::span<const double> u, std::size_t t) {
    const auto& tri = mesh.triangles[t];
    const auto i0 = static_cast<std::size_t>(tri[0]);
    const auto i1 = static_cast<std::size_t>(tri[1]);
    const auto i2 = static_cast<std::size_t>(tri[2]);
    const Vec2 e1 = mesh.vertices[i1] - mesh.vertices[i0];
    const Vec2 e2 = mesh.vertices[i2] - mesh.vertices[i0];
    const double d1 = u[i1] - u[i0];
    const double d2 = u[i2] - u[i0];
    const double det = cross(e1, e2);
    return {(d1 * e2.y - d2 * e1.y) / det, (d2 * e1.x - d1 * e2.x) / det};
}

double generic_functional(const Mesh& mesh, std::span<const double> u, const Integrand& phi) {
    require(u.size() == mesh.vertices.size(), "one height per mesh vertex is required");
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 g = triangle_gradient(mesh, u, t);
        const double u0 = u[static_cast<std::size_t>(tri[0])];
        const double u1 = u[static_cast<std::size_t>(tri[1])];
        const double u2 = u[static_cast<std::size_t>(tri[2])];
        const std::array<double, 3> mid{0.5 * (u0 + u1), 0.5 * (u1 + u2), 0.5 * (u2 + u0)};
        const QuadRule& q = mesh.quad[t];
        for (std::size_t k = 0; k < 3; ++k) {
            const double value = phi(q.nodes[k], mid[k], g);
            if (!std::isfinite(value) || value < 0.0)
                throw InvalidArgument("integrand returned a negative or non-finite value");
            total += q.weights[k] * value;
        }
    }
    return total;
}

double generic_functional(const ConcaveProfile& profile, const Mesh& mesh, const Integrand& phi) {
    const auto u = nodal_heights(profile, mesh);
    return generic_functional(mesh, u, phi);
}

double newton_resistance(const Mesh& mesh, std::span<const double> heights) {
    return generic_functional(mesh, heights, newton_integrand);
}

double newton_resistance(const ConcaveProfile& profile, const Mesh& mesh) {
    return generic_functional(profile, mesh, newton_integrand);
}

double lift(const Mesh& mesh, std::span<const double> u, Vec2 direction) {
    require(std::abs(norm(direction) - 1.0) < 1e-12, "lift direction must be a unit vector");
    require(u.size() == mesh.vertices.size(), "one height per mesh vertex is required");
    // Constant per triangle; the three quadrature weights sum to the area.
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec2 g = triangle_gradient(mesh, u, t);
        total += mesh.areas[t] * dot(g, direction) / (1.0 + norm2(g));
    }
    return total;
}

double lift(const ConcaveProfile& profile, const Mesh& mesh, Vec2 direction) {
    const auto u = nodal_heights(profile, mesh);
    return lift(mesh, u, direction);
}

double volume(const Mesh& mesh, std::span<const double> u) {
    require(u.size() == mesh.vertices.size(), "one height per mesh vertex is required");
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        total += mesh.areas[t] *
                 (u[static_cast<std::size_t>(tri[0])] + u[static_cast<std::size_t>(tri[1])] +
                  u[static_cast<std::size_t>(tri[2])]) /
                 3.0;
    }
    return total;
}

double volume(const ConcaveProfile& profile, const Mesh& mesh) {
    const auto u = nodal_heights(profile, mesh);
    return volume(mesh, u);
}

double free_surface(const ConcaveProfile& profile, const Mesh& mesh, const BoundarySamples& boundary) {
    const auto u = nodal_heights(profile, mesh);
    double graph = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        graph += mesh.areas[t] * std::sqrt(1.0 + norm2(triangle_gradient(mesh, u, t)));
    double wall = 0.0;
    for (std::size_t i = 0; i < boundary.points.size(); ++i)
        wall += boundary.weights[i] * eval_profile(profile, boundary.points[i]).height;
    return graph + wall;
}

json result_to_json(const FunctionalResult& result) {
    json j{{"value", result.value}, {"estimated_error", result.estimated_error}, {"mesh_h", result.mesh_h}};
    j["seed"] = result.seed ? json(*result.seed) : json(nullptr);
    j["scale"] = result.scale;
    return j;
}

FunctionalResult evaluate_with_error(const ConcaveProfile& profile, double h,
                                     const std::function<double(const ConcaveProfile&, const Mesh&)>& functional) {
    const Mesh coarse = build_mesh(profile.domain(), h);
    const Mesh fine = build_mesh(profile.domain(), 0.5 * h);
    FunctionalResult r;
    r.value = functional(profile, coarse);
    r.estimated_error = std::abs(r.value - functional(profile, fine));
    r.mesh_h = coarse.h;
    return r;
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

namespace {

constexpr double slack_tolerance = 1e-9;

AdmissibilityReport height_report(const ConcaveProfile& profile, const Mesh& mesh) {
    AdmissibilityReport r;
    const auto u = nodal_heights(profile, mesh);
    double lo = *std::min_element(u.begin(), u.end());
    double hi = *std::max_element(u.begin(), u.end());
    for (const Vec2 p : profile.domain().extreme_points()) {
        const double v = eval_profile(profile, p).height;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (profile.kind() == ProfileKind::radial) hi = std::max(hi, profile.values().front());
    r.min_height = lo;
    r.max_height = hi;
    r.nonnegativity_slack = lo;
    return r;
}

bool nonnegative(const AdmissibilityReport& r) { return r.nonnegativity_slack >= -nonnegativity_tolerance; }

bool within(double slack, double bound) { return slack >= -slack_tolerance * std::max(1.0, std::abs(bound)); }

void require_kind(const ConstraintSpec& spec, ConstraintKind kind) {
    require(spec.kind == kind, "constraint kind does not match the admissible class");
}

}  // namespace

AdmissibilityReport in_CM(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec) {
    require_kind(spec, ConstraintKind::height);
    AdmissibilityReport r = height_report(profile, mesh);
    r.kind = ConstraintKind::height;
    r.value = r.max_height;
    r.slack = spec.value - r.max_height;
    r.implied_height_bound = spec.value;
    r.implied_bound_slack = r.slack;
    r.feasible = nonnegative(r) && within(r.slack, spec.value);
    return r;
}

AdmissibilityReport in_VV(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec) {
    require_kind(spec, ConstraintKind::volume);
    AdmissibilityReport r = height_report(profile, mesh);
    r.kind = ConstraintKind::volume;
    r.value = volume(profile, mesh);
    r.slack = spec.value - r.value;
    r.implied_height_bound = (Domain::dimension + 1) * spec.value / profile.domain().measure();
    r.implied_bound_slack = r.implied_height_bound - r.max_height;
    r.feasible = nonnegative(r) && within(r.slack, spec.value);
    return r;
}

AdmissibilityReport in_HS(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec) {
    require_kind(spec, ConstraintKind::surface);
    AdmissibilityReport r = height_report(profile, mesh);
    r.kind = ConstraintKind::surface;
    r.value = free_surface(profile, mesh, make_boundary_samples(profile.domain()));
    r.slack = spec.value - r.value;
    r.implied_height_bound = Domain::dimension * spec.value / profile.domain().boundary_length();
    r.implied_bound_slack = r.implied_height_bound - r.max_height;
    r.feasible = nonnegative(r) && within(r.slack, spec.value);
    return r;
}

AdmissibilityReport in_lift_class(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec) {
    require_kind(spec, ConstraintKind::lift);
    AdmissibilityReport r = height_report(profile, mesh);
    r.kind = ConstraintKind::lift;
    r.value = lift(profile, mesh, spec.direction);
    r.slack = r.value - spec.value;
    r.implied_height_bound = spec.height;
    r.implied_bound_slack = spec.height - r.max_height;
    r.feasible = nonnegative(r) && within(r.slack, spec.value) && within(r.implied_bound_slack, spec.height);
    return r;
}

AdmissibilityReport check_admissible(const ConcaveProfile& profile, const Mesh& mesh, const ConstraintSpec& spec) {
    switch (spec.kind) {
        case ConstraintKind::height: return in_CM(profile, mesh, spec);
        case ConstraintKind::volume: return in_VV(profile, mesh, spec);
        case ConstraintKind::surface: return in_HS(profile, mesh, spec);
        case ConstraintKind::lift: return in_lift_class(profile, mesh, spec);
    }
    throw InvalidArgument("unknown constraint kind");
}

json admissibility_to_json(const AdmissibilityReport& r) {
    return {{"kind", to_string(r.kind)},
            {"feasible", r.feasible},
            {"min_height", r.min_height},
            {"max_height", r.max_height},
            {"nonnegativity_slack", r.nonnegativity_slack},
            {"value", r.value},
            {"slack", r.slack},
            {"implied_height_bound", r.implied_height_bound},
            {"implied_bound_slack", r.implied_bound_slack}};
}

// ---------------------------------------------------------------------------
// Boundary functionals
// ---------------------------------------------------------------------------

namespace {

void require_unit_normals(const TriangulatedSurface& surface) {
    for (const auto& n : surface.normals)
        require(std::abs(norm(n) - 1.0) <= 1e-9, "surface has a non-unit normal");
}

}  // namespace

double boundary_resistance(const TriangulatedSurface& surface) {
    require_unit_normals(surface);
    double total = 0.0;
    for (std::size_t f = 0; f < surface.faces.size(); ++f) {
        const double nz = std::max(surface.normals[f].z, 0.0);
        const double cube = nz * nz * nz;
        total += surface.areas[f] * cube;
    }
    return total;
}

double generic_boundary_functional(const TriangulatedSurface& surface, const BoundaryIntegrand& f) {
    require_unit_normals(surface);
    double total = 0.0;
    for (std::size_t k = 0; k < surface.faces.size(); ++k) {
        const auto& face = surface.faces[k];
        const Vec3 centroid = (1.0 / 3.0) * (surface.vertices[static_cast<std::size_t>(face[0])] +
                                             surface.vertices[static_cast<std::size_t>(face[1])] +
                                             surface.vertices[static_cast<std::size_t>(face[2])]);
        const double value = f(centroid, surface.normals[k]);
        if (!std::isfinite(value)) throw InvalidArgument("boundary integrand returned a non-finite value");
        total += surface.areas[k] * value;
    }
    return total;
}

}  // namespace newtondrag
