#pragma once

#include "newtondrag/vec.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace newtondrag {

// ---------------------------------------------------------------------------
// Cross-section domain
// ---------------------------------------------------------------------------

enum class DomainKind { disk, polygon };

/// Planar convex cross-section of the body. Disks are centred at the origin;
/// polygons are strictly convex and counterclockwise.
class Domain {
public:
    /// Cross-section dimension d; the body lives in d + 1 = 3 dimensions.
    static constexpr int dimension = 2;

    DomainKind kind() const { return kind_; }
    double radius() const { return radius_; }
    const std::vector<Vec2>& vertices() const { return vertices_; }
    double measure() const { return measure_; }
    double boundary_length() const { return boundary_length_; }
    double diameter() const;

    /// Membership test with a tolerance relative to the diameter.
    bool contains(Vec2 x, double rel_tol = 1e-9) const;

    /// Minimum of the linear form a·x over the (exact) domain.
    double min_linear(Vec2 a) const;

    /// Points whose nonnegativity certifies nonnegativity of a concave function:
    /// polygon vertices, or `disk_samples` equally spaced boundary points.
    std::vector<Vec2> extreme_points(int disk_samples = 256) const;

    friend Domain make_disk(double radius);
    friend Domain make_polygon(std::vector<Vec2> vertices);

private:
    Domain() = default;

    DomainKind kind_ = DomainKind::disk;
    double radius_ = 0.0;
    std::vector<Vec2> vertices_;
    double measure_ = 0.0;
    double boundary_length_ = 0.0;
};

Domain make_disk(double radius);
Domain make_polygon(std::vector<Vec2> vertices);

/// Quadrature points on ∂Ω with arclength weights summing to |∂Ω|.
struct BoundarySamples {
    std::vector<Vec2> points;
    std::vector<double> weights;
};

BoundarySamples make_boundary_samples(const Domain& domain, int count = 256);

// ---------------------------------------------------------------------------
// Triangulation
// ---------------------------------------------------------------------------

/// Three-point edge-midpoint rule; exact for quadratics on the triangle.
struct QuadRule {
    std::array<Vec2, 3> nodes;
    std::array<double, 3> weights;
};

struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  // counterclockwise
    std::vector<double> areas;
    std::vector<QuadRule> quad;
    std::vector<int> boundary;  // counterclockwise boundary loop (vertex indices)
    double h = 0.0;             // max triangle diameter
    double measure = 0.0;       // exact polygonal area of the triangulation
    double target_h = 0.0;
};

/// Disks use a deterministic concentric-ring triangulation of an inscribed
/// polygon; polygons are triangulated exactly and refined uniformly.
Mesh build_mesh(const Domain& domain, double h);

// ---------------------------------------------------------------------------
// Concave profiles
// ---------------------------------------------------------------------------

enum class ProfileKind { radial, polyhedral };

/// Affine piece x ↦ slope·x + offset.
struct AffinePiece {
    Vec2 slope;
    double offset = 0.0;

    double operator()(Vec2 x) const { return dot(slope, x) + offset; }
};

class ConcaveProfile {
public:
    /// Radial knots r₀ = 0 < … < r_n = R with concave, nonincreasing values.
    static ConcaveProfile radial(std::vector<double> knots, std::vector<double> values);

    /// u(x) = min(cap, min_k piece_k(x)). Concave by construction.
    static ConcaveProfile polyhedral(Domain domain, std::vector<AffinePiece> pieces, double cap);

    /// u ≡ height on the domain.
    static ConcaveProfile constant(Domain domain, double height);

    ProfileKind kind() const { return kind_; }
    const Domain& domain() const { return domain_; }
    double cap() const { return cap_; }

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<AffinePiece>& pieces() const { return pieces_; }

private:
    explicit ConcaveProfile(Domain domain) : domain_(std::move(domain)) {}

    ProfileKind kind_ = ProfileKind::polyhedral;
    Domain domain_;
    double cap_ = 0.0;
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<AffinePiece> pieces_;
};

struct ProfileSample {
    double height = 0.0;
    Vec2 gradient;
};

/// Height and a gradient selection. At kinks of a polyhedral profile the
/// active piece with the lowest index wins; on the plateau the gradient is 0.
ProfileSample eval_profile(const ConcaveProfile& profile, Vec2 x);

/// Index of the active polyhedral piece at x, or -1 on the plateau.
int active_piece(const ConcaveProfile& profile, Vec2 x);

/// Profile heights at every mesh vertex.
std::vector<double> nodal_heights(const ConcaveProfile& profile, const Mesh& mesh);

/// Worst violation of u(λx+(1-λ)y) ≥ λu(x)+(1-λ)u(y) over random pairs in Ω
/// (0 when no violation exceeds the tolerance is observed).
double concavity_violation(const std::function<double(Vec2)>& height, const Domain& domain,
                           int pairs, std::uint64_t seed);

/// Uniform random point in the domain.
class Rng;
Vec2 random_point(const Domain& domain, Rng& rng);

// ---------------------------------------------------------------------------
// Body surfaces
// ---------------------------------------------------------------------------

struct TriangulatedSurface {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;  // outward orientation
    std::vector<double> areas;
    std::vector<Vec3> normals;  // unit outward normals
    bool degenerate = false;    // flat body emitted as an open top-only surface

    double total_area() const;
    /// Every undirected edge is shared by exactly two faces.
    bool is_closed() const;
};

/// Builds areas and normals from vertex positions.
TriangulatedSurface make_surface(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces);

/// Graph of u over the mesh closed by a vertical wall over ∂Ω and a flat bottom
/// at height 0. Boundary vertices where u = 0 are shared by top and bottom.
TriangulatedSurface graph_surface(const ConcaveProfile& profile, const Mesh& mesh);
TriangulatedSurface graph_surface(const Mesh& mesh, std::span<const double> heights);

/// Icosphere with `subdivisions` refinement levels.
TriangulatedSurface make_sphere(double radius, int subdivisions, Vec3 centre = {});

/// ASCII OBJ: vertices, then faces with 1-based indices.
void write_obj(std::ostream& out, const TriangulatedSurface& surface);

}  // namespace newtondrag
