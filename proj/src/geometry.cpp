#include "newtondrag/geometry.hpp"

#include "newtondrag/errors.hpp"
#include "newtondrag/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace newtondrag {

namespace {

constexpr double pi = std::numbers::pi;

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

Domain make_disk(double radius) {
    require(std::isfinite(radius) && radius > 0.0, "disk radius must be positive");
    Domain d;
    d.kind_ = DomainKind::disk;
    d.radius_ = radius;
    d.measure_ = pi * radius * radius;
    d.boundary_length_ = 2.0 * pi * radius;
    return d;
}

Domain make_polygon(std::vector<Vec2> vertices) {
    const std::size_t n = vertices.size();
    require(n >= 3, "polygon needs at least 3 vertices");
    for (const auto& v : vertices) require(finite(v), "polygon vertex is not finite");

    double scale = 0.0;
    for (const auto& v : vertices) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
    const double eps = 1e-14 * scale * scale;

    double area2 = 0.0;
    double perimeter = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices[i];
        const Vec2 b = vertices[(i + 1) % n];
        const Vec2 c = vertices[(i + 2) % n];
        const double turn = cross(b - a, c - b);
        require(std::abs(turn) > eps, "polygon has a collinear vertex triple");
        require(turn > 0.0, "polygon is not strictly convex and counterclockwise");
        area2 += cross(a, b);
        perimeter += norm(b - a);
    }
    // All left turns with total winding one; a self-intersecting star would wind twice.
    double winding = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
        const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        winding += std::atan2(cross(e0, e1), dot(e0, e1));
    }
    require(std::abs(winding - 2.0 * pi) < 1e-6, "polygon is self-intersecting");

    Domain d;
    d.kind_ = DomainKind::polygon;
    d.vertices_ = std::move(vertices);
    d.measure_ = 0.5 * area2;
    d.boundary_length_ = perimeter;
    return d;
}

double Domain::diameter() const {
    if (kind_ == DomainKind::disk) return 2.0 * radius_;
    double best = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        for (std::size_t j = i + 1; j < vertices_.size(); ++j)
            best = std::max(best, norm(vertices_[i] - vertices_[j]));
    return best;
}

bool Domain::contains(Vec2 x, double rel_tol) const {
    const double tol = rel_tol * diameter();
    if (kind_ == DomainKind::disk) return norm(x) <= radius_ + tol;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices_[i];
        const Vec2 e = vertices_[(i + 1) % n] - a;
        if (cross(e, x - a) < -tol * norm(e)) return false;
    }
    return true;
}

double Domain::min_linear(Vec2 a) const {
    if (kind_ == DomainKind::disk) return -radius_ * norm(a);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices_) best = std::min(best, dot(a, v));
    return best;
}

std::vector<Vec2> Domain::extreme_points(int disk_samples) const {
    if (kind_ == DomainKind::polygon) return vertices_;
    std::vector<Vec2> points(static_cast<std::size_t>(disk_samples));
    for (int i = 0; i < disk_samples; ++i) {
        const double theta = 2.0 * pi * i / disk_samples;
        points[static_cast<std::size_t>(i)] = {radius_ * std::cos(theta), radius_ * std::sin(theta)};
    }
    return points;
}

BoundarySamples make_boundary_samples(const Domain& domain, int count) {
    require(count >= 64, "at least 64 boundary samples are required");
    BoundarySamples out;
    if (domain.kind() == DomainKind::disk) {
        const double w = domain.boundary_length() / count;
        for (int i = 0; i < count; ++i) {
            const double theta = 2.0 * pi * (i + 0.5) / count;
            out.points.push_back({domain.radius() * std::cos(theta), domain.radius() * std::sin(theta)});
            out.weights.push_back(w);
        }
        return out;
    }
    // Midpoint rule per edge, sample counts proportional to edge length.
    const auto& v = domain.vertices();
    const std::size_t n = v.size();
    const int per_edge_min = std::max(1, count / static_cast<int>(n) / 4);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i];
        const Vec2 b = v[(i + 1) % n];
        const double len = norm(b - a);
        const int k = std::max(per_edge_min,
                               static_cast<int>(std::ceil(count * len / domain.boundary_length())));
        for (int j = 0; j < k; ++j) {
            const double s = (j + 0.5) / k;
            out.points.push_back(a + s * (b - a));
            out.weights.push_back(len / k);
        }
    }
    return out;
}

Vec2 random_point(const Domain& domain, Rng& rng) {
    if (domain.kind() == DomainKind::disk) {
        const double r = domain.radius() * std::sqrt(rng.uniform());
        const double theta = 2.0 * pi * rng.uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& p : domain.vertices()) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    for (;;) {
        const Vec2 p{rng.uniform(xmin, xmax), rng.uniform(ymin, ymax)};
        if (domain.contains(p, 0.0)) return p;
    }
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

ConcaveProfile ConcaveProfile::radial(std::vector<double> knots, std::vector<double> values) {
    require(knots.size() >= 2, "radial profile needs at least two knots");
    require(knots.size() == values.size(), "radial knots and values differ in length");
    require(knots.front() == 0.0, "radial knots must start at 0");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        require(std::isfinite(knots[i]) && std::isfinite(values[i]), "radial profile is not finite");
        require(values[i] >= 0.0, "radial profile values must be nonnegative");
        if (i > 0) require(knots[i] > knots[i - 1], "radial knots must be strictly increasing");
    }
    const double scale = std::max(values.front(), knots.back());
    const double tol = 1e-12 * std::max(1.0, scale);
    double previous_slope = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double slope = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
        require(slope <= previous_slope + tol * (1.0 + std::abs(slope)),
                "radial profile is not concave and nonincreasing");
        previous_slope = std::min(previous_slope, slope);
    }
    ConcaveProfile p(make_disk(knots.back()));
    p.kind_ = ProfileKind::radial;
    p.cap_ = values.front();
    p.knots_ = std::move(knots);
    p.values_ = std::move(values);
    return p;
}

ConcaveProfile ConcaveProfile::polyhedral(Domain domain, std::vector<AffinePiece> pieces, double cap) {
    require(std::isfinite(cap) && cap >= 0.0, "profile cap must be finite and nonnegative");
    for (const auto& piece : pieces)
        require(finite(piece.slope) && std::isfinite(piece.offset), "affine piece is not finite");
    ConcaveProfile p(std::move(domain));
    p.kind_ = ProfileKind::polyhedral;
    p.cap_ = cap;
    p.pieces_ = std::move(pieces);
    return p;
}

ConcaveProfile ConcaveProfile::constant(Domain domain, double height) {
    return polyhedral(std::move(domain), {}, height);
}

int active_piece(const ConcaveProfile& profile, Vec2 x) {
    double best = profile.cap();
    int index = -1;
    const auto& pieces = profile.pieces();
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const double value = pieces[k](x);
        if (value < best) {
            best = value;
            index = static_cast<int>(k);
        }
    }
    return index;
}

ProfileSample eval_profile(const ConcaveProfile& profile, Vec2 x) {
    const Domain& domain = profile.domain();
    require(finite(x), "evaluation point is not finite");
    require(domain.contains(x), "evaluation point lies outside the domain");

    if (profile.kind() == ProfileKind::polyhedral) {
        const int k = active_piece(profile, x);
        if (k < 0) return {profile.cap(), {}};
        const auto& piece = profile.pieces()[static_cast<std::size_t>(k)];
        return {piece(x), piece.slope};
    }

    const auto& r = profile.knots();
    const auto& u = profile.values();
    const double radius = std::min(norm(x), r.back());
    // A knot belongs to the segment on its inside (lower index).
    auto it = std::lower_bound(r.begin() + 1, r.end(), radius);
    const std::size_t seg = static_cast<std::size_t>(it - r.begin()) - 1;
    const double slope = (u[seg + 1] - u[seg]) / (r[seg + 1] - r[seg]);
    const double height = u[seg] + slope * (radius - r[seg]);
    if (radius == 0.0 || slope == 0.0) return {height, {}};
    const double s = slope / norm(x);
    return {height, {s * x.x, s * x.y}};
}

std::vector<double> nodal_heights(const ConcaveProfile& profile, const Mesh& mesh) {
    std::vector<double> heights(mesh.vertices.size());
    for (std::size_t i = 0; i < heights.size(); ++i)
        heights[i] = eval_profile(profile, mesh.vertices[i]).height;
    return heights;
}

double concavity_violation(const std::function<double(Vec2)>& height, const Domain& domain, int pairs,
                           std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const Vec2 x = random_point(domain, rng);
        const Vec2 y = random_point(domain, rng);
        const double lambda = rng.uniform(1e-3, 1.0 - 1e-3);
        const double chord = lambda * height(x) + (1.0 - lambda) * height(y);
        const double mid = height(lambda * x + (1.0 - lambda) * y);
        // rounding in the affine pieces produces violations of a few ulps
        const double tol = 1e-12 * std::max({1.0, std::abs(chord), std::abs(mid)});
        if (chord - mid > tol) worst = std::max(worst, chord - mid);
    }
    return worst;
}

}  // namespace newtondrag
