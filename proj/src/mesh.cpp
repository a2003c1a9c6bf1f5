#include "newtondrag/errors.hpp"
#include "newtondrag/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

namespace newtondrag {

namespace {

void finalize(Mesh& mesh) {
    mesh.areas.clear();
    mesh.quad.clear();
    mesh.h = 0.0;
    mesh.measure = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec2 a = mesh.vertices[static_cast<std::size_t>(t[0])];
        const Vec2 b = mesh.vertices[static_cast<std::size_t>(t[1])];
        const Vec2 c = mesh.vertices[static_cast<std::size_t>(t[2])];
        const double area = 0.5 * cross(b - a, c - a);
        mesh.areas.push_back(area);
        mesh.measure += area;
        mesh.h = std::max({mesh.h, norm(b - a), norm(c - b), norm(a - c)});
        const double w = area / 3.0;
        mesh.quad.push_back({{0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)}, {w, w, w}});
    }
}

// Ring i carries 6i vertices; neighbouring rings are stitched by sweeping angles.
Mesh disk_mesh(double radius, double h) {
    const int rings = std::max(1, static_cast<int>(std::ceil(radius / h)));
    Mesh mesh;
    mesh.vertices.push_back({0.0, 0.0});
    std::vector<int> inner{0};
    for (int i = 1; i <= rings; ++i) {
        const double r = radius * i / rings;
        const int count = 6 * i;
        std::vector<int> outer;
        outer.reserve(static_cast<std::size_t>(count));
        for (int j = 0; j < count; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / count;
            outer.push_back(static_cast<int>(mesh.vertices.size()));
            mesh.vertices.push_back({r * std::cos(theta), r * std::sin(theta)});
        }
        const int n_in = static_cast<int>(inner.size());
        const int n_out = count;
        auto in = [&](int k) { return inner[static_cast<std::size_t>(k % n_in)]; };
        auto out = [&](int k) { return outer[static_cast<std::size_t>(k % n_out)]; };
        if (n_in == 1) {
            for (int b = 0; b < n_out; ++b) mesh.triangles.push_back({in(0), out(b), out(b + 1)});
        } else {
            int a = 0;
            int b = 0;
            while (a < n_in || b < n_out) {
                // Compare next angles exactly using integer cross-multiplication.
                const bool advance_outer =
                    b < n_out && (a >= n_in || static_cast<long>(b + 1) * n_in <= static_cast<long>(a + 1) * n_out);
                if (advance_outer) {
                    mesh.triangles.push_back({in(a), out(b), out(b + 1)});
                    ++b;
                } else {
                    mesh.triangles.push_back({in(a), out(b), in(a + 1)});
                    ++a;
                }
            }
        }
        inner = std::move(outer);
    }
    mesh.boundary = inner;
    return mesh;
}

// Fan from the vertex centroid, each fan triangle subdivided into m² pieces.
Mesh polygon_mesh(const std::vector<Vec2>& corners, double h) {
    const int n = static_cast<int>(corners.size());
    Vec2 centre;
    for (const auto& c : corners) centre = centre + c;
    centre = (1.0 / n) * centre;

    double longest = 0.0;
    for (int i = 0; i < n; ++i) {
        longest = std::max(longest, norm(corners[static_cast<std::size_t>((i + 1) % n)] -
                                         corners[static_cast<std::size_t>(i)]));
        longest = std::max(longest, norm(corners[static_cast<std::size_t>(i)] - centre));
    }
    const int m = std::max(1, static_cast<int>(std::ceil(longest / h)));

    // Global corner ids: polygon vertices 0..n-1, centre n.
    auto corner = [&](int id) { return id == n ? centre : corners[static_cast<std::size_t>(id)]; };

    Mesh mesh;
    std::map<std::pair<double, double>, int> index_of;
    auto vertex = [&](Vec2 p) {
        auto [it, inserted] = index_of.try_emplace({p.x, p.y}, static_cast<int>(mesh.vertices.size()));
        if (inserted) mesh.vertices.push_back(p);
        return it->second;
    };
    // Points on a fan edge are computed from the lower-id endpoint so that
    // both neighbouring triangles produce bitwise identical coordinates.
    auto edge_point = [&](int p, int q, int k) {
        if (p > q) {
            std::swap(p, q);
            k = m - k;
        }
        if (k == 0) return corner(p);
        if (k == m) return corner(q);
        const double s = static_cast<double>(k) / m;
        return corner(p) + s * (corner(q) - corner(p));
    };

    for (int f = 0; f < n; ++f) {
        const std::array<int, 3> ids{n, f, (f + 1) % n};
        const Vec2 c0 = corner(ids[0]);
        const Vec2 c1 = corner(ids[1]);
        const Vec2 c2 = corner(ids[2]);
        // Lattice point with barycentric weights (m-i-j, i, j)/m.
        auto lattice = [&](int i, int j) {
            const int k0 = m - i - j;
            if (k0 == 0) return vertex(edge_point(ids[1], ids[2], j));
            if (i == 0) return vertex(edge_point(ids[0], ids[2], j));
            if (j == 0) return vertex(edge_point(ids[0], ids[1], i));
            const Vec2 p = c0 + (static_cast<double>(i) / m) * (c1 - c0) + (static_cast<double>(j) / m) * (c2 - c0);
            return vertex(p);
        };
        for (int i = 0; i < m; ++i) {
            for (int j = 0; i + j < m; ++j) {
                mesh.triangles.push_back({lattice(i, j), lattice(i + 1, j), lattice(i, j + 1)});
                if (i + j + 1 < m) mesh.triangles.push_back({lattice(i + 1, j), lattice(i + 1, j + 1), lattice(i, j + 1)});
            }
        }
    }
    for (int f = 0; f < n; ++f)
        for (int k = 0; k < m; ++k) mesh.boundary.push_back(vertex(edge_point(f, (f + 1) % n, k)));
    return mesh;
}

}  // namespace

Mesh build_mesh(const Domain& domain, double h) {
    require(std::isfinite(h) && h > 0.0, "mesh size must be positive");
    require(h <= domain.diameter(), "mesh size exceeds the domain diameter");
    Mesh mesh = domain.kind() == DomainKind::disk ? disk_mesh(domain.radius(), h)
                                                  : polygon_mesh(domain.vertices(), h);
    mesh.target_h = h;
    finalize(mesh);
    return mesh;
}

}  // namespace newtondrag
