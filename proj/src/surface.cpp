#include "newtondrag/errors.hpp"
#include "newtondrag/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <utility>

namespace newtondrag {

double TriangulatedSurface::total_area() const {
    double total = 0.0;
    for (double a : areas) total += a;
    return total;
}

bool TriangulatedSurface::is_closed() const {
    std::map<std::pair<int, int>, int> uses;
    for (const auto& f : faces) {
        for (int e = 0; e < 3; ++e) {
            const int a = f[static_cast<std::size_t>(e)];
            const int b = f[static_cast<std::size_t>((e + 1) % 3)];
            ++uses[{std::min(a, b), std::max(a, b)}];
        }
    }
    return std::all_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second == 2; });
}

TriangulatedSurface make_surface(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces) {
    TriangulatedSurface s;
    s.vertices = std::move(vertices);
    s.faces = std::move(faces);
    s.areas.reserve(s.faces.size());
    s.normals.reserve(s.faces.size());
    for (const auto& f : s.faces) {
        for (int idx : f)
            require(idx >= 0 && static_cast<std::size_t>(idx) < s.vertices.size(), "face index out of range");
        const Vec3 a = s.vertices[static_cast<std::size_t>(f[0])];
        const Vec3 c = cross(s.vertices[static_cast<std::size_t>(f[1])] - a, s.vertices[static_cast<std::size_t>(f[2])] - a);
        const double len = norm(c);
        s.areas.push_back(0.5 * len);
        s.normals.push_back(len > 0.0 ? (1.0 / len) * c : Vec3{});
    }
    return s;
}

TriangulatedSurface graph_surface(const ConcaveProfile& profile, const Mesh& mesh) {
    const auto heights = nodal_heights(profile, mesh);
    return graph_surface(mesh, heights);
}

TriangulatedSurface graph_surface(const Mesh& mesh, std::span<const double> heights) {
    require(heights.size() == mesh.vertices.size(), "one height per mesh vertex is required");
    const std::size_t nv = mesh.vertices.size();
    TriangulatedSurface s;
    s.vertices.reserve(2 * nv);
    for (std::size_t i = 0; i < nv; ++i) s.vertices.push_back({mesh.vertices[i].x, mesh.vertices[i].y, heights[i]});

    auto add_top = [&](const std::array<int, 3>& t) {
        const Vec3 a = s.vertices[static_cast<std::size_t>(t[0])];
        const Vec3 c = cross(s.vertices[static_cast<std::size_t>(t[1])] - a, s.vertices[static_cast<std::size_t>(t[2])] - a);
        const double len = norm(c);
        s.faces.push_back(t);
        s.areas.push_back(0.5 * len);
        s.normals.push_back((1.0 / len) * c);
    };

    const bool flat = std::all_of(heights.begin(), heights.end(), [](double u) { return u <= 0.0; });
    if (flat) {
        for (const auto& t : mesh.triangles) add_top(t);
        s.degenerate = true;
        return s;
    }

    std::vector<int> bottom(nv);
    std::vector<char> on_boundary(nv, 0);
    for (int b : mesh.boundary) on_boundary[static_cast<std::size_t>(b)] = 1;
    for (std::size_t i = 0; i < nv; ++i) {
        if (on_boundary[i] && heights[i] <= 0.0) {
            bottom[i] = static_cast<int>(i);
        } else {
            bottom[i] = static_cast<int>(s.vertices.size());
            s.vertices.push_back({mesh.vertices[i].x, mesh.vertices[i].y, 0.0});
        }
    }

    for (const auto& t : mesh.triangles) add_top(t);

    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        s.faces.push_back({bottom[static_cast<std::size_t>(t[0])], bottom[static_cast<std::size_t>(t[2])],
                           bottom[static_cast<std::size_t>(t[1])]});
        s.areas.push_back(mesh.areas[k]);
        s.normals.push_back({0.0, 0.0, -1.0});
    }

    const std::size_t nb = mesh.boundary.size();
    for (std::size_t k = 0; k < nb; ++k) {
        const int i = mesh.boundary[k];
        const int j = mesh.boundary[(k + 1) % nb];
        const Vec2 e = mesh.vertices[static_cast<std::size_t>(j)] - mesh.vertices[static_cast<std::size_t>(i)];
        const double len = norm(e);
        const Vec3 outward{e.y / len, -e.x / len, 0.0};
        const int bi = bottom[static_cast<std::size_t>(i)];
        const int bj = bottom[static_cast<std::size_t>(j)];
        const double ui = heights[static_cast<std::size_t>(i)];
        const double uj = heights[static_cast<std::size_t>(j)];
        if (bj != j) {
            s.faces.push_back({bi, bj, j});
            s.areas.push_back(0.5 * len * uj);
            s.normals.push_back(outward);
        }
        if (bi != i) {
            s.faces.push_back({bi, j, i});
            s.areas.push_back(0.5 * len * ui);
            s.normals.push_back(outward);
        }
    }
    return s;
}

TriangulatedSurface make_sphere(double radius, int subdivisions, Vec3 centre) {
    require(radius > 0.0 && subdivisions >= 0, "invalid sphere parameters");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v{{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) p = (1.0 / norm(p)) * p;
    std::vector<std::array<int, 3>> f{{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
                                      {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                      {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
                                      {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = 0.5 * (v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]);
            m = (1.0 / norm(m)) * m;
            v.push_back(m);
            const int id = static_cast<int>(v.size()) - 1;
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(4 * f.size());
        for (const auto& tri : f) {
            const int a = mid(tri[0], tri[1]);
            const int b = mid(tri[1], tri[2]);
            const int c = mid(tri[2], tri[0]);
            next.push_back({tri[0], a, c});
            next.push_back({tri[1], b, a});
            next.push_back({tri[2], c, b});
            next.push_back({a, b, c});
        }
        f = std::move(next);
    }
    for (auto& p : v) p = centre + radius * p;
    return make_surface(std::move(v), std::move(f));
}

void write_obj(std::ostream& out, const TriangulatedSurface& surface) {
    char line[128];
    out << "# newtondrag surface: " << surface.vertices.size() << " vertices, " << surface.faces.size()
        << " faces\n";
    for (const auto& p : surface.vertices) {
        std::snprintf(line, sizeof line, "v %.17g %.17g %.17g\n", p.x, p.y, p.z);
        out << line;
    }
    for (const auto& f : surface.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace newtondrag
