#include "newtondrag/particle_oracle.hpp"

#include "newtondrag/errors.hpp"
#include "newtondrag/parallel.hpp"
#include "newtondrag/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace newtondrag {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double component(Vec3 v, int axis) { return axis == 0 ? v.x : (axis == 1 ? v.y : v.z); }

Vec3 min3(Vec3 a, Vec3 b) { return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)}; }
Vec3 max3(Vec3 a, Vec3 b) { return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)}; }

// Entry interval of a ray with an axis-aligned box, or false.
bool slab(Vec3 lo, Vec3 hi, Vec3 origin, Vec3 direction, double t_max, double& t_enter) {
    double t0 = 0.0;
    double t1 = t_max;
    for (int axis = 0; axis < 3; ++axis) {
        const double o = component(origin, axis);
        const double d = component(direction, axis);
        const double a = component(lo, axis);
        const double b = component(hi, axis);
        if (d == 0.0) {
            if (o < a || o > b) return false;
            continue;
        }
        double ta = (a - o) / d;
        double tb = (b - o) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    t_enter = t0;
    return true;
}

// Orthonormal pair spanning the plane orthogonal to the unit vector w.
std::pair<Vec3, Vec3> plane_frame(Vec3 w) {
    const Vec3 helper = std::abs(w.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    Vec3 e1 = cross(w, helper);
    e1 = (1.0 / norm(e1)) * e1;
    return {e1, cross(w, e1)};
}

}  // namespace

RayTracer::RayTracer(const TriangulatedSurface& surface) : surface_(surface) {
    require(!surface.faces.empty(), "surface has no faces");
    std::vector<Vec3> centroids;
    box_min_ = {inf, inf, inf};
    box_max_ = {-inf, -inf, -inf};
    for (std::size_t f = 0; f < surface.faces.size(); ++f) {
        if (!(surface.areas[f] > 0.0)) continue;
        const auto& tri = surface.faces[f];
        const Vec3 a = surface.vertices[tri[0]];
        const Vec3 b = surface.vertices[tri[1]];
        const Vec3 c = surface.vertices[tri[2]];
        order_.push_back(static_cast<int>(f));
        centroids.push_back((1.0 / 3.0) * (a + b + c));
        box_min_ = min3(box_min_, min3(a, min3(b, c)));
        box_max_ = max3(box_max_, max3(a, max3(b, c)));
    }
    require(!order_.empty(), "surface has no faces of positive area");
    // centroids is indexed like order_ during the build
    nodes_.reserve(2 * order_.size());
    build(0, static_cast<int>(order_.size()), centroids);
}

int RayTracer::build(int begin, int end, std::vector<Vec3>& centroids) {
    Node node;
    node.lo = {inf, inf, inf};
    node.hi = {-inf, -inf, -inf};
    Vec3 clo = node.lo;
    Vec3 chi = node.hi;
    for (int i = begin; i < end; ++i) {
        const auto& tri = surface_.faces[static_cast<std::size_t>(order_[i])];
        for (int k : tri) {
            node.lo = min3(node.lo, surface_.vertices[k]);
            node.hi = max3(node.hi, surface_.vertices[k]);
        }
        clo = min3(clo, centroids[i]);
        chi = max3(chi, centroids[i]);
    }
    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= 4) {
        nodes_[index].begin = begin;
        nodes_[index].end = end;
        return index;
    }
    const Vec3 extent = chi - clo;
    const int axis = extent.x >= extent.y && extent.x >= extent.z ? 0 : (extent.y >= extent.z ? 1 : 2);
    const int mid = begin + (end - begin) / 2;
    // Sort an index permutation so centroids and faces move together.
    std::vector<int> perm(static_cast<std::size_t>(end - begin));
    for (int i = begin; i < end; ++i) perm[static_cast<std::size_t>(i - begin)] = i;
    std::nth_element(perm.begin(), perm.begin() + (mid - begin), perm.end(), [&](int a, int b) {
        const double ca = component(centroids[a], axis);
        const double cb = component(centroids[b], axis);
        return ca < cb || (ca == cb && order_[a] < order_[b]);
    });
    std::vector<int> faces(perm.size());
    std::vector<Vec3> cents(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        faces[i] = order_[perm[i]];
        cents[i] = centroids[perm[i]];
    }
    std::copy(faces.begin(), faces.end(), order_.begin() + begin);
    std::copy(cents.begin(), cents.end(), centroids.begin() + begin);
    const int left = build(begin, mid, centroids);
    const int right = build(mid, end, centroids);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
}

// Watertight ray–triangle test (shear to ray space, signed edge functions).
bool RayTracer::intersect_face(int face, Vec3 origin, Vec3 direction, double t_min, double& t) const {
    const auto& tri = surface_.faces[static_cast<std::size_t>(face)];
    const double ad[3] = {std::abs(direction.x), std::abs(direction.y), std::abs(direction.z)};
    int kz = ad[0] >= ad[1] && ad[0] >= ad[2] ? 0 : (ad[1] >= ad[2] ? 1 : 2);
    int kx = (kz + 1) % 3;
    int ky = (kx + 1) % 3;
    const double dz = component(direction, kz);
    if (dz < 0.0) std::swap(kx, ky);
    const double sx = component(direction, kx) / dz;
    const double sy = component(direction, ky) / dz;
    const double sz = 1.0 / dz;

    std::array<double, 3> px, py, pz;
    for (int i = 0; i < 3; ++i) {
        const Vec3 p = surface_.vertices[tri[static_cast<std::size_t>(i)]] - origin;
        const double z = component(p, kz);
        px[i] = component(p, kx) - sx * z;
        py[i] = component(p, ky) - sy * z;
        pz[i] = sz * z;
    }
    const double u = px[2] * py[1] - py[2] * px[1];
    const double v = px[0] * py[2] - py[0] * px[2];
    const double w = px[1] * py[0] - py[1] * px[0];
    if ((u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0)) return false;
    const double det = u + v + w;
    if (det == 0.0) return false;
    t = (u * pz[0] + v * pz[1] + w * pz[2]) / det;
    return t > t_min;
}

RayHit RayTracer::first_hit(Vec3 origin, Vec3 direction, double t_min, int skip_face) const {
    RayHit best{-1, inf};
    std::array<int, 128> stack;
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
        double t_enter = 0.0;
        if (!slab(node.lo, node.hi, origin, direction, best.t, t_enter)) continue;
        if (node.left < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const int face = order_[static_cast<std::size_t>(i)];
                if (face == skip_face) continue;
                double t = 0.0;
                if (!intersect_face(face, origin, direction, t_min, t)) continue;
                if (t < best.t || (t == best.t && face < best.face)) best = {face, t};
            }
            continue;
        }
        if (top + 2 > static_cast<int>(stack.size())) throw NumericalFailure("ray traversal stack overflow");
        stack[top++] = node.right;
        stack[top++] = node.left;
    }
    if (best.face < 0) best.t = 0.0;
    return best;
}

Vec3 reflect(Vec3 v, Vec3 normal) { return v - (2.0 * dot(v, normal)) * normal; }

namespace {

struct BatchResult {
    long rays = 0;
    long hits = 0;
    long leaks = 0;
    Vec3 sum;
};

// Entry geometry for a fixed direction: bounding rectangle of the projection.
struct EntryRect {
    Vec3 base;  // corner, already moved behind the body
    Vec3 e1, e2;
    double w1 = 0.0, w2 = 0.0;
};

EntryRect entry_rect(const RayTracer& tracer, Vec3 dir) {
    const auto [e1, e2] = plane_frame(dir);
    const auto& s = tracer.surface();
    double lo1 = inf, hi1 = -inf, lo2 = inf, hi2 = -inf, lo3 = inf;
    for (const Vec3 p : s.vertices) {
        lo1 = std::min(lo1, dot(p, e1));
        hi1 = std::max(hi1, dot(p, e1));
        lo2 = std::min(lo2, dot(p, e2));
        hi2 = std::max(hi2, dot(p, e2));
        lo3 = std::min(lo3, dot(p, dir));
    }
    const double back = lo3 - 1.0 - tracer.diagonal();
    return {lo1 * e1 + lo2 * e2 + back * dir, e1, e2, hi1 - lo1, hi2 - lo2};
}

Vec3 sample_velocity(const VelocityDensity& density, const std::vector<double>& cumulative, Rng& rng) {
    switch (density.kind) {
        case VelocityDensity::Kind::dirac: return density.mean;
        case VelocityDensity::Kind::gaussian: {
            const double a = rng.normal();
            const double b = rng.normal();
            const double c = rng.normal();
            return density.mean + density.sigma * Vec3{a, b, c};
        }
        case VelocityDensity::Kind::empirical: {
            const double u = rng.uniform() * cumulative.back();
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                                 density.samples.size() - 1);
            return density.samples[i];
        }
    }
    return {};
}

}  // namespace

ImpactRun simulate_drag(const TriangulatedSurface& surface, const VelocityDensity& density, long n_rays,
                        std::uint64_t seed, std::size_t threads) {
    require(n_rays >= 1000, "at least 1000 rays are required");
    const RayTracer tracer(surface);
    const double eps = 1e-12 * tracer.diagonal();

    const bool dirac = density.kind == VelocityDensity::Kind::dirac;
    std::optional<EntryRect> rect;
    double projected = 0.0;
    if (dirac) {
        const double speed = norm(density.mean);
        const Vec3 dir = (1.0 / speed) * density.mean;
        rect = entry_rect(tracer, dir);
        for (std::size_t f = 0; f < surface.faces.size(); ++f)
            projected += surface.areas[f] * std::max(0.0, -dot(surface.normals[f], dir));
        if (!(rect->w1 * rect->w2 > 0.0) || !(projected > 0.0))
            throw InvalidArgument("surface has zero projected area along the flow");
    }
    const Vec3 centre = 0.5 * (tracer.box_min() + tracer.box_max());
    const double radius = 0.5 * tracer.diagonal();
    if (!dirac && !(radius > 0.0)) throw InvalidArgument("surface has zero projected area");

    std::vector<double> cumulative;
    if (density.kind == VelocityDensity::Kind::empirical) {
        double acc = 0.0;
        for (double w : density.weights) cumulative.push_back(acc += w);
    }

    std::vector<BatchResult> batches(impact_batches);
    auto run_batch = [&](std::size_t b) {
        BatchResult& out = batches[b];
        out.rays = n_rays / impact_batches + (static_cast<long>(b) < n_rays % impact_batches ? 1 : 0);
        Rng rng(mix_seed(seed, b));
        for (long i = 0; i < out.rays; ++i) {
            const Vec3 v = sample_velocity(density, cumulative, rng);
            const double speed = norm(v);
            Vec3 origin;
            double entry_area = 0.0;
            if (dirac) {
                const double a = rng.uniform();
                const double c = rng.uniform();
                origin = rect->base + (a * rect->w1) * rect->e1 + (c * rect->w2) * rect->e2;
                entry_area = rect->w1 * rect->w2;
            } else {
                // Uniform point on the disk through the bounding sphere, orthogonal to v.
                const double a = rng.uniform();
                const double c = rng.uniform();
                if (!(speed > 0.0)) continue;
                const Vec3 dir = (1.0 / speed) * v;
                const auto [e1, e2] = plane_frame(dir);
                const double rr = radius * std::sqrt(a);
                const double phi = 2.0 * std::numbers::pi * c;
                origin = centre + (rr * std::cos(phi)) * e1 + (rr * std::sin(phi)) * e2 - (radius + 1.0) * dir;
                entry_area = std::numbers::pi * radius * radius;
            }
            const Vec3 dir = (1.0 / speed) * v;
            const RayHit hit = tracer.first_hit(origin, dir, eps);
            if (hit.face < 0) continue;
            const Vec3 nu = surface.normals[static_cast<std::size_t>(hit.face)];
            const double vn = dot(v, nu);
            if (vn > 0.0) {
                ++out.leaks;  // entered through a gap and struck a face from behind
                continue;
            }
            ++out.hits;
            out.sum += (entry_area * speed * 2.0 * vn) * nu;
        }
    };
    parallel_for(batches.size(), run_batch, threads == 0 ? default_thread_count() : threads);

    ImpactRun run;
    run.n_rays = n_rays;
    run.seed = seed;
    run.density = density;
    long hits = 0;
    long leaks = 0;
    Vec3 total;
    for (const auto& b : batches) {
        hits += b.hits;
        leaks += b.leaks;
        total += b.sum;
        run.batches.push_back({b.rays, b.hits, (1.0 / static_cast<double>(b.rays)) * b.sum});
    }
    if (leaks > 0)
        throw NumericalFailure(std::to_string(leaks) + " rays passed through gaps in an open surface");
    run.force = (1.0 / static_cast<double>(n_rays)) * total;
    run.hit_fraction = static_cast<double>(hits) / static_cast<double>(n_rays);
    Vec3 var;
    for (const auto& b : run.batches) {
        const Vec3 d = b.force - run.force;
        var += Vec3{d.x * d.x, d.y * d.y, d.z * d.z};
    }
    const double scale = 1.0 / (static_cast<double>(impact_batches) * (impact_batches - 1));
    run.stderr_estimate = {std::sqrt(var.x * scale), std::sqrt(var.y * scale), std::sqrt(var.z * scale)};
    return run;
}

double visibility_check(const TriangulatedSurface& surface, Vec3 direction, long n_rays, std::uint64_t seed) {
    require(n_rays >= 1, "at least one ray is required");
    const double speed = norm(direction);
    require(speed > 0.0, "direction must be nonzero");
    const Vec3 dir = (1.0 / speed) * direction;
    const RayTracer tracer(surface);
    const double eps = 1e-9 * tracer.diagonal();
    const EntryRect rect = entry_rect(tracer, dir);

    Rng rng(seed);
    long hits = 0;
    long repeats = 0;
    for (long i = 0; i < n_rays; ++i) {
        const double a = rng.uniform();
        const double c = rng.uniform();
        const Vec3 origin = rect.base + (a * rect.w1) * rect.e1 + (c * rect.w2) * rect.e2;
        const RayHit hit = tracer.first_hit(origin, dir, 0.0);
        if (hit.face < 0) continue;
        const Vec3 nu = surface.normals[static_cast<std::size_t>(hit.face)];
        if (dot(dir, nu) >= 0.0) continue;
        ++hits;
        const Vec3 point = origin + hit.t * dir;
        const Vec3 out = reflect(dir, nu);
        if (tracer.first_hit(point + eps * nu, out, eps, hit.face).face >= 0) ++repeats;
    }
    return hits == 0 ? 0.0 : static_cast<double>(repeats) / static_cast<double>(hits);
}

nlohmann::json impact_run_to_json(const ImpactRun& run) {
    auto vec = [](Vec3 v) { return nlohmann::json::array({v.x, v.y, v.z}); };
    return {{"force", vec(run.force)},
            {"stderr", vec(run.stderr_estimate)},
            {"n_rays", run.n_rays},
            {"seed", run.seed},
            {"hit_fraction", run.hit_fraction},
            {"batches", impact_batches},
            {"density", density_to_json(run.density)}};
}

void write_batches_csv(std::ostream& out, const ImpactRun& run) {
    out << "batch,rays,hits,fx,fy,fz\n";
    char line[256];
    for (std::size_t b = 0; b < run.batches.size(); ++b) {
        const auto& m = run.batches[b];
        std::snprintf(line, sizeof line, "%zu,%ld,%ld,%.17g,%.17g,%.17g\n", b, m.rays, m.hits, m.force.x, m.force.y,
                      m.force.z);
        out << line;
    }
}

}  // namespace newtondrag
