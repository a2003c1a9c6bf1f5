#pragma once

#include "newtondrag/functionals.hpp"
#include "newtondrag/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace newtondrag {

inline constexpr int impact_batches = 32;

struct BatchMean {
    long rays = 0;
    long hits = 0;
    Vec3 force;  // batch estimate of the force
};

/// Monte Carlo estimate of the force exerted on a body by a free-molecular
/// flow of unit particle density; same sign convention as temperature_force.
struct ImpactRun {
    long n_rays = 0;
    std::uint64_t seed = 0;
    VelocityDensity density;
    Vec3 force;
    Vec3 stderr_estimate;   // batch-means standard error per component
    double hit_fraction = 0.0;
    std::vector<BatchMean> batches;
};

nlohmann::json impact_run_to_json(const ImpactRun& run);
void write_batches_csv(std::ostream& out, const ImpactRun& run);

/// Ray hit record; `face` is -1 on a miss.
struct RayHit {
    int face = -1;
    double t = 0.0;
};

/// Bounding volume hierarchy over a triangulated surface with a watertight
/// ray–triangle test. Ties in t go to the lowest face index.
class RayTracer {
public:
    explicit RayTracer(const TriangulatedSurface& surface);

    RayHit first_hit(Vec3 origin, Vec3 direction, double t_min, int skip_face = -1) const;

    const TriangulatedSurface& surface() const { return surface_; }
    Vec3 box_min() const { return box_min_; }
    Vec3 box_max() const { return box_max_; }
    double diagonal() const { return norm(box_max_ - box_min_); }

private:
    struct Node {
        Vec3 lo, hi;
        int left = -1;   // child index, or -1 for a leaf
        int right = -1;
        int begin = 0;   // leaf range in order_
        int end = 0;
    };

    int build(int begin, int end, std::vector<Vec3>& centroids);
    bool intersect_face(int face, Vec3 origin, Vec3 direction, double t_min, double& t) const;

    const TriangulatedSurface& surface_;
    std::vector<Node> nodes_;
    std::vector<int> order_;
    Vec3 box_min_, box_max_;
};

/// Specular reflection v − 2(v·ν)ν.
Vec3 reflect(Vec3 v, Vec3 normal);

/// Traces n_rays single-impact particles (32 seeded batches, reduced in fixed
/// order). Dirac flows enter through the bounding rectangle of the projected
/// body, other densities through a disk orthogonal to each sampled velocity.
/// Throws InvalidArgument for n_rays < 1000 or zero projected area and
/// NumericalFailure when rays leak through gaps in the surface.
ImpactRun simulate_drag(const TriangulatedSurface& surface, const VelocityDensity& density, long n_rays,
                        std::uint64_t seed, std::size_t threads = 0);

/// Fraction of hitting rays along `direction` whose reflected continuation
/// strikes the surface again.
double visibility_check(const TriangulatedSurface& surface, Vec3 direction, long n_rays, std::uint64_t seed);

}  // namespace newtondrag
