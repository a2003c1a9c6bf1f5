#include "newtondrag/errors.hpp"
#include "newtondrag/shape_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace newtondrag {

namespace {

constexpr double pi = std::numbers::pi;

SlopeHistogram empty_histogram(double epsilon) {
    require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon < 0.5, "epsilon must lie in (0, 0.5)");
    SlopeHistogram h;
    h.edges = {0.0, epsilon, 1.0 - epsilon, 1.0, 2.0, 4.0};
    h.fractions.assign(h.edges.size(), 0.0);
    return h;
}

std::size_t bin_of(const SlopeHistogram& h, double slope) {
    std::size_t bin = 0;
    while (bin + 1 < h.edges.size() && slope >= h.edges[bin + 1]) ++bin;
    return bin;
}

Vec2 centroid(const Mesh& mesh, std::size_t t) {
    const auto& tri = mesh.triangles[t];
    return (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) * (1.0 / 3.0);
}

// Slope of each radial segment and its share of the disk area.
struct RadialSegments {
    std::vector<double> slopes;
    std::vector<double> fractions;
    std::vector<bool> plateau;
};

RadialSegments radial_segments(const ConcaveProfile& profile) {
    const auto& k = profile.knots();
    const auto& v = profile.values();
    const double R2 = k.back() * k.back();
    RadialSegments s;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        s.slopes.push_back((v[i] - v[i + 1]) / (k[i + 1] - k[i]));
        s.fractions.push_back((k[i + 1] * k[i + 1] - k[i] * k[i]) / R2);
        s.plateau.push_back(v[i] == profile.cap() && v[i + 1] == profile.cap());
    }
    return s;
}

}  // namespace

SlopeHistogram slope_histogram(const ConcaveProfile& profile, const Mesh& mesh, double epsilon) {
    SlopeHistogram h = empty_histogram(epsilon);
    if (profile.kind() == ProfileKind::radial) {
        const auto seg = radial_segments(profile);
        for (std::size_t i = 0; i < seg.slopes.size(); ++i) h.fractions[bin_of(h, seg.slopes[i])] += seg.fractions[i];
        return h;
    }
    require(!mesh.triangles.empty(), "polyhedral histograms need a mesh");
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const double slope = norm(eval_profile(profile, centroid(mesh, t)).gradient);
        h.fractions[bin_of(h, slope)] += mesh.areas[t] / mesh.measure;
    }
    return h;
}

VerificationRecord verify_optimum(const ConcaveProfile& profile, const Mesh& mesh, double epsilon) {
    VerificationRecord rec;
    rec.epsilon = epsilon;
    rec.histogram = slope_histogram(profile, mesh, epsilon);

    if (profile.kind() == ProfileKind::radial) {
        const auto seg = radial_segments(profile);
        const auto& k = profile.knots();
        double det_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < seg.slopes.size(); ++i) {
            if (seg.plateau[i]) rec.plateau_fraction += seg.fractions[i];
            if (seg.slopes[i] > epsilon && seg.slopes[i] < 1.0 - epsilon) rec.dichotomy_fraction += seg.fractions[i];
            // Second differences at interior knots between two sloped segments.
            if (i > 0 && seg.slopes[i - 1] > 0.0 && seg.slopes[i] > 0.0) {
                const double second = (seg.slopes[i] - seg.slopes[i - 1]) / (0.5 * (k[i + 1] - k[i - 1]));
                const double first = 0.5 * (seg.slopes[i] + seg.slopes[i - 1]);
                det_min = std::min(det_min, second * first / k[i]);
            }
        }
        if (std::isfinite(det_min)) rec.min_hessian_det = det_min;
        return rec;
    }

    // Polyhedral: Hessian vanishes on every piece, so only the slope dichotomy
    // is checked, away from the 2h band around the kinks.
    rec.hessian_structural = true;
    const auto& pieces = profile.pieces();
    const double band = mesh.h;  // band of total width 2h around each kink
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec2 c = centroid(mesh, t);
        const int active = active_piece(profile, c);
        const Vec2 slope = active < 0 ? Vec2{} : pieces[static_cast<std::size_t>(active)].slope;
        const double value = active < 0 ? profile.cap() : pieces[static_cast<std::size_t>(active)](c);
        const double weight = mesh.areas[t] / mesh.measure;

        double distance = std::numeric_limits<double>::infinity();
        auto consider = [&](Vec2 other_slope, double other_value) {
            const double gap = norm(other_slope - slope);
            if (gap > 0.0) distance = std::min(distance, (other_value - value) / gap);
        };
        if (active >= 0) consider(Vec2{}, profile.cap());
        for (std::size_t j = 0; j < pieces.size(); ++j)
            if (static_cast<int>(j) != active) consider(pieces[j].slope, pieces[j](c));

        if (active < 0) rec.plateau_fraction += weight;
        if (distance < band) {
            rec.excluded_fraction += weight;
            continue;
        }
        const double g = norm(slope);
        if (g > epsilon && g < 1.0 - epsilon) rec.dichotomy_fraction += weight;
    }
    return rec;
}

VerificationRecord verify_optimum(const RadialOptimum& optimum, double epsilon, int samples) {
    require(samples >= 2, "at least two samples are required");
    VerificationRecord rec;
    rec.epsilon = epsilon;
    rec.histogram = empty_histogram(epsilon);
    const double R2 = optimum.R * optimum.R;
    rec.plateau_fraction = optimum.r0 * optimum.r0 / R2;
    rec.histogram.fractions[0] += rec.plateau_fraction;
    // Curved branch: slopes t ∈ [1, T]; bin areas follow from r(t).
    const auto& e = rec.histogram.edges;
    for (std::size_t b = 0; b < e.size(); ++b) {
        const double lo = std::max(e[b], 1.0);
        const double hi = std::min(b + 1 < e.size() ? e[b + 1] : optimum.T, optimum.T);
        if (hi <= lo) continue;
        const double r_lo = optimum.radius_at(lo);
        const double r_hi = b + 1 < e.size() && e[b + 1] < optimum.T ? optimum.radius_at(hi) : optimum.R;
        rec.histogram.fractions[b] += (r_hi * r_hi - r_lo * r_lo) / R2;
    }
    rec.dichotomy_fraction = rec.histogram.fractions[1];
    if (optimum.T > 1.0) {
        double det_min = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= samples; ++i) {
            const double r = optimum.r0 + (optimum.R - optimum.r0) * i / (samples + 1.0);
            det_min = std::min(det_min, radial_hessian_det(optimum, r));
        }
        rec.min_hessian_det = det_min;
    }
    return rec;
}

nlohmann::json verification_to_json(const VerificationRecord& record) {
    nlohmann::json j{{"epsilon", record.epsilon},
                     {"dichotomy_fraction", record.dichotomy_fraction},
                     {"excluded_fraction", record.excluded_fraction},
                     {"plateau_fraction", record.plateau_fraction},
                     {"hessian_structural", record.hessian_structural},
                     {"histogram", {{"edges", record.histogram.edges}, {"fractions", record.histogram.fractions}}}};
    j["min_hessian_det"] = record.min_hessian_det ? nlohmann::json(*record.min_hessian_det) : nlohmann::json(nullptr);
    return j;
}

std::vector<DegenerateRow> degenerate_sweep(const Domain& domain, double M, const std::vector<int>& n_list,
                                            double mesh_h, std::uint64_t seed) {
    require(std::isfinite(M) && M > 0.0, "height M must be positive");
    const Mesh mesh = build_mesh(domain, mesh_h);

    auto boundary_distance = [&](Vec2 x) {
        if (domain.kind() == DomainKind::disk) return std::max(0.0, domain.radius() - norm(x));
        const auto& v = domain.vertices();
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2 a = v[i];
            const Vec2 b = v[(i + 1) % v.size()];
            const Vec2 e = b - a;
            // Inward normal of a counterclockwise edge is (−e.y, e.x).
            d = std::min(d, (-e.y * (x.x - a.x) + e.x * (x.y - a.y)) / norm(e));
        }
        return std::max(0.0, d);
    };

    std::vector<DegenerateRow> rows;
    for (int n : n_list) {
        require(n >= 1, "sequence index n must be positive");
        DegenerateRow row;
        row.n = n;
        const double nd = n;
        std::vector<double> cone(mesh.vertices.size());
        std::vector<double> wave(mesh.vertices.size());
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
            const Vec2 x = mesh.vertices[i];
            cone[i] = nd * boundary_distance(x);
            const double s = std::sin(nd * norm(x));
            wave[i] = M * s * s;
        }
        row.steep_cone = newton_resistance(mesh, cone);
        if (domain.kind() == DomainKind::disk)
            row.steep_cone_exact = pi * domain.radius() * domain.radius() / (1.0 + nd * nd);
        row.oscillating = newton_resistance(mesh, wave);
        row.oscillation_violation = concavity_violation(
            [&](Vec2 x) {
                const double s = std::sin(nd * norm(x));
                return M * s * s;
            },
            domain, 1000, seed);
        row.oscillating_concave = row.oscillation_violation <= 1e-12;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace newtondrag
