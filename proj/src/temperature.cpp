#include "newtondrag/errors.hpp"
#include "newtondrag/functionals.hpp"
#include "newtondrag/random.hpp"

#include <cmath>

namespace newtondrag {

using nlohmann::json;

namespace {

bool finite(Vec3 v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

json vec_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j) {
    require(j.is_array() && j.size() == 3, "expected a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// s₋ = max(−s, 0)
double negative_part(double s) { return s < 0.0 ? -s : 0.0; }

}  // namespace

VelocityDensity VelocityDensity::dirac(Vec3 drift) {
    require(finite(drift) && norm(drift) > 0.0, "dirac drift must be nonzero");
    VelocityDensity d;
    d.kind = Kind::dirac;
    d.mean = drift;
    return d;
}

VelocityDensity VelocityDensity::gaussian(Vec3 mean, double sigma) {
    require(finite(mean), "gaussian mean must be finite");
    require(std::isfinite(sigma) && sigma > 0.0, "gaussian sigma must be positive");
    VelocityDensity d;
    d.kind = Kind::gaussian;
    d.mean = mean;
    d.sigma = sigma;
    return d;
}

VelocityDensity VelocityDensity::empirical(std::vector<Vec3> samples, std::vector<double> weights) {
    require(!samples.empty(), "empirical density needs samples");
    require(samples.size() == weights.size(), "one weight per sample is required");
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        require(finite(samples[i]), "empirical sample is not finite");
        require(std::isfinite(weights[i]) && weights[i] >= 0.0, "empirical weights must be nonnegative");
        total += weights[i];
    }
    require(std::abs(total - 1.0) <= 1e-12, "empirical weights must sum to 1");
    VelocityDensity d;
    d.kind = Kind::empirical;
    d.samples = std::move(samples);
    d.weights = std::move(weights);
    return d;
}

json density_to_json(const VelocityDensity& d) {
    switch (d.kind) {
        case VelocityDensity::Kind::dirac: return {{"kind", "dirac"}, {"drift", vec_json(d.mean)}};
        case VelocityDensity::Kind::gaussian:
            return {{"kind", "gaussian"}, {"mean", vec_json(d.mean)}, {"sigma", d.sigma}};
        case VelocityDensity::Kind::empirical: {
            json samples = json::array();
            for (const auto& s : d.samples) samples.push_back(vec_json(s));
            return {{"kind", "empirical"}, {"samples", samples}, {"weights", d.weights}};
        }
    }
    return {};
}

VelocityDensity density_from_json(const json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "dirac") return VelocityDensity::dirac(vec_from(j.at("drift")));
        if (kind == "gaussian") return VelocityDensity::gaussian(vec_from(j.at("mean")), j.at("sigma").get<double>());
        if (kind == "empirical") {
            std::vector<Vec3> samples;
            for (const auto& s : j.at("samples")) samples.push_back(vec_from(s));
            return VelocityDensity::empirical(std::move(samples), j.at("weights").get<std::vector<double>>());
        }
        throw InvalidArgument("unknown density kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed density: ") + e.what());
    }
}

std::vector<Vec3> draw_velocities(const VelocityDensity& density, int count, std::uint64_t seed) {
    if (density.kind != VelocityDensity::Kind::gaussian) return {};
    require(count >= 2, "at least two velocity samples are required");
    Rng rng(seed);
    std::vector<Vec3> draws;
    draws.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count / 2; ++i) {
        const Vec3 z{rng.normal(), rng.normal(), rng.normal()};
        draws.push_back(density.mean + density.sigma * z);
        draws.push_back(density.mean - density.sigma * z);
    }
    return draws;
}

double impact_kernel(Vec3 normal, const VelocityDensity& density, std::span<const Vec3> draws) {
    switch (density.kind) {
        case VelocityDensity::Kind::dirac: {
            const double s = negative_part(dot(density.mean, normal));
            return s * s;
        }
        case VelocityDensity::Kind::gaussian: {
            require(!draws.empty(), "gaussian kernel needs velocity draws");
            double total = 0.0;
            for (const Vec3 v : draws) {
                const double s = negative_part(dot(v, normal));
                total += s * s;
            }
            return total / static_cast<double>(draws.size());
        }
        case VelocityDensity::Kind::empirical: {
            double total = 0.0;
            for (std::size_t i = 0; i < density.samples.size(); ++i) {
                const double s = negative_part(dot(density.samples[i], normal));
                total += density.weights[i] * s * s;
            }
            return total;
        }
    }
    return 0.0;
}

Vec3 temperature_force(const TriangulatedSurface& surface, const VelocityDensity& density, int velocity_samples,
                       std::uint64_t seed) {
    require(!surface.faces.empty(), "surface has no faces");
    const auto draws = draw_velocities(density, velocity_samples, seed);
    Vec3 force;
    for (std::size_t f = 0; f < surface.faces.size(); ++f) {
        const Vec3 nu = surface.normals[f];
        const double kernel = impact_kernel(nu, density, draws);
        force += (-2.0 * surface.areas[f] * kernel) * nu;
    }
    return force;
}

}  // namespace newtondrag
