#include "newtondrag/profile_io.hpp"

#include "newtondrag/errors.hpp"

#include <fstream>

namespace newtondrag {

using nlohmann::json;

json domain_to_json(const Domain& domain) {
    if (domain.kind() == DomainKind::disk) return {{"kind", "disk"}, {"R", domain.radius()}};
    json vertices = json::array();
    for (const auto& v : domain.vertices()) vertices.push_back({v.x, v.y});
    return {{"kind", "polygon"}, {"vertices", vertices}};
}

Domain domain_from_json(const json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "disk") return make_disk(j.at("R").get<double>());
        if (kind == "polygon" || kind == "convex-polygon") {
            std::vector<Vec2> vertices;
            for (const auto& v : j.at("vertices")) {
                require(v.is_array() && v.size() == 2, "polygon vertex must be [x, y]");
                vertices.push_back({v[0].get<double>(), v[1].get<double>()});
            }
            return make_polygon(std::move(vertices));
        }
        throw InvalidArgument("unknown domain kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed domain: ") + e.what());
    }
}

json profile_to_json(const ConcaveProfile& profile) {
    if (profile.kind() == ProfileKind::radial)
        return {{"kind", "radial"}, {"knots", profile.knots()}, {"values", profile.values()}};
    json pieces = json::array();
    for (const auto& p : profile.pieces()) pieces.push_back({p.slope.x, p.slope.y, p.offset});
    return {{"kind", "polyhedral"}, {"M", profile.cap()}, {"pieces", pieces}, {"domain", domain_to_json(profile.domain())}};
}

ConcaveProfile profile_from_json(const json& j, const std::optional<Domain>& fallback) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "radial")
            return ConcaveProfile::radial(j.at("knots").get<std::vector<double>>(),
                                          j.at("values").get<std::vector<double>>());
        if (kind == "polyhedral") {
            require(j.contains("domain") || fallback.has_value(), "polyhedral profile has no domain");
            const Domain domain = j.contains("domain") ? domain_from_json(j.at("domain")) : *fallback;
            std::vector<AffinePiece> pieces;
            for (const auto& p : j.at("pieces")) {
                require(p.is_array() && p.size() == 3, "affine piece must be [a1, a2, b]");
                pieces.push_back({{p[0].get<double>(), p[1].get<double>()}, p[2].get<double>()});
            }
            return ConcaveProfile::polyhedral(domain, std::move(pieces), j.at("M").get<double>());
        }
        throw InvalidArgument("unknown profile kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed profile: ") + e.what());
    }
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument("cannot parse '" + path + "': " + e.what());
    }
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

ConcaveProfile load_profile(const std::string& path, const std::optional<Domain>& fallback) {
    return profile_from_json(load_json(path), fallback);
}

}  // namespace newtondrag
