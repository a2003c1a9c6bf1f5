#pragma once

#include "newtondrag/geometry.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace newtondrag {

/// {"kind":"disk","R":…} or {"kind":"polygon","vertices":[[x,y],…]}.
nlohmann::json domain_to_json(const Domain& domain);
Domain domain_from_json(const nlohmann::json& j);

/// {"kind":"polyhedral","M":…,"pieces":[[a1,a2,b],…]} or
/// {"kind":"radial","knots":[…],"values":[…]}. Polyhedral records also carry
/// a "domain" entry; when it is absent the fallback domain is used.
nlohmann::json profile_to_json(const ConcaveProfile& profile);
ConcaveProfile profile_from_json(const nlohmann::json& j, const std::optional<Domain>& fallback = {});

ConcaveProfile load_profile(const std::string& path, const std::optional<Domain>& fallback = {});
void save_json(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

}  // namespace newtondrag
