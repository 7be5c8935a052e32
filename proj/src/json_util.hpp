#pragma once

// Conversions between library types and nlohmann json values, shared by the
// serializer and the CLI report writer. Internal header; the public string
// API lives in ifslab/serialize.hpp.

#include "ifslab/circle_map.hpp"
#include "json.hpp"

namespace ifslab::detail {

nlohmann::ordered_json descriptor_json(const Descriptor& d);
Descriptor descriptor_from(const nlohmann::json& j);

nlohmann::ordered_json ifs_json(const Ifs& F);
Ifs ifs_from(const nlohmann::json& j);

}  // namespace ifslab::detail
