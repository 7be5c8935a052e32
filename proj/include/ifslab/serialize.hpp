#pragma once

#include <string>

#include "ifslab/circle_map.hpp"

namespace ifslab {

// JSON form of a map descriptor:
//   {"kind": "...", "parameters": {...}, "children": [...]}
// Parameter values are numbers or arrays of numbers; children are nested
// descriptors in the same form. All three fields are always present.
// indent < 0 emits the compact single-line encoding.
std::string descriptor_to_json(const Descriptor& d, int indent = -1);
std::string map_to_json(const CircleMap& f, int indent = -1);

// {"maps": [descriptor, ...]} plus "probabilities" when the family has
// assigned sampling weights.
std::string ifs_to_json(const Ifs& F, int indent = -1);

// Inverse direction. Malformed input (bad JSON, wrong field types, unknown
// descriptor fields) throws ConstructionError naming the offending part.
Descriptor descriptor_from_json(const std::string& text);

// Rebuilds a live map from its descriptor through the public factories,
// re-running their construction-time validation. Unknown kinds throw.
CircleMap map_from_descriptor(const Descriptor& d);
CircleMap map_from_json(const std::string& text);
Ifs ifs_from_json(const std::string& text);

}  // namespace ifslab
