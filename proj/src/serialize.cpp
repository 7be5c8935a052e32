#include "ifslab/serialize.hpp"

#include <memory>
#include <utility>
#include <vector>

#include "ifslab/factorization.hpp"
#include "ifslab/families.hpp"
#include "ifslab/random_dynamics.hpp"
#include "json_util.hpp"
#include "map_impls.hpp"

namespace ifslab {

namespace detail {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json descriptor_json(const Descriptor& d) {
  ordered_json out;
  out["kind"] = d.kind;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : d.params) params[k] = v;
  for (const auto& [k, v] : d.arrays) params[k] = v;
  out["parameters"] = std::move(params);
  ordered_json kids = ordered_json::array();
  for (const auto& c : d.children) kids.push_back(descriptor_json(c));
  out["children"] = std::move(kids);
  return out;
}

Descriptor descriptor_from(const json& j) {
  if (!j.is_object())
    throw ConstructionError("map descriptor must be a JSON object");
  Descriptor d;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      if (!value.is_string())
        throw ConstructionError("descriptor field 'kind' must be a string");
      d.kind = value.get<std::string>();
    } else if (key == "parameters") {
      if (!value.is_object())
        throw ConstructionError(
            "descriptor field 'parameters' must be an object");
      for (const auto& [pk, pv] : value.items()) {
        if (pv.is_number()) {
          d.add(pk, pv.get<double>());
        } else if (pv.is_array()) {
          std::vector<double> xs;
          for (const auto& e : pv) {
            if (!e.is_number())
              throw ConstructionError("parameter '" + pk +
                                      "' has a non-numeric entry");
            xs.push_back(e.get<double>());
          }
          d.add_array(pk, std::move(xs));
        } else {
          throw ConstructionError("parameter '" + pk +
                                  "' must be a number or an array of numbers");
        }
      }
    } else if (key == "children") {
      if (!value.is_array())
        throw ConstructionError("descriptor field 'children' must be an array");
      for (const auto& c : value) d.children.push_back(descriptor_from(c));
    } else {
      throw ConstructionError("unknown descriptor field '" + key + "'");
    }
  }
  if (d.kind.empty())
    throw ConstructionError("map descriptor is missing its 'kind'");
  return d;
}

ordered_json ifs_json(const Ifs& F) {
  ordered_json out;
  ordered_json maps = ordered_json::array();
  for (const auto& f : F.maps) maps.push_back(descriptor_json(f.describe()));
  out["maps"] = std::move(maps);
  if (!F.probs.empty()) out["probabilities"] = F.probs;
  return out;
}

Ifs ifs_from(const json& j) {
  if (!j.is_object())
    throw ConstructionError("IFS serialization must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "maps" && key != "probabilities")
      throw ConstructionError("unknown IFS field '" + key + "'");
  }
  if (!j.contains("maps") || !j["maps"].is_array())
    throw ConstructionError("IFS serialization needs a 'maps' array");
  std::vector<CircleMap> maps;
  for (const auto& m : j["maps"])
    maps.push_back(map_from_descriptor(descriptor_from(m)));
  std::optional<std::vector<double>> probs;
  if (j.contains("probabilities")) {
    const auto& p = j["probabilities"];
    if (!p.is_array())
      throw ConstructionError("IFS field 'probabilities' must be an array");
    std::vector<double> ps;
    for (const auto& e : p) {
      if (!e.is_number())
        throw ConstructionError("probabilities must be numbers");
      ps.push_back(e.get<double>());
    }
    probs = std::move(ps);
  }
  return Ifs(std::move(maps), std::move(probs));
}

}  // namespace detail

namespace {

int int_param(const Descriptor& d, const std::string& key) {
  double v = d.get(key);
  int n = static_cast<int>(v);
  if (static_cast<double>(n) != v)
    throw ConstructionError("descriptor for '" + d.kind + "' parameter '" +
                            key + "' must be an integer");
  return n;
}

const Descriptor& only_child(const Descriptor& d) {
  if (d.children.size() != 1)
    throw ConstructionError("descriptor for '" + d.kind +
                            "' needs exactly one child map");
  return d.children.front();
}

}  // namespace

CircleMap map_from_descriptor(const Descriptor& d) {
  if (d.kind == "rotation") return rotation(d.get("alpha"));
  if (d.kind == "mobius")
    return mobius(Mobius{d.get("a"), d.get("b"), d.get("c"), d.get("d")});
  if (d.kind == "piecewise-linear") {
    const auto& xs = d.get_array("x");
    const auto& ys = d.get_array("y");
    if (xs.size() != ys.size())
      throw ConstructionError(
          "piecewise-linear arrays 'x' and 'y' differ in length");
    std::vector<std::pair<double, double>> knots;
    for (std::size_t i = 0; i < xs.size(); ++i)
      knots.emplace_back(xs[i], ys[i]);
    return piecewise_linear(std::move(knots));
  }
  if (d.kind == "flow-bump") {
    FlowBumpParams p;
    p.support = Arc(d.get("support_left"), d.get("support_length"));
    p.time = d.get("time");
    p.amplitude = d.get("amplitude");
    p.rk4_steps = int_param(d, "rk4_steps");
    return flow_bump(p);
  }
  if (d.kind == "perturbed") {
    CircleMap base = map_from_descriptor(only_child(d));
    double center = d.get("center");
    // The public factory takes the target derivative, not the offset.
    double target = base.derivative(center) + d.get("slope_delta");
    return bump_perturbation(base, CirclePoint(center), target,
                             d.get("radius"));
  }
  if (d.kind == "reflected")
    return reflect_conjugate(map_from_descriptor(only_child(d)));
  if (d.kind == "glued") {
    const auto& xs = d.get_array("breakpoints");
    if (xs.size() != d.children.size())
      throw ConstructionError(
          "glued map needs one breakpoint per child segment");
    std::vector<GluePiece> pieces;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Descriptor& c = d.children[i];
      if (c.kind == "hermite") {
        // Interpolation segments are recomputed from their neighbours.
        pieces.push_back({xs[i], false, CircleMap()});
      } else {
        pieces.push_back({xs[i], true, map_from_descriptor(c)});
      }
    }
    return piecewise_glue(std::move(pieces));
  }
  if (d.kind == "denjoy") {
    CircleMap base = map_from_descriptor(only_child(d));
    auto chart = make_denjoy_chart(d.get_array("points"), d.get_array("lengths"));
    return denjoy_map(base, std::move(chart));
  }
  if (d.kind == "translated")
    return translate_map(map_from_descriptor(only_child(d)), d.get("delta"));
  if (d.kind == "inverse")
    return map_from_descriptor(only_child(d)).inverse();
  if (d.kind == "composite") {
    if (d.children.empty())
      throw ConstructionError("composite descriptor has no children");
    std::vector<CircleMap> maps;
    for (const auto& c : d.children) maps.push_back(map_from_descriptor(c));
    return compose_maps(maps);
  }
  if (d.kind == "cover-lift") {
    int deg = int_param(d, "d");
    int k = int_param(d, "k");
    if (deg < 1 || k < 0 || k >= deg)
      throw ConstructionError("cover-lift needs d >= 1 and 0 <= k < d");
    CircleMap base = map_from_descriptor(only_child(d));
    return CircleMap(
        std::make_shared<detail::CoverLiftImpl>(std::move(base), deg, k));
  }
  if (d.kind == "measure-rotation") {
    EmpiricalMeasure mu(d.get_array("atoms"), d.get_array("weights"));
    return measure_rotation(mu, int_param(d, "d"));
  }
  if (d.kind == "hermite")
    throw ConstructionError(
        "hermite segments only appear inside a glued map descriptor");
  throw ConstructionError("unknown map kind '" + d.kind + "'");
}

std::string descriptor_to_json(const Descriptor& d, int indent) {
  return detail::descriptor_json(d).dump(indent);
}

std::string map_to_json(const CircleMap& f, int indent) {
  return detail::descriptor_json(f.describe()).dump(indent);
}

std::string ifs_to_json(const Ifs& F, int indent) {
  return detail::ifs_json(F).dump(indent);
}

namespace {

nlohmann::json parse_strict(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConstructionError("input is not valid JSON");
  return j;
}

}  // namespace

Descriptor descriptor_from_json(const std::string& text) {
  return detail::descriptor_from(parse_strict(text));
}

CircleMap map_from_json(const std::string& text) {
  return map_from_descriptor(descriptor_from_json(text));
}

Ifs ifs_from_json(const std::string& text) {
  return detail::ifs_from(parse_strict(text));
}

}  // namespace ifslab
