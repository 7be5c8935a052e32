#include "ifslab/circle_map.hpp"

#include <algorithm>
#include <cmath>

#include "map_impls.hpp"

namespace ifslab {

double Descriptor::get(const std::string& k) const {
  for (const auto& [key, v] : params)
    if (key == k) return v;
  throw DomainError("descriptor for '" + kind + "' missing parameter '" + k + "'");
}

const std::vector<double>& Descriptor::get_array(const std::string& k) const {
  for (const auto& [key, v] : arrays)
    if (key == k) return v;
  throw DomainError("descriptor for '" + kind + "' missing array '" + k + "'");
}

void MapImpl::ensure_bracket() const {
  std::call_once(bracket_once_, [this] {
    constexpr int n = 256;
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < n; ++i) {
      double t = static_cast<double>(i) / n;
      double d = lift(t) - t;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    // Between samples a monotone lift can overshoot the sampled range by at
    // most one grid step in each direction.
    disp_lo_ = lo - 1.0 / n - 1e-9;
    disp_hi_ = hi + 1.0 / n + 1e-9;
  });
}

double MapImpl::inverse_lift(double y) const {
  ensure_bracket();
  double lo = y - disp_hi_;
  double hi = y - disp_lo_;
  // lift is increasing, lift(lo) <= y <= lift(hi); bisect to full precision.
  for (int i = 0; i < 80 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    if (lift(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double MapImpl::derivative(double) const {
  throw DomainError("map of kind '" + kind() + "' has no derivative");
}

CircleMap::CircleMap()
    : impl_(std::make_shared<detail::RotationImpl>(0.0)) {}

CircleMap::CircleMap(std::shared_ptr<const MapImpl> impl, int validation_grid)
    : impl_(std::move(impl)) {
  if (!impl_) throw ConstructionError("null map implementation");
  if (validation_grid <= 0) return;
  const int n = validation_grid;
  double prev = impl_->lift(0.0);
  const double first = prev;
  for (int i = 1; i <= n; ++i) {
    double t = static_cast<double>(i) / n;
    double v = impl_->lift(t);
    if (!(v >= prev - 1e-12))
      throw ConstructionError("lift of '" + impl_->kind() +
                              "' is not monotone near t=" + std::to_string(t));
    prev = v;
  }
  if (std::abs(prev - (first + 1.0)) > 1e-12)
    throw ConstructionError("lift of '" + impl_->kind() +
                            "' violates lift(t+1) = lift(t)+1");
}

CircleMap CircleMap::inverse() const {
  // Unwrap double inverses instead of stacking them.
  if (auto inv = dynamic_cast<const detail::InverseImpl*>(impl_.get()))
    return inv->base();
  return CircleMap(std::make_shared<detail::InverseImpl>(*this), 0);
}

double CircleMap::derivative(double x) const {
  if (!impl_->has_derivative())
    throw DomainError("map of kind '" + kind() + "' has no derivative");
  return impl_->derivative(wrap(x));
}

double apply_lift(const CircleMap& f, double t) { return f.lift(t); }

CircleMap translate_map(const CircleMap& f, double delta) {
  if (delta == 0.0) return f;
  return CircleMap(std::make_shared<detail::TranslatedImpl>(f, delta), 0);
}

CircleMap compose_maps(const std::vector<CircleMap>& maps) {
  if (maps.empty()) return CircleMap();
  if (maps.size() == 1) return maps[0];
  return CircleMap(std::make_shared<detail::CompositeImpl>(maps), 0);
}

Ifs::Ifs(std::vector<CircleMap> m, std::optional<std::vector<double>> p)
    : maps(std::move(m)) {
  if (maps.empty()) throw ConstructionError("IFS needs at least one map");
  if (p) {
    probs = std::move(*p);
    if (probs.size() != maps.size())
      throw ConstructionError("probability count does not match generator count");
    double sum = 0.0;
    for (double w : probs) {
      if (!(w > 0.0)) throw ConstructionError("probabilities must be positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ConstructionError("probabilities must sum to 1, got " +
                              std::to_string(sum));
  }
}

const CircleMap& Ifs::at(int symbol) const {
  if (symbol < 1 || symbol > size())
    throw DomainError("generator index " + std::to_string(symbol) +
                      " outside alphabet 1.." + std::to_string(size()));
  return maps[symbol - 1];
}

std::vector<double> Ifs::effective_probs() const {
  if (!probs.empty()) return probs;
  return std::vector<double>(maps.size(), 1.0 / maps.size());
}

Ifs inverse_ifs(const Ifs& F) {
  std::vector<CircleMap> inv;
  inv.reserve(F.maps.size());
  for (const auto& f : F.maps) inv.push_back(f.inverse());
  Ifs out(std::move(inv));
  out.probs = F.probs;
  return out;
}

Ifs translate_ifs(const Ifs& F, double delta) {
  std::vector<CircleMap> shifted;
  shifted.reserve(F.maps.size());
  for (const auto& f : F.maps) shifted.push_back(translate_map(f, delta));
  Ifs out(std::move(shifted));
  out.probs = F.probs;
  return out;
}

CircleMap compose_word(const Ifs& F, const Word& w) {
  if (w.alphabet != F.size())
    throw DomainError("word alphabet " + std::to_string(w.alphabet) +
                      " does not match IFS size " + std::to_string(F.size()));
  std::vector<CircleMap> chain;
  chain.reserve(w.symbols.size());
  for (int s : w.symbols) chain.push_back(F.at(s));
  return compose_maps(chain);
}

double apply_word(const Ifs& F, const Word& w, double x) {
  x = wrap(x);
  for (int s : w.symbols) x = F.at(s).apply(x);
  return x;
}

double lift_word(const Ifs& F, const Word& w, double t) {
  for (int s : w.symbols) t = F.at(s).lift(t);
  return t;
}

std::vector<double> orbit_of_word(const Ifs& F, const Word& w, double x) {
  std::vector<double> orbit;
  orbit.reserve(w.symbols.size());
  x = wrap(x);
  for (int s : w.symbols) {
    x = F.at(s).apply(x);
    orbit.push_back(x);
  }
  return orbit;
}

IntervalDomain domain_image(const CircleMap& f, const IntervalDomain& d) {
  std::vector<Arc> out;
  out.reserve(d.arcs.size());
  for (const auto& a : d.arcs) {
    double l = f.lift(a.left);
    double len = f.lift(a.left + a.length) - l;
    out.push_back(Arc(wrap(l), std::min(len, 1.0 - 1e-12)));
  }
  return domain_normalize(std::move(out));
}

}  // namespace ifslab
