#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ifslab/circle.hpp"
#include "ifslab/common.hpp"

namespace ifslab {

// Structural description of a map, convertible to and from JSON. Kept free
// of any JSON dependency so core headers stay light.
struct Descriptor {
  std::string kind;
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::pair<std::string, std::vector<double>>> arrays;
  std::vector<Descriptor> children;

  void add(const std::string& k, double v) { params.emplace_back(k, v); }
  void add_array(const std::string& k, std::vector<double> v) {
    arrays.emplace_back(k, std::move(v));
  }
  double get(const std::string& k) const;
  const std::vector<double>& get_array(const std::string& k) const;
};

// Interface of an orientation-preserving circle homeomorphism, represented
// by one fixed lift: an increasing real function with lift(t+1) = lift(t)+1.
class MapImpl {
 public:
  virtual ~MapImpl() = default;

  virtual double lift(double t) const = 0;

  // Solves lift(t) = y. Overridden where a closed form exists; the default
  // brackets t via the cached range of lift - id and bisects.
  virtual double inverse_lift(double y) const;

  virtual bool has_derivative() const { return false; }
  // d/dx of the map at circle point x, where defined.
  virtual double derivative(double x) const;

  virtual std::string kind() const = 0;
  virtual Descriptor describe() const = 0;

 private:
  void ensure_bracket() const;
  mutable std::once_flag bracket_once_;
  mutable double disp_lo_ = 0.0, disp_hi_ = 0.0;
};

inline constexpr int kDefaultValidationGrid = 4096;

// Value-semantic handle. Construction validates monotonicity and the
// degree-one identity on a grid (families); structural combinations
// (composites, inverses, translates) skip the scan since they preserve both
// properties by construction.
class CircleMap {
 public:
  CircleMap();  // identity
  explicit CircleMap(std::shared_ptr<const MapImpl> impl,
                     int validation_grid = kDefaultValidationGrid);

  double lift(double t) const { return impl_->lift(t); }
  double apply(double x) const { return wrap(impl_->lift(wrap(x))); }
  double apply_inverse(double y) const {
    return wrap(impl_->inverse_lift(wrap(y)));
  }

  CircleMap inverse() const;

  bool has_derivative() const { return impl_->has_derivative(); }
  double derivative(double x) const;

  std::string kind() const { return impl_->kind(); }
  Descriptor describe() const { return impl_->describe(); }
  const std::shared_ptr<const MapImpl>& impl() const { return impl_; }

 private:
  std::shared_ptr<const MapImpl> impl_;
};

// Evaluates the chosen lift at t; free-function form of CircleMap::lift.
double apply_lift(const CircleMap& f, double t);

// f shifted by delta in the lift: x -> f(x) + delta. Exact on lifts.
CircleMap translate_map(const CircleMap& f, double delta);

// Lazy composition chain. `maps[0]` acts first. No numerical interpolation:
// evaluation threads the constituent lifts.
CircleMap compose_maps(const std::vector<CircleMap>& maps);

// Finite family of circle maps with optional sampling probabilities.
struct Ifs {
  std::vector<CircleMap> maps;
  std::vector<double> probs;  // empty means "none assigned"

  Ifs() = default;
  Ifs(std::vector<CircleMap> m, std::optional<std::vector<double>> p = {});

  int size() const { return static_cast<int>(maps.size()); }
  // 1-based generator access matching word symbols.
  const CircleMap& at(int symbol) const;
  // Assigned probabilities, or the uniform vector when none were given.
  std::vector<double> effective_probs() const;
};

// Generator-wise inverse family, probabilities carried over.
Ifs inverse_ifs(const Ifs& F);

// Every generator shifted by delta in the lift.
Ifs translate_ifs(const Ifs& F, double delta);

// Composite map of the word w over F; w.symbols[0] acts first.
// The empty word gives the identity.
CircleMap compose_word(const Ifs& F, const Word& w);

// Iterative application, cheaper than building the composite.
double apply_word(const Ifs& F, const Word& w, double x);
double lift_word(const Ifs& F, const Word& w, double t);

// The |w| intermediate images f_{w,1}(x), ..., f_{w,|w|}(x).
std::vector<double> orbit_of_word(const Ifs& F, const Word& w, double x);

// Image of a domain under a single homeomorphism; arcs map to arcs with
// lengths measured through the lift.
IntervalDomain domain_image(const CircleMap& f, const IntervalDomain& d);

}  // namespace ifslab
