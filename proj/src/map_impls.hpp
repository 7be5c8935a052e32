#pragma once

// Internal map implementations shared between translation units. Not part
// of the public headers; user code constructs these through the factory
// functions in families.hpp and the combinators in circle_map.hpp.

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "ifslab/circle_map.hpp"

namespace ifslab::detail {

class RotationImpl final : public MapImpl {
 public:
  explicit RotationImpl(double alpha) : alpha_(alpha) {}
  double lift(double t) const override { return t + alpha_; }
  double inverse_lift(double y) const override { return y - alpha_; }
  bool has_derivative() const override { return true; }
  double derivative(double) const override { return 1.0; }
  std::string kind() const override { return "rotation"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "rotation";
    d.add("alpha", alpha_);
    return d;
  }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

class TranslatedImpl final : public MapImpl {
 public:
  TranslatedImpl(CircleMap base, double delta)
      : base_(std::move(base)), delta_(delta) {}
  double lift(double t) const override { return base_.lift(t) + delta_; }
  double inverse_lift(double y) const override {
    return base_.impl()->inverse_lift(y - delta_);
  }
  bool has_derivative() const override { return base_.has_derivative(); }
  double derivative(double x) const override { return base_.derivative(x); }
  std::string kind() const override { return "translated"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "translated";
    d.add("delta", delta_);
    d.children.push_back(base_.describe());
    return d;
  }
  const CircleMap& base() const { return base_; }
  double delta() const { return delta_; }

 private:
  CircleMap base_;
  double delta_;
};

class InverseImpl final : public MapImpl {
 public:
  explicit InverseImpl(CircleMap base) : base_(std::move(base)) {}
  double lift(double t) const override {
    return base_.impl()->inverse_lift(t);
  }
  double inverse_lift(double y) const override { return base_.lift(y); }
  bool has_derivative() const override { return base_.has_derivative(); }
  double derivative(double x) const override {
    double pre = base_.apply_inverse(x);
    double d = base_.derivative(pre);
    if (d == 0.0) throw DomainError("inverse derivative at critical point");
    return 1.0 / d;
  }
  std::string kind() const override { return "inverse"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "inverse";
    d.children.push_back(base_.describe());
    return d;
  }
  const CircleMap& base() const { return base_; }

 private:
  CircleMap base_;
};

class CompositeImpl final : public MapImpl {
 public:
  // maps[0] acts first.
  explicit CompositeImpl(std::vector<CircleMap> maps)
      : maps_(std::move(maps)) {}
  double lift(double t) const override {
    for (const auto& f : maps_) t = f.lift(t);
    return t;
  }
  double inverse_lift(double y) const override {
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it)
      y = it->impl()->inverse_lift(y);
    return y;
  }
  bool has_derivative() const override {
    for (const auto& f : maps_)
      if (!f.has_derivative()) return false;
    return true;
  }
  double derivative(double x) const override {
    double prod = 1.0;
    for (const auto& f : maps_) {
      prod *= f.derivative(x);
      x = f.apply(x);
    }
    return prod;
  }
  std::string kind() const override { return "composite"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "composite";
    for (const auto& f : maps_) d.children.push_back(f.describe());
    return d;
  }
  const std::vector<CircleMap>& maps() const { return maps_; }

 private:
  std::vector<CircleMap> maps_;
};

// g~(x) = (lift_g(d x) + k) / d: the k-th lift of g to the d-fold cover.
class CoverLiftImpl final : public MapImpl {
 public:
  CoverLiftImpl(CircleMap base, int d, int k)
      : base_(std::move(base)), d_(d), k_(k) {}
  double lift(double t) const override {
    return (base_.lift(static_cast<double>(d_) * t) + k_) / d_;
  }
  double inverse_lift(double y) const override {
    return base_.impl()->inverse_lift(static_cast<double>(d_) * y - k_) / d_;
  }
  bool has_derivative() const override { return base_.has_derivative(); }
  double derivative(double x) const override {
    return base_.derivative(wrap(static_cast<double>(d_) * x));
  }
  std::string kind() const override { return "cover-lift"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "cover-lift";
    d.add("d", static_cast<double>(d_));
    d.add("k", static_cast<double>(k_));
    d.children.push_back(base_.describe());
    return d;
  }
  const CircleMap& base() const { return base_; }
  int cover_degree() const { return d_; }
  int deck_index() const { return k_; }

 private:
  CircleMap base_;
  int d_;
  int k_;
};

}  // namespace ifslab::detail
