#include "ifslab/random_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ifslab {

namespace {

constexpr double kMergeTol = 1e-12;

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.empty()) throw ConstructionError("empirical measure needs at least one atom");
  if (atoms.size() != weights.size())
    throw ConstructionError("atom/weight count mismatch");

  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  for (double& a : atoms) a = wrap(a);
  std::sort(order.begin(), order.end(),
       [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });

  double sum = 0.0;
  for (std::size_t idx : order) {
    double x = atoms[idx];
    double w = weights[idx];
    if (!(w > 0.0)) throw ConstructionError("atom weights must be positive");
    sum += w;
    if (!atoms_.empty() && x - atoms_.back() <= kMergeTol) {
      weights_.back() += w;
    } else {
      atoms_.push_back(x);
      weights_.push_back(w);
    }
  }
  // The first and last atom can also collide across the wrap.
  if (atoms_.size() > 1 && (1.0 - atoms_.back()) + atoms_.front() <= kMergeTol) {
    weights_.front() += weights_.back();
    atoms_.pop_back();
    weights_.pop_back();
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConstructionError("atom weights must sum to 1");
  // Summing many tiny weights leaves rounding residue beyond 1e-12; divide
  // it out so the CDF plateaus exactly at integers.
  for (double& w : weights_) w /= sum;

  cum_.resize(atoms_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    acc += weights_[i];
    cum_[i] = acc;
  }
  cum_.back() = 1.0;
}

EmpiricalMeasure EmpiricalMeasure::uniform_grid(std::size_t points) {
  if (points == 0) throw ConstructionError("uniform grid needs at least one point");
  std::vector<double> xs(points), ws(points, 1.0 / static_cast<double>(points));
  for (std::size_t i = 0; i < points; ++i)
    xs[i] = static_cast<double>(i) / static_cast<double>(points);
  return EmpiricalMeasure(std::move(xs), std::move(ws));
}

EmpiricalMeasure EmpiricalMeasure::point_mass(CirclePoint x) {
  return EmpiricalMeasure({x.x}, {1.0});
}

double EmpiricalMeasure::cdf_lift(double t) const {
  double k = std::floor(t);
  double x = t - k;
  // Mass of [0, x]: cum_[i] for the last atom <= x.
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
  double base = (it == atoms_.begin()) ? 0.0 : cum_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
  return k + base;
}

double EmpiricalMeasure::smooth_cdf_lift(double t) const {
  double k = std::floor(t);
  double x = t - k;
  // F(atoms_[i]) = cum_[i]; linear in between; the segment ending at
  // atoms_[0] starts at atoms_.back() - 1 with value 0 at its left end
  // shifted down by w_0 ... handled via the wrap below.
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - atoms_.begin());
  double x0, x1, f0, f1;
  if (atoms_.size() == 1) {
    // Single atom: all mass spread over the full circle, F(a) = 1.
    return k + 1.0 + (x - atoms_[0]);
  }
  if (i == 0) {
    x0 = atoms_.back() - 1.0;
    x1 = atoms_.front();
    f0 = 0.0;  // cum_.back() - 1
    f1 = cum_.front();
  } else if (i == atoms_.size()) {
    x0 = atoms_.back();
    x1 = atoms_.front() + 1.0;
    f0 = cum_.back();
    f1 = 1.0 + cum_.front();
  } else {
    x0 = atoms_[i - 1];
    x1 = atoms_[i];
    f0 = cum_[i - 1];
    f1 = cum_[i];
  }
  return k + f0 + (f1 - f0) * ((x - x0) / (x1 - x0));
}

double EmpiricalMeasure::smooth_quantile_lift(double q) const {
  double k = std::floor(q);
  double r = q - k;
  if (atoms_.size() == 1) {
    double a = atoms_[0];
    double x = a - 1.0 + r;  // inverse of the single-atom branch above
    return k + x;
  }
  auto it = std::lower_bound(cum_.begin(), cum_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin());
  double x0, x1, f0, f1;
  if (i == 0) {
    x0 = atoms_.back() - 1.0;
    x1 = atoms_.front();
    f0 = 0.0;
    f1 = cum_.front();
  } else if (i == cum_.size()) {
    // r == 1 boundary after floating error; wrap into the first segment.
    return k + 1.0 + smooth_quantile_lift(r - 1.0);
  } else {
    x0 = atoms_[i - 1];
    x1 = atoms_[i];
    f0 = cum_[i - 1];
    f1 = cum_[i];
  }
  return k + x0 + (x1 - x0) * ((r - f0) / (f1 - f0));
}

double EmpiricalMeasure::mass(const Arc& a) const {
  return cdf_lift(a.left + a.length) - cdf_lift(a.left);
}

double EmpiricalMeasure::max_weight() const {
  return *std::max_element(weights_.begin(), weights_.end());
}

double EmpiricalMeasure::max_atom_gap() const {
  if (atoms_.size() == 1) return 1.0;
  double best = (atoms_.front() + 1.0) - atoms_.back();
  for (std::size_t i = 0; i + 1 < atoms_.size(); ++i)
    best = std::max(best, atoms_[i + 1] - atoms_[i]);
  return best;
}

double wasserstein_circle(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  // G(x) = F_a(x) - F_b(x) is a step function with jumps at the atoms of
  // either measure. min_c integral |G - c| is attained at the weighted
  // median of the step values, weighted by step lengths.
  struct Event {
    double x;
    double jump;
  };
  std::vector<Event> events;
  events.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) events.push_back({a.atoms()[i], a.weights()[i]});
  for (std::size_t i = 0; i < b.size(); ++i) events.push_back({b.atoms()[i], -b.weights()[i]});
  std::sort(events.begin(), events.end(),
       [](const Event& l, const Event& r) { return l.x < r.x; });

  struct Segment {
    double value;
    double length;
  };
  std::vector<Segment> segs;
  segs.reserve(events.size());
  double g = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    g += events[i].jump;
    double next = (i + 1 < events.size()) ? events[i + 1].x : events[0].x + 1.0;
    double len = next - events[i].x;
    if (len > 0.0) segs.push_back({g, len});
  }

  std::sort(segs.begin(), segs.end(),
       [](const Segment& l, const Segment& r) { return l.value < r.value; });
  double half = 0.5;  // total length is exactly 1
  double acc = 0.0;
  double median = segs.back().value;
  for (const Segment& s : segs) {
    acc += s.length;
    if (acc >= half) {
      median = s.value;
      break;
    }
  }
  double w = 0.0;
  for (const Segment& s : segs) w += s.length * std::abs(s.value - median);
  return w;
}

}  // namespace ifslab
