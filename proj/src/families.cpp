#include "ifslab/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "map_impls.hpp"

namespace ifslab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double chart_from_circle(double x) {
  x = wrap(x);
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  return std::tan(kPi * (x - 0.5));
}

double circle_from_chart(double t) {
  if (std::isinf(t)) return 0.0;
  return wrap(std::atan(t) / kPi + 0.5);
}

Mobius Mobius::normalized() const {
  double dt = det();
  if (!(dt > 0.0))
    throw ConstructionError("Mobius matrix must have positive determinant");
  double s = std::sqrt(dt);
  return Mobius{a / s, b / s, c / s, d / s};
}

double Mobius::act(double t) const {
  if (std::isinf(t)) {
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    return a / c;
  }
  double den = c * t + d;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return (a * t + b) / den;
}

Mobius operator*(const Mobius& l, const Mobius& r) {
  return Mobius{l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

Mobius Mobius::power(double s) const {
  Mobius m = normalized();
  double tr = m.a + m.d;
  if (tr < 0.0) {  // projectively the same matrix, eigenvalues made positive
    m.a = -m.a; m.b = -m.b; m.c = -m.c; m.d = -m.d;
    tr = -tr;
  }
  double disc = tr * tr - 4.0;
  if (disc <= 1e-14)
    throw DomainError("Mobius::power requires a hyperbolic matrix");
  double root = std::sqrt(disc);
  double l1 = (tr + root) / 2.0, l2 = (tr - root) / 2.0;
  // Eigenvectors (columns of P) for l1 and l2.
  double v1x, v1y, v2x, v2y;
  if (std::abs(m.c) > std::abs(m.b)) {
    v1x = l1 - m.d; v1y = m.c;
    v2x = l2 - m.d; v2y = m.c;
  } else if (std::abs(m.b) > 0.0) {
    v1x = m.b; v1y = l1 - m.a;
    v2x = m.b; v2y = l2 - m.a;
  } else {  // diagonal matrix
    v1x = 1.0; v1y = 0.0; v2x = 0.0; v2y = 1.0;
    if (m.a < m.d) std::swap(v1x, v2x), std::swap(v1y, v2y);
  }
  double p1 = std::pow(l1, s), p2 = std::pow(l2, s);
  double dp = v1x * v2y - v1y * v2x;
  // P diag(p1, p2) P^{-1}
  return Mobius{(p1 * v1x * v2y - p2 * v2x * v1y) / dp,
                (p2 - p1) * v1x * v2x / dp,
                (p1 - p2) * v1y * v2y / dp,
                (p2 * v1x * v2y - p1 * v2x * v1y) / dp};
}

std::vector<double> Mobius::fixed_points_chart() const {
  // c t^2 + (d - a) t - b = 0
  if (std::abs(c) < 1e-300) {
    std::vector<double> out{std::numeric_limits<double>::infinity()};
    if (std::abs(d - a) > 1e-14) out.push_back(b / (d - a));
    return out;
  }
  double A = c, B = d - a, C = -b;
  double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-B / (2.0 * A)};
  double r = std::sqrt(disc);
  double q = -0.5 * (B + std::copysign(r, B));
  double t1 = q / A;
  double t2 = (q != 0.0) ? C / q : -B / A;
  return {t1, t2};
}

namespace {

// Mobius action in circle coordinates via the homogeneous representation
// (sin th, cos th), th = pi (x - 1/2); robust at the chart infinity.
class MobiusImpl final : public MapImpl {
 public:
  explicit MobiusImpl(const Mobius& m) : m_(m.normalized()) {
    ang0_ = angle(0.0);
    y0_ = wrap(ang0_ / kPi + 0.5);
  }

  double lift(double t) const override {
    double k = std::floor(t);
    double u = t - k;
    double w = (angle(u) - ang0_) / kPi;
    w -= std::floor(w);
    // Disambiguate the two branches adjacent to the period boundary; a
    // legitimate crossing of y0 can only occur at u = 0 or u -> 1.
    if (u < 0.5 && w > 1.0 - 1e-9) w = 0.0;
    if (u >= 0.5 && w < 1e-9) w = 1.0;
    return k + y0_ + w;
  }

  bool has_derivative() const override { return true; }
  double derivative(double x) const override {
    double th = kPi * (wrap(x) - 0.5);
    double su = std::sin(th), cu = std::cos(th);
    double up = m_.a * su + m_.b * cu;
    double vp = m_.c * su + m_.d * cu;
    return 1.0 / (up * up + vp * vp);  // det(m_) == 1
  }

  std::string kind() const override { return "mobius"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "mobius";
    d.add("a", m_.a);
    d.add("b", m_.b);
    d.add("c", m_.c);
    d.add("d", m_.d);
    return d;
  }
  const Mobius& matrix() const { return m_; }

 private:
  // Angle of the image direction in (-pi/2, pi/2], i.e. the chart angle of
  // the image point.
  double angle(double u) const {
    double th = kPi * (u - 0.5);
    double su = std::sin(th), cu = std::cos(th);
    double up = m_.a * su + m_.b * cu;
    double vp = m_.c * su + m_.d * cu;
    if (vp < 0.0 || (vp == 0.0 && up < 0.0)) {
      up = -up;
      vp = -vp;
    }
    return std::atan2(up, vp);
  }

  Mobius m_;
  double ang0_ = 0.0, y0_ = 0.0;
};

}  // namespace

CircleMap rotation(double alpha) {
  return CircleMap(std::make_shared<detail::RotationImpl>(alpha), 0);
}

CircleMap mobius(const Mobius& m) {
  return CircleMap(std::make_shared<MobiusImpl>(m));
}

Mobius north_south_matrix(CirclePoint attractor, CirclePoint repeller,
                          double strength) {
  if (!(strength > 1.0))
    throw ConstructionError("north-south strength must exceed 1");
  if (circle_dist(attractor, repeller) < 1e-9)
    throw ConstructionError("north-south fixed points must be distinct");
  double tha = kPi * (attractor.x - 0.5), thr = kPi * (repeller.x - 0.5);
  // Columns: attracting and repelling eigendirections.
  double ax = std::sin(tha), ay = std::cos(tha);
  double rx = std::sin(thr), ry = std::cos(thr);
  double mu = std::sqrt(strength);
  double dp = ax * ry - ay * rx;
  // P diag(mu, 1/mu) P^{-1}: multiplier 1/strength at the attractor.
  Mobius m{(mu * ax * ry - rx * ay / mu) / dp, (1.0 / mu - mu) * ax * rx / dp,
           (mu - 1.0 / mu) * ay * ry / dp, (ax * ry / mu - mu * rx * ay) / dp};
  return m.normalized();
}

CircleMap north_south(CirclePoint attractor, CirclePoint repeller,
                      double strength) {
  return mobius(north_south_matrix(attractor, repeller, strength));
}

namespace {

class FlowBumpImpl final : public MapImpl {
 public:
  explicit FlowBumpImpl(const FlowBumpParams& p)
      : support_(p.support),
        time_(p.time),
        amplitude_(p.amplitude > 0.0 ? p.amplitude : p.support.length / 4.0),
        steps_(p.rk4_steps) {
    if (steps_ < 8) throw ConstructionError("flow bump needs at least 8 RK4 steps");
  }

  // Inverse is left to the generic bisection so that it inverts the
  // discretised map exactly (running the flow backwards only inverts it
  // up to the RK4 truncation error).
  double lift(double t) const override { return t + displacement(wrap(t), time_); }

  bool has_derivative() const override { return true; }
  double derivative(double x) const override {
    double rel = wrap(wrap(x) - support_.left);
    if (rel >= support_.length) return 1.0;
    double v0 = speed(rel);
    if (v0 < 1e-13) return 1.0;  // endpoints are parabolic fixed points
    double rel1 = rel + displacement_rel(rel, time_);
    return speed(rel1) / v0;
  }

  std::string kind() const override { return "flow-bump"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "flow-bump";
    d.add("support_left", support_.left);
    d.add("support_length", support_.length);
    d.add("time", time_);
    d.add("amplitude", amplitude_);
    d.add("rk4_steps", steps_);
    return d;
  }

 private:
  double speed(double rel) const {
    double s = std::sin(kPi * rel / support_.length);
    return amplitude_ * s * s;
  }

  // Displacement of the point at support-relative position rel in [0, len).
  double displacement_rel(double rel, double T) const {
    double y = rel;
    double h = T / steps_;
    for (int i = 0; i < steps_; ++i) {
      double k1 = speed(y);
      double k2 = speed(clamp(y + 0.5 * h * k1));
      double k3 = speed(clamp(y + 0.5 * h * k2));
      double k4 = speed(clamp(y + h * k3));
      y = clamp(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }
    return y - rel;
  }

  double displacement(double x, double T) const {
    double rel = wrap(x - support_.left);
    if (rel >= support_.length) return 0.0;
    return displacement_rel(rel, T);
  }

  double clamp(double y) const {
    return std::min(std::max(y, 0.0), support_.length);
  }

  Arc support_;
  double time_;
  double amplitude_;
  int steps_;
};

}  // namespace

CircleMap flow_bump(const FlowBumpParams& p) {
  return CircleMap(std::make_shared<FlowBumpImpl>(p));
}

namespace {

// Two cubic Hermite arches around the centre: zero value at the centre and
// at both support endpoints, zero slope at the endpoints, prescribed slope
// at the centre. C1 across the whole circle.
class BumpPerturbationImpl final : public MapImpl {
 public:
  BumpPerturbationImpl(CircleMap base, double center, double radius,
                       double slope_delta)
      : base_(std::move(base)),
        center_(center),
        radius_(radius),
        delta_(slope_delta) {}

  double lift(double t) const override { return base_.lift(t) + hump(t); }

  bool has_derivative() const override { return base_.has_derivative(); }
  double derivative(double x) const override {
    return base_.derivative(x) + hump_slope(x);
  }

  std::string kind() const override { return "perturbed"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "perturbed";
    d.add("center", center_);
    d.add("radius", radius_);
    d.add("slope_delta", delta_);
    d.children.push_back(base_.describe());
    return d;
  }

  double hump_slope(double x) const {
    double s = circle_delta(center_, wrap(x));
    double u = s / radius_;
    if (u <= -1.0 || u >= 1.0) return 0.0;
    // d/ds of the Hermite arch below.
    if (u < 0.0) return delta_ * (3.0 * u * u + 4.0 * u + 1.0);
    return delta_ * (3.0 * u * u - 4.0 * u + 1.0);
  }

 private:
  double hump(double t) const {
    double s = circle_delta(center_, wrap(t));
    double u = s / radius_;
    if (u <= -1.0 || u >= 1.0) return 0.0;
    // Cubic in u with value 0 and slope delta*radius at u=0, value and
    // slope 0 at u = +-1 (per side).
    double arch = (u < 0.0) ? u * (1.0 + u) * (1.0 + u)
                            : u * (1.0 - u) * (1.0 - u);
    return delta_ * radius_ * arch;
  }

  CircleMap base_;
  double center_;
  double radius_;
  double delta_;
};

}  // namespace

CircleMap bump_perturbation(const CircleMap& f, CirclePoint b,
                            double new_derivative, double radius) {
  if (!f.has_derivative())
    throw DomainError("bump perturbation needs a differentiable base map");
  if (!(radius > 0.0) || radius >= 0.25)
    throw ConstructionError("bump radius must lie in (0, 0.25)");
  if (!(new_derivative > 0.0))
    throw ConstructionError("perturbed derivative must stay positive");
  double delta = new_derivative - f.derivative(b.x);
  auto impl = std::make_shared<BumpPerturbationImpl>(f, b.x, radius, delta);
  // The correction is narrow; check monotonicity on a support-refined grid.
  int sub = 512;
  for (int i = -sub; i <= sub; ++i) {
    double x = b.x + radius * i / sub;
    double slope = f.derivative(x) + impl->hump_slope(x);
    if (!(slope > 0.0))
      throw ConstructionError(
          "perturbation too large: map would lose monotonicity");
  }
  int grid = std::max(kDefaultValidationGrid,
                      static_cast<int>(std::ceil(16.0 / radius)));
  return CircleMap(std::move(impl), std::min(grid, 1 << 20));
}

namespace {

class PwlImpl final : public MapImpl {
 public:
  // xs strictly increasing within one period, ys strictly increasing with
  // ys.back() - ys.front() < 1; both describe one fundamental domain.
  PwlImpl(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {}

  double lift(double t) const override {
    double base = xs_.front();
    double u = base + wrap(t - base);
    auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
    std::size_t i = (it == xs_.begin()) ? 0 : (it - xs_.begin() - 1);
    double x0 = xs_[i], y0 = ys_[i];
    double x1 = (i + 1 < xs_.size()) ? xs_[i + 1] : xs_.front() + 1.0;
    double y1 = (i + 1 < ys_.size()) ? ys_[i + 1] : ys_.front() + 1.0;
    double v = y0 + (u - x0) * (y1 - y0) / (x1 - x0);
    return v + (t - u);
  }

  double inverse_lift(double y) const override {
    double base = ys_.front();
    double v = base + wrap(y - base);
    auto it = std::upper_bound(ys_.begin(), ys_.end(), v);
    std::size_t i = (it == ys_.begin()) ? 0 : (it - ys_.begin() - 1);
    double x0 = xs_[i], y0 = ys_[i];
    double x1 = (i + 1 < xs_.size()) ? xs_[i + 1] : xs_.front() + 1.0;
    double y1 = (i + 1 < ys_.size()) ? ys_[i + 1] : ys_.front() + 1.0;
    double u = x0 + (v - y0) * (x1 - x0) / (y1 - y0);
    return u + (y - v);
  }

  bool has_derivative() const override { return true; }
  double derivative(double x) const override {
    double base = xs_.front();
    double u = base + wrap(x - base);
    auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
    std::size_t i = (it == xs_.begin()) ? 0 : (it - xs_.begin() - 1);
    double x0 = xs_[i], y0 = ys_[i];
    double x1 = (i + 1 < xs_.size()) ? xs_[i + 1] : xs_.front() + 1.0;
    double y1 = (i + 1 < ys_.size()) ? ys_[i + 1] : ys_.front() + 1.0;
    return (y1 - y0) / (x1 - x0);
  }

  std::string kind() const override { return "piecewise-linear"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "piecewise-linear";
    d.add_array("x", xs_);
    d.add_array("y", ys_);
    return d;
  }

 private:
  std::vector<double> xs_, ys_;
};

}  // namespace

CircleMap piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2)
    throw ConstructionError("piecewise-linear map needs at least two knots");
  for (auto& [x, y] : knots) x = wrap(x);
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (knots[i].first - knots[i - 1].first <= 1e-12)
      throw ConstructionError("piecewise-linear knots must be distinct");
  std::vector<double> xs, ys;
  xs.reserve(knots.size());
  ys.reserve(knots.size());
  for (const auto& [x, y] : knots) xs.push_back(x);
  // Unwrap the y values into an increasing sequence; anchor at the first
  // knot and walk the fractional gaps so the whole thing spans under 1.
  double cur = wrap(knots.front().second);
  ys.push_back(cur);
  for (std::size_t i = 1; i < knots.size(); ++i) {
    double step = wrap(knots[i].second - knots[i - 1].second);
    if (step <= 0.0)
      throw ConstructionError("piecewise-linear knots must be strictly cyclic");
    cur += step;
    ys.push_back(cur);
  }
  if (ys.back() - ys.front() >= 1.0)
    throw ConstructionError("piecewise-linear knot images wrap more than once");
  return CircleMap(std::make_shared<PwlImpl>(std::move(xs), std::move(ys)));
}

namespace {

class ReflectedImpl final : public MapImpl {
 public:
  explicit ReflectedImpl(CircleMap base) : base_(std::move(base)) {}
  double lift(double t) const override { return -base_.lift(-t); }
  double inverse_lift(double y) const override {
    return -base_.impl()->inverse_lift(-y);
  }
  bool has_derivative() const override { return base_.has_derivative(); }
  double derivative(double x) const override {
    return base_.derivative(wrap(-x));
  }
  std::string kind() const override { return "reflected"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "reflected";
    d.children.push_back(base_.describe());
    return d;
  }

 private:
  CircleMap base_;
};

struct GlueSegment {
  double x0, x1;   // unwrapped breakpoints, x0 < x1
  bool is_map;
  CircleMap map;
  double offset = 0.0;          // lift offset for map segments
  double y0 = 0.0, y1 = 0.0;    // Hermite data for interpolation segments
  double m0 = 0.0, m1 = 0.0;
};

class GlueImpl final : public MapImpl {
 public:
  explicit GlueImpl(std::vector<GlueSegment> segs) : segs_(std::move(segs)) {}

  double lift(double t) const override {
    double base = segs_.front().x0;
    double u = base + wrap(t - base);
    const GlueSegment& s = segment(u);
    double v;
    if (s.is_map) {
      v = s.map.lift(u) + s.offset;
    } else {
      double h = s.x1 - s.x0;
      double z = (u - s.x0) / h;
      double h00 = (1 + 2 * z) * (1 - z) * (1 - z);
      double h10 = z * (1 - z) * (1 - z);
      double h01 = z * z * (3 - 2 * z);
      double h11 = z * z * (z - 1);
      v = h00 * s.y0 + h10 * h * s.m0 + h01 * s.y1 + h11 * h * s.m1;
    }
    return v + (t - u);
  }

  bool has_derivative() const override {
    for (const auto& s : segs_)
      if (s.is_map && !s.map.has_derivative()) return false;
    return true;
  }

  double derivative(double x) const override {
    double base = segs_.front().x0;
    double u = base + wrap(x - base);
    const GlueSegment& s = segment(u);
    if (s.is_map) return s.map.derivative(u);
    double h = s.x1 - s.x0;
    double z = (u - s.x0) / h;
    double d00 = 6 * z * (z - 1) / h;
    double d10 = (3 * z * z - 4 * z + 1);
    double d01 = -6 * z * (z - 1) / h;
    double d11 = (3 * z * z - 2 * z);
    return d00 * s.y0 + d10 * s.m0 + d01 * s.y1 + d11 * s.m1;
  }

  std::string kind() const override { return "glued"; }
  Descriptor describe() const override {
    Descriptor d;
    d.kind = "glued";
    std::vector<double> xs;
    for (const auto& s : segs_) xs.push_back(wrap(s.x0));
    d.add_array("breakpoints", xs);
    for (const auto& s : segs_) {
      if (s.is_map) {
        d.children.push_back(s.map.describe());
      } else {
        Descriptor c;
        c.kind = "hermite";
        c.add("y0", s.y0);
        c.add("y1", s.y1);
        c.add("m0", s.m0);
        c.add("m1", s.m1);
        d.children.push_back(c);
      }
    }
    return d;
  }

 private:
  const GlueSegment& segment(double u) const {
    for (const auto& s : segs_)
      if (u < s.x1) return s;
    return segs_.back();
  }
  std::vector<GlueSegment> segs_;
};

}  // namespace

CircleMap reflect_conjugate(const CircleMap& f) {
  return CircleMap(std::make_shared<ReflectedImpl>(f), 0);
}

CircleMap piecewise_glue(std::vector<GluePiece> pieces) {
  if (pieces.size() < 2)
    throw ConstructionError("piecewise glue needs at least two pieces");
  for (auto& p : pieces) p.x0 = wrap(p.x0);
  std::sort(pieces.begin(), pieces.end(),
            [](const GluePiece& a, const GluePiece& b) { return a.x0 < b.x0; });
  const std::size_t n = pieces.size();
  for (std::size_t i = 1; i < n; ++i)
    if (pieces[i].x0 - pieces[i - 1].x0 <= 1e-12)
      throw ConstructionError("piecewise glue breakpoints must be distinct");
  // Rotate so the walk starts on a map piece (its values anchor the lift),
  // then unwrap the sorted breakpoints across one period.
  std::size_t rot = 0;
  while (rot < n && !pieces[rot].is_map) ++rot;
  if (rot == n)
    throw ConstructionError("piecewise glue needs at least one map piece");

  std::vector<GlueSegment> segs(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (rot + i) % n;
    std::size_t j1 = (rot + i + 1) % n;
    segs[i].x0 = pieces[j].x0 + (j < rot ? 1.0 : 0.0);
    segs[i].x1 = pieces[j1].x0 + (j1 <= rot ? 1.0 : 0.0);
    segs[i].is_map = pieces[j].is_map;
    segs[i].map = pieces[j].map;
  }

  // Walk the values once around the circle.
  const double anchor = wrap(segs[0].map.apply(wrap(segs[0].x0)));
  double cur = anchor;
  for (std::size_t i = 0; i < n; ++i) {
    GlueSegment& s = segs[i];
    if (s.is_map) {
      double raw0 = s.map.lift(s.x0);
      s.offset = cur - raw0;
      cur += s.map.lift(s.x1) - raw0;
      const GlueSegment& next = segs[(i + 1) % n];
      if (next.is_map &&
          circle_dist(wrap(cur), next.map.apply(wrap(s.x1))) > 1e-7)
        throw ConstructionError(
            "piecewise glue: adjacent map pieces disagree at their junction");
    } else {
      GlueSegment& next = segs[(i + 1) % n];
      if (!next.is_map)
        throw ConstructionError("adjacent interpolation pieces are ambiguous");
      double target = wrap(next.map.apply(wrap(s.x1)));
      double rise = wrap(target - wrap(cur));
      if (rise < 1e-12)
        throw ConstructionError("interpolation piece has nothing to span");
      s.y0 = cur;
      s.y1 = cur + rise;
      double secant = rise / (s.x1 - s.x0);
      // Slopes from the neighbouring maps, clamped into the monotone range.
      const GlueSegment& prev = segs[(i + n - 1) % n];
      double d0 = prev.is_map && prev.map.has_derivative()
                      ? prev.map.derivative(wrap(s.x0))
                      : secant;
      double d1 = next.is_map && next.map.has_derivative()
                      ? next.map.derivative(wrap(s.x1))
                      : secant;
      s.m0 = std::clamp(d0, 0.0, 3.0 * secant);
      s.m1 = std::clamp(d1, 0.0, 3.0 * secant);
      cur = s.y1;
    }
  }
  if (std::abs(cur - (anchor + 1.0)) > 1e-7)
    throw ConstructionError(
        "piecewise glue values do not close up around the circle");

  return CircleMap(std::make_shared<GlueImpl>(std::move(segs)));
}

std::vector<double> geometric_lengths(int n) {
  std::vector<double> out;
  out.reserve(n);
  double v = 0.05;  // 2^{-1}/10
  for (int i = 0; i < n; ++i) {
    out.push_back(v);
    v /= 2.0;
  }
  return out;
}

}  // namespace ifslab
