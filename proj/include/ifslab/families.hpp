#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ifslab/circle.hpp"
#include "ifslab/circle_map.hpp"

namespace ifslab {

// Chart between the circle and the projective line: t = tan(pi (x - 1/2)).
// x = 1/2 maps to t = 0 and x = 0 to t = infinity.
double chart_from_circle(double x);
double circle_from_chart(double t);

// Real 2x2 matrix with positive determinant, acting on the chart coordinate
// by t -> (a t + b) / (c t + d).
struct Mobius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }
  Mobius normalized() const;  // scaled to det 1
  Mobius inverse() const { return Mobius{d, -b, -c, a}; }
  double act(double t) const;  // chart action; infinities handled

  // Fractional power through the eigendecomposition; requires a hyperbolic
  // matrix (distinct real eigenvalues).
  Mobius power(double s) const;

  // Chart coordinates of the fixed points (may contain an infinity);
  // empty when elliptic.
  std::vector<double> fixed_points_chart() const;
};

Mobius operator*(const Mobius& l, const Mobius& r);

CircleMap rotation(double alpha);
CircleMap mobius(const Mobius& m);

// Hyperbolic Mobius map fixing `attractor` and `repeller` with derivative
// 1/strength at the attractor and strength at the repeller.
CircleMap north_south(CirclePoint attractor, CirclePoint repeller,
                      double strength);
Mobius north_south_matrix(CirclePoint attractor, CirclePoint repeller,
                          double strength);

// Time-`time` map of the vector field amplitude * sin^2(pi u) supported on
// `support` (u = normalized position inside the arc), integrated with a
// fixed-step RK4 scheme. Identity outside the support.
struct FlowBumpParams {
  Arc support;
  double time = 1.0;
  double amplitude = 0.0;  // <= 0 picks the default support.length / 4
  int rk4_steps = 256;
};
CircleMap flow_bump(const FlowBumpParams& p);

// C1 perturbation of f supported on the radius-neighbourhood of b: the
// value f(b) is preserved while f'(b) becomes new_derivative. Throws
// ConstructionError when the correction would break monotonicity.
CircleMap bump_perturbation(const CircleMap& f, CirclePoint b,
                            double new_derivative, double radius);

// Piecewise-linear circle homeomorphism through the given knot pairs
// (x_i -> y_i); both sequences must be in matching cyclic order.
CircleMap piecewise_linear(std::vector<std::pair<double, double>> knots);

// Conjugation by the reflection x -> -x; sends f to x -> -f(-x). Preserves
// orientation and is used to mirror constructions across 0.
CircleMap reflect_conjugate(const CircleMap& f);

// Building block for glued maps: consecutive pieces cover the circle, each
// either delegating to an existing map or interpolating monotonically (cubic
// Hermite with clamped slopes) between the neighbouring pieces' endpoint
// values. The first piece must be a map piece.
struct GluePiece {
  double x0 = 0.0;  // left breakpoint of the piece
  bool is_map = true;
  CircleMap map;  // ignored for interpolation pieces
};
CircleMap piecewise_glue(std::vector<GluePiece> pieces);

// ---- Denjoy blow-up -------------------------------------------------------

// Static data of a blow-up: orbit points of the base circle, one inserted
// interval per point. Shared by the blown-up generators and the projection.
struct DenjoyChart {
  std::vector<double> points;       // sorted old-circle positions
  std::vector<double> lengths;      // inserted lengths, aligned with points
  std::vector<double> new_left;     // left edges of the inserted intervals
  std::vector<double> mass_before;  // total inserted length left of points[i]
  double total = 0.0;               // sum of lengths, < 1

  // New-circle coordinate of an old point (left edge of its gap if blown).
  double nu(double x) const;
  // Old-circle coordinate of a new point (collapses inserted intervals).
  double pi(double y) const;
  // Index of the inserted interval containing new-circle point y, or -1.
  int gap_index(double y) const;
  // Index of the blown point within tolerance of old-circle x, or -1.
  int point_index(double x, double tol = 1e-9) const;
};

// Monotone degree-one projection from the blown-up circle onto the original
// one. Not a homeomorphism: inserted intervals collapse to points.
class CollapseProjection {
 public:
  explicit CollapseProjection(std::shared_ptr<const DenjoyChart> chart)
      : chart_(std::move(chart)) {}
  double apply(double y) const;
  double lift(double t) const;
  const DenjoyChart& chart() const { return *chart_; }

 private:
  std::shared_ptr<const DenjoyChart> chart_;
};

struct DenjoyBlowup {
  Ifs system;
  CollapseProjection projection;
};

// Blows up the orbit of `orbit_seed` under the generators of `base` and
// their inverses. The orbit is truncated to the first `depth` points in
// breadth-first discovery order; lengths[k] is inserted at the k-th point
// (the vector must provide at least `depth` entries). depth = 0 returns the
// original system with the identity projection.
DenjoyBlowup denjoy_blowup(const Ifs& base, CirclePoint orbit_seed,
                           const std::vector<double>& lengths, int depth);

// Same construction started from several seeds at once (used by the zoo
// builders that blow up two distinct orbits). Points are discovered in a
// round-robin breadth-first order over the seeds.
DenjoyBlowup denjoy_blowup_multi(const Ifs& base,
                                 const std::vector<CirclePoint>& seeds,
                                 const std::vector<double>& lengths,
                                 int depth);

// Chart from raw data: positions are wrapped and sorted, lengths follow
// their positions. Validates positivity and total length.
std::shared_ptr<const DenjoyChart> make_denjoy_chart(
    std::vector<double> points, std::vector<double> lengths);

// Single blown-up generator over an existing chart. Exactly semiconjugate
// to `base` through the chart's collapse projection, except on microscopic
// patches at the orbit truncation boundary where the conjugated map would
// jump (images or preimages of blown points that fell outside the chart).
CircleMap denjoy_map(const CircleMap& base,
                     std::shared_ptr<const DenjoyChart> chart);

// First n terms of the standard summable gap-length sequence 2^{-k}/10.
std::vector<double> geometric_lengths(int n);

}  // namespace ifslab
