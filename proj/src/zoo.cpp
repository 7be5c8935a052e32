#include "ifslab/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ifslab/factorization.hpp"
#include "ifslab/families.hpp"

namespace ifslab {

namespace {

bool arcs_overlap(const Arc& p, const Arc& q) {
  if (wrap(q.left - p.left) < p.length) return true;
  return wrap(p.left - q.left) < q.length;
}

bool meets(const IntervalDomain& d, const Arc& a) {
  for (const auto& arc : d.arcs)
    if (arcs_overlap(arc, a)) return true;
  return false;
}

IntervalDomain domain_minus(const IntervalDomain& d, const Arc& cut) {
  std::vector<Arc> arcs = domain_complement(d).arcs;
  arcs.push_back(cut);
  return domain_complement(domain_normalize(std::move(arcs)));
}

IntervalDomain domain_intersection(const IntervalDomain& a,
                                   const IntervalDomain& b) {
  std::vector<Arc> arcs = domain_complement(a).arcs;
  for (const auto& q : domain_complement(b).arcs) arcs.push_back(q);
  return domain_complement(domain_normalize(std::move(arcs)));
}

}  // namespace

ZooSystem build_one_sided_minimal(int depth) {
  if (depth < 1) throw DomainError("build_one_sided_minimal needs depth >= 1");
  const double kStrength = 50.0;
  const double kDiscRadius = 0.05;

  Mobius m1 = north_south_matrix(CirclePoint(0.0), CirclePoint(0.5), kStrength);
  Mobius m2 = north_south_matrix(CirclePoint(0.25), CirclePoint(0.75), kStrength);
  CircleMap f1 = mobius(m1);
  CircleMap f1i = mobius(m1.inverse());
  CircleMap f2 = mobius(m2);
  CircleMap f2i = mobius(m2.inverse());

  // Ping-pong discs around the four axis endpoints. At strength 50 each
  // generator maps the complement of its repelling disc strictly inside its
  // attracting disc, so refining the disc union under the four moves
  // squeezes down onto the limit set.
  const Arc disc0{1.0 - kDiscRadius, 2.0 * kDiscRadius};
  const Arc disc25{0.25 - kDiscRadius, 2.0 * kDiscRadius};
  const Arc disc50{0.5 - kDiscRadius, 2.0 * kDiscRadius};
  const Arc disc75{0.75 - kDiscRadius, 2.0 * kDiscRadius};

  struct Move {
    CircleMap map;
    Arc repelling;
  };
  const std::vector<Move> moves = {
      {f1, disc50}, {f1i, disc0}, {f2, disc75}, {f2i, disc25}};

  IntervalDomain lambda = domain_normalize({disc0, disc25, disc50, disc75});
  for (int level = 0; level < depth; ++level) {
    std::vector<Arc> next;
    for (const auto& mv : moves) {
      IntervalDomain img =
          domain_image(mv.map, domain_minus(lambda, mv.repelling));
      next.insert(next.end(), img.arcs.begin(), img.arcs.end());
    }
    lambda = domain_normalize(std::move(next));
  }

  // The commutator is hyperbolic and fixes the two ends of one limit-set
  // gap; that gap is the wrapped line the glued flow acts on.
  Mobius cm = m1 * m2 * m1.inverse() * m2.inverse();
  std::vector<double> fp = cm.fixed_points_chart();
  if (fp.size() != 2)
    throw ConstructionError("the Schottky commutator is not hyperbolic");
  double pa = circle_from_chart(fp[0]);
  double pb = circle_from_chart(fp[1]);
  Arc i0;
  bool found = false;
  for (const Arc& cand : {arc_between(pa, pb), arc_between(pb, pa)}) {
    if (cand.length < 0.02) continue;
    Arc inner{wrap(cand.left + 0.01), cand.length - 0.02};
    if (!meets(lambda, inner)) {
      i0 = cand;
      found = true;
      break;
    }
  }
  if (!found)
    throw ConstructionError("no commutator gap stays clear of the limit set");

  // Time minus sqrt(2) along the commutator flow inside the gap, identity
  // outside; the commutator fixes both endpoints, so the pieces agree.
  CircleMap f3 =
      piecewise_glue({{i0.left, true, mobius(cm.power(-std::sqrt(2.0)))},
                      {i0.right(), true, CircleMap()}});

  // Contracting halves of f1 and f2 glued across the two clear corridors
  // between the discs: every limit point lands in an attracting cell, so
  // the limit set is pressed strictly into itself.
  CircleMap f4 = piecewise_glue({{0.58, true, f1},
                                 {0.42, false, CircleMap()},
                                 {0.44, true, f2},
                                 {0.56, false, CircleMap()}});

  ZooSystem out;
  out.name = "one-sided-minimal";
  out.depth = depth;
  out.ifs = Ifs{{f1, f1i, f2, f2i, f3, f4}, {}};
  out.predictions.backward_full = true;
  out.predictions.forward_inside_backward = true;
  out.predictions.expected_d = 1;
  out.predictions.factor_verdict = "synchronizing";
  out.predictions.forward_cover = lambda;
  out.predictions.core_interval = i0;
  return out;
}

ZooSystem build_denjoy_nested(int depth) {
  if (depth < 1) throw DomainError("build_denjoy_nested needs depth >= 1");
  ZooSystem base = build_one_sided_minimal(6);
  DenjoyBlowup blow = denjoy_blowup(base.ifs, CirclePoint(0.123),
                                    geometric_lengths(depth), depth);
  const DenjoyChart& chart = blow.projection.chart();

  std::vector<Arc> gaps;
  gaps.reserve(chart.points.size());
  for (std::size_t i = 0; i < chart.points.size(); ++i)
    gaps.push_back(Arc{chart.new_left[i], chart.lengths[i]});
  IntervalDomain backward = domain_complement(domain_normalize(gaps));

  // Forward cover: base limit-set cells pushed through the chart, with the
  // inserted gaps cut back out.
  std::vector<Arc> fw;
  for (const Arc& a : base.predictions.forward_cover->arcs) {
    double left = chart.nu(a.left);
    double old_right = a.right();
    double right = chart.nu(old_right);
    int pi = chart.point_index(old_right);
    if (pi >= 0) right += chart.lengths[pi];
    fw.push_back(Arc{left, wrap(right - left)});
  }
  IntervalDomain forward =
      domain_intersection(domain_normalize(std::move(fw)), backward);

  ZooSystem out;
  out.name = "denjoy-nested";
  out.depth = depth;
  out.ifs = blow.system;
  out.predictions.forward_inside_backward = true;
  out.predictions.expected_d = 1;
  out.predictions.forward_cover = forward;
  out.predictions.backward_cover = backward;
  return out;
}

ZooSystem build_cantorval(int depth) {
  if (depth < 2)
    throw DomainError("build_cantorval needs depth >= 2 gaps per orbit");
  const double alpha = std::sqrt(2.0) - 1.0;
  const double kSecondSeed = 0.6180339887498949;  // independent orbit offset
  Ifs base{{rotation(alpha)}, {}};
  const int total = 2 * depth;
  DenjoyBlowup blow =
      denjoy_blowup_multi(base, {CirclePoint(0.0), CirclePoint(kSecondSeed)},
                          geometric_lengths(total), total);
  const DenjoyChart& chart = blow.projection.chart();
  const std::size_t n = chart.points.size();

  // Tag each blown point with its orbit by direct comparison against the
  // rotation multiples of the two seeds.
  std::vector<bool> first_orbit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    bool is_first = false, is_second = false;
    for (int k = -total; k <= total; ++k) {
      double off = wrap(static_cast<double>(k) * alpha);
      if (circle_dist(chart.points[i], off) < 1e-7) is_first = true;
      if (circle_dist(chart.points[i], wrap(kSecondSeed + off)) < 1e-7)
        is_second = true;
    }
    if (is_first == is_second)
      throw ConstructionError("blown point has an ambiguous orbit");
    first_orbit[i] = is_first;
  }

  auto gap_at = [&](double old_x) {
    int i = chart.point_index(old_x);
    if (i < 0) throw ConstructionError("expected a blown point");
    return Arc{chart.new_left[i], chart.lengths[i]};
  };
  const Arc gap_i0 = gap_at(0.0);
  const Arc gap_j0 = gap_at(kSecondSeed);

  CircleMap f = blow.system.maps[0];
  auto flow_pair = [&](double time) {
    return compose_maps({flow_bump({gap_i0, time, 0.0, 256}),
                         flow_bump({gap_j0, time, 0.0, 256})});
  };
  CircleMap flow1 = flow_pair(1.0);
  CircleMap flow2 = flow_pair(-std::sqrt(2.0));

  // Rearranging map: a second-orbit gap flanked (cyclically) by first-orbit
  // gaps. The flanking gaps are pinned at their outer ends and everything
  // between them is funneled into the middle gap.
  int jsel = -1;
  for (std::size_t i = 0; i < n; ++i)
    if (!first_orbit[i]) {
      jsel = static_cast<int>(i);
      break;
    }
  auto scan = [&](int start, int step) {
    const int count = static_cast<int>(n);
    for (int k = 1; k < count; ++k) {
      int idx = ((start + step * k) % count + count) % count;
      if (first_orbit[idx]) return idx;
    }
    throw ConstructionError("no flanking first-orbit gap");
  };
  const int ileft = scan(jsel, -1);
  const int iright = scan(jsel, +1);
  if (ileft == iright)
    throw ConstructionError("need two distinct flanking gaps");
  const Arc gi1{chart.new_left[ileft], chart.lengths[ileft]};
  const Arc gj{chart.new_left[jsel], chart.lengths[jsel]};
  const Arc gi2{chart.new_left[iright], chart.lengths[iright]};
  const double p1 = gi1.left, p2 = gi1.right();
  const double q1 = gj.left, q2 = gj.right();
  const double p2p = gi2.right();
  const double delta = gj.length / 4.0;
  CircleMap g = piecewise_linear({{p1, p1},
                                  {p2, wrap(q1 + delta)},
                                  {gi2.left, wrap(q2 - delta)},
                                  {p2p, p2p}});

  std::vector<Arc> gaps_first, gaps_second;
  for (std::size_t i = 0; i < n; ++i)
    (first_orbit[i] ? gaps_first : gaps_second)
        .push_back(Arc{chart.new_left[i], chart.lengths[i]});

  ZooSystem out;
  out.name = "cantorval";
  out.depth = depth;
  out.ifs = Ifs{{f, f.inverse(), flow1, flow2, g}, {}};
  out.predictions.expected_d = 1;
  // Forward: complement of the first-orbit gaps; backward: of the second.
  out.predictions.forward_cover =
      domain_complement(domain_normalize(std::move(gaps_first)));
  out.predictions.backward_cover =
      domain_complement(domain_normalize(std::move(gaps_second)));
  out.predictions.core_interval = arc_between(p1, p2p);
  return out;
}

ZooSystem build_cantor_pair(int depth) {
  if (depth < 1) throw DomainError("build_cantor_pair needs depth >= 1");
  if (depth > 6)
    throw DomainError(
        "cantor-pair cells beyond depth 6 collapse in double precision");

  const double rt10 = std::sqrt(10.0);
  const Mobius t0{0.1, 0.0, 0.0, 10.0};    // chart t -> t / 100
  const Mobius t1{0.1, 9.9, 0.0, 10.0};    // contraction to 1
  const Mobius tm1{0.1, -9.9, 0.0, 10.0};  // contraction to -1
  const Mobius q{1.0 / rt10, 0.0, 0.0, rt10};  // t -> t / 10, the half-step

  // Conjugates of the expanding branch by the half-step, one for each sign
  // the intermediate point can take.
  const Mobius lower = q.inverse() * tm1.inverse() * q;  // chart [-10, -9.9]
  const Mobius upper = q * tm1.inverse() * q;            // chart [-9.9, -9.8]

  CircleMap g =
      piecewise_glue({{circle_from_chart(-10.0), true, mobius(lower)},
                      {circle_from_chart(-9.9), true, mobius(upper)},
                      {circle_from_chart(-9.8), false, CircleMap()},
                      {circle_from_chart(-1.0), true, mobius(t1)},
                      {circle_from_chart(1.0), true, CircleMap()}});
  CircleMap gt = reflect_conjugate(g);

  // Cantor cells T_w([-1, 1]) of the three-contraction system, keeping the
  // words that start with a +-1 step (the two side copies).
  auto side_cells = [&](int r) {
    std::vector<Mobius> pref = {t1, tm1};
    for (int k = 1; k < r; ++k) {
      std::vector<Mobius> next;
      next.reserve(pref.size() * 3);
      for (const auto& p : pref) {
        next.push_back(p * tm1);
        next.push_back(p * t0);
        next.push_back(p * t1);
      }
      pref = std::move(next);
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(pref.size());
    for (const auto& p : pref) out.emplace_back(p.act(-1.0), p.act(1.0));
    return out;
  };
  auto chart_arc = [](double lo, double hi) {
    return arc_between(circle_from_chart(lo), circle_from_chart(hi));
  };

  // Scaled copies of the side cells for band exponents |i| <= depth, with
  // the refinement shallowing as |i| grows so every arc stays representable,
  // plus windows around 0 and infinity that absorb all deeper bands.
  const double h0 = std::pow(100.0, -(depth + 1));
  const double hinf = 0.98 * std::pow(100.0, depth);
  std::vector<Arc> cells;
  cells.push_back(chart_arc(-h0, h0));
  cells.push_back(
      arc_between(circle_from_chart(hinf), circle_from_chart(-hinf)));
  for (int i = -depth; i <= depth; ++i) {
    const double scale = std::pow(100.0, -i);
    const int r = std::max(1, depth - std::abs(i));
    for (const auto& [lo, hi] : side_cells(r))
      cells.push_back(chart_arc(lo * scale, hi * scale));
  }
  IntervalDomain kplus = domain_normalize(std::move(cells));
  IntervalDomain kminus = domain_image(mobius(q), kplus);

  ZooSystem out;
  out.name = "cantor-pair";
  out.depth = depth;
  out.ifs = Ifs{{mobius(t0), mobius(t0.inverse()), g, gt}, {}};
  out.predictions.expected_d = 1;
  out.predictions.forward_cover = kplus;
  out.predictions.backward_cover = kminus;
  out.predictions.intersection_points = {CirclePoint(0.5), CirclePoint(0.0)};
  return out;
}

ZooSystem build_lifted_perturbed(const ZooSystem& base, int d,
                                 int bump_gap_index) {
  if (d < 1) throw DomainError("cover degree must be positive");
  if (!base.predictions.forward_cover)
    throw DomainError("base system does not carry a proper forward cover");
  IntervalDomain gaps = domain_complement(*base.predictions.forward_cover);
  if (bump_gap_index < 0 || bump_gap_index >= gaps.components())
    throw DomainError("bump gap index out of range");
  const Arc gap = gaps.arcs[bump_gap_index];
  const Arc lifted_gap{gap.left / d, gap.length / d};

  Ifs lifted = lift_to_cover(base.ifs, d);

  // The bump must move points visibly; double the flow time until the
  // displacement clears the detectability bar (it is capped by the gap
  // width, so narrow gaps are rejected).
  CircleMap bump;
  double disp = 0.0;
  double time = 1.0;
  for (int attempt = 0; attempt < 8 && disp <= 0.011; ++attempt) {
    bump = flow_bump({lifted_gap, time, 0.0, 256});
    disp = 0.0;
    for (int i = 0; i <= 256; ++i) {
      double x = wrap(lifted_gap.left + lifted_gap.length * i / 256.0);
      disp = std::max(disp, circle_dist(x, bump.apply(x)));
    }
    time *= 2.0;
  }
  if (disp <= 0.01)
    throw ConstructionError("bump gap is too narrow for a visible bump");

  std::vector<CircleMap> maps = lifted.maps;
  maps.push_back(bump);

  auto lift_domain = [&](const IntervalDomain& dom) {
    std::vector<Arc> arcs;
    arcs.reserve(dom.arcs.size() * static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
      for (const Arc& a : dom.arcs)
        arcs.push_back(Arc{wrap((a.left + k) / d), a.length / d});
    return domain_normalize(std::move(arcs));
  };

  ZooSystem out;
  out.name = "lifted-perturbed";
  out.depth = base.depth;
  out.ifs = Ifs{std::move(maps), {}};
  out.predictions = base.predictions;
  out.predictions.expected_d = d;
  out.predictions.factor_verdict =
      d > 1 ? "obstructed" : base.predictions.factor_verdict;
  out.predictions.bump_support = lifted_gap;
  out.predictions.intersection_points.clear();
  out.predictions.core_interval.reset();
  if (base.predictions.forward_cover)
    out.predictions.forward_cover =
        lift_domain(*base.predictions.forward_cover);
  if (base.predictions.backward_cover)
    out.predictions.backward_cover =
        lift_domain(*base.predictions.backward_cover);
  return out;
}

ZooSystem build_zoo(const std::string& name, int depth) {
  if (name == "one-sided-minimal") return build_one_sided_minimal(depth);
  if (name == "denjoy-nested") return build_denjoy_nested(depth);
  if (name == "cantorval") return build_cantorval(depth);
  if (name == "cantor-pair") return build_cantor_pair(depth);
  if (name == "lifted-perturbed") {
    ZooSystem base = build_one_sided_minimal(depth);
    IntervalDomain gaps = domain_complement(*base.predictions.forward_cover);
    int best = 0;
    for (int i = 1; i < gaps.components(); ++i)
      if (gaps.arcs[i].length > gaps.arcs[best].length) best = i;
    return build_lifted_perturbed(base, 2, best);
  }
  throw DomainError("unknown zoo system: " + name);
}

}  // namespace ifslab
