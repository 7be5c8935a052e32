#include "ifslab/morse_smale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ifslab/families.hpp"
#include "ifslab/rotation_numbers.hpp"

namespace ifslab {

namespace {

// Derivative at a circle point: analytic when the map provides one, central
// differences through the lift with one Richardson step otherwise. The lift
// is smooth across 0 where apply() is not, so the stencil never wraps.
double map_derivative(const CircleMap& f, double x) {
  if (f.has_derivative()) {
    try {
      return f.derivative(wrap(x));
    } catch (const Error&) {
      // fall through to the finite-difference estimate (kink points)
    }
  }
  auto slope = [&](double h) { return (f.lift(x + h) - f.lift(x - h)) / (2.0 * h); };
  const double h = 1e-5;
  return (4.0 * slope(h / 2.0) - slope(h)) / 3.0;
}

FixedPointKind classify(double multiplier) {
  if (std::abs(multiplier - 1.0) <= 1e-6) return FixedPointKind::kNeutral;
  return multiplier < 1.0 ? FixedPointKind::kAttractor : FixedPointKind::kRepeller;
}

}  // namespace

std::size_t FixedPointSet::count(FixedPointKind k) const {
  std::size_t n = 0;
  for (const auto& p : points)
    if (p.kind == k) ++n;
  return n;
}

FixedPointSet fixed_points(const CircleMap& f, double resolution) {
  if (!(resolution > 0.0) || resolution >= 0.5)
    throw DomainError("fixed_points needs a resolution in (0, 1/2)");

  auto est = translation_number(f, 10000);
  if (circle_dist(est.value, 0.0) > est.error_bound)
    throw DomainError("translation number is bounded away from zero, so the map has no fixed points");

  // Fixed points are the solutions of lift(x) - x = k. The displacement
  // lift(x) - x is continuous and periodic with range of width < 1, so a
  // single integer k works for all of them; the translation number estimate
  // pins it down. Scanning this function instead of the wrapped displacement
  // avoids spurious sign flips at the +-1/2 cut.
  const long k = std::lround(est.value);
  auto disp = [&](double t) {
    double xt = wrap(t);
    return f.lift(xt) - xt - static_cast<double>(k);
  };

  auto npts = static_cast<std::size_t>(std::ceil(1.0 / resolution));
  npts = std::max<std::size_t>(npts, 16);
  const double step = 1.0 / static_cast<double>(npts);

  std::vector<double> g(npts + 1);
  double gmax = 0.0;
  for (std::size_t i = 0; i < npts; ++i) {
    g[i] = disp(static_cast<double>(i) * step);
    gmax = std::max(gmax, std::abs(g[i]));
  }
  g[npts] = g[0];

  FixedPointSet out;
  if (gmax < 1e-12) {
    out.neutral_everywhere = true;
    return out;
  }

  std::vector<double> roots;
  for (std::size_t i = 0; i < npts; ++i) {
    double a = static_cast<double>(i) * step;
    if (std::abs(g[i]) < 1e-13) {
      roots.push_back(a);
      continue;
    }
    if (!(g[i] * g[i + 1] < 0.0)) continue;
    double b = a + step;
    double ga = g[i];
    for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
      double mid = 0.5 * (a + b);
      double gm = disp(mid);
      if (gm == 0.0) {
        a = b = mid;
        break;
      }
      if ((gm > 0.0) == (ga > 0.0)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    double r = 0.5 * (a + b);
    if (std::abs(disp(r)) <= 1e-8) roots.push_back(wrap(r));
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty() && r - merged.back() < 1e-9) continue;
    merged.push_back(r);
  }
  if (merged.size() > 1 && circle_dist(merged.front(), merged.back()) < 1e-9)
    merged.pop_back();

  for (double r : merged) {
    FixedPoint p;
    p.x = CirclePoint(r);
    double m = map_derivative(f, r);
    p.multiplier = m;
    p.kind = classify(m);
    out.points.push_back(p);
  }
  return out;
}

double word_multiplier(const Ifs& F, const Word& u, CirclePoint b) {
  double end = apply_word(F, u, b.x);
  if (circle_dist(end, b.x) > 1e-8)
    throw DomainError("word_multiplier: the word does not fix the given point");
  double prod = 1.0;
  double x = b.x;
  for (int s : u.symbols) {
    const CircleMap& gmap = F.at(s);
    prod *= map_derivative(gmap, x);
    x = gmap.apply(x);
  }
  return prod;
}

DistinctMultipliersReport distinct_multipliers_check(
    const Ifs& F, const Word& u, double tol, const std::optional<Word>& prefix) {
  DistinctMultipliersReport rep;
  CircleMap g = compose_word(F, u);

  FixedPointSet fps;
  try {
    fps = fixed_points(g, 1.0 / 4096.0);
  } catch (const DomainError& e) {
    rep.inconclusive = true;
    rep.status = e.what();
    return rep;
  }
  if (fps.neutral_everywhere) {
    rep.inconclusive = true;
    rep.status = "the composite acts as the identity on the sampling grid";
    return rep;
  }
  if (fps.count(FixedPointKind::kNeutral) > 0) {
    rep.inconclusive = true;
    rep.status = "a fixed point is neutral to working precision";
    return rep;
  }

  for (const auto& p : fps.points) {
    if (p.kind != FixedPointKind::kAttractor) continue;
    rep.attractors.push_back(p.x);
    rep.multipliers.push_back(word_multiplier(F, u, p.x));
  }
  if (rep.attractors.empty()) {
    rep.inconclusive = true;
    rep.status = "the composite has no attracting fixed points";
    return rep;
  }

  if (rep.attractors.size() == 1) {
    rep.distinct = true;
    rep.status = "single attractor";
  } else {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.multipliers.size(); ++i)
      for (std::size_t j = i + 1; j < rep.multipliers.size(); ++j) {
        double mi = rep.multipliers[i], mj = rep.multipliers[j];
        gap = std::min(gap, std::abs(mi - mj) / std::max(std::abs(mi), std::abs(mj)));
      }
    rep.min_relative_gap = gap;
    rep.distinct = gap > tol;
    rep.status = rep.distinct ? "ok" : "multipliers too close";
  }

  if (prefix) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& a : rep.attractors)
      for (double o : orbit_of_word(F, *prefix, a.x))
        for (const auto& b : rep.attractors) dmin = std::min(dmin, circle_dist(o, b.x));
    rep.min_orbit_distance = dmin;
    rep.orbits_disjoint = dmin > 1e-6;
    if (!rep.orbits_disjoint) rep.status = "prefix orbit meets the attractor set";
  }
  return rep;
}

PerturbationReport multiplier_perturbation_experiment(const Ifs& F, const Word& w,
                                                      int k, int m, int n_max,
                                                      double eta) {
  if (k < 1 || m < 1 || n_max < 1)
    throw DomainError("multiplier_perturbation_experiment needs positive k, m, n_max");

  PerturbationReport rep;

  CircleMap fwm = compose_word(F, word_power(w, m));
  double sup = 0.0;
  for (int i = 0; i < 4096; ++i) {
    double x = i / 4096.0;
    sup = std::max(sup, circle_dist(x, fwm.apply(x)));
  }
  if (sup >= eta)
    throw DomainError("multiplier_perturbation_experiment: w^m strays farther than eta from the identity");

  const Word pure(std::vector<int>(static_cast<std::size_t>(k), 1), F.size());
  FixedPointSet base = fixed_points(compose_word(F, pure), 1.0 / 4096.0);
  for (const auto& p : base.points)
    if (p.kind == FixedPointKind::kAttractor) rep.base_attractors.push_back(p.x);
  if (rep.base_attractors.empty()) {
    rep.status = "the pure power word has no attracting fixed points";
    return rep;
  }

  Word u_final;
  std::vector<FixedPoint> final_attractors;
  for (int n = 1; n <= n_max; n *= 2) {
    Word un = concat(word_power(w, m), word_power(pure, n));
    FixedPointSet fn = fixed_points(compose_word(F, un), 1.0 / 4096.0);
    std::vector<FixedPoint> attrs;
    for (const auto& p : fn.points)
      if (p.kind == FixedPointKind::kAttractor) attrs.push_back(p);
    if (attrs.size() != rep.base_attractors.size()) {
      rep.structural_mismatch = true;
      rep.status = "attractor count changed at n = " + std::to_string(n);
      break;
    }
    double worst = 0.0;
    for (const auto& a : rep.base_attractors) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& b : attrs) best = std::min(best, circle_dist(a, b.x));
      worst = std::max(worst, best);
    }
    rep.n_values.push_back(n);
    rep.attractor_distances.push_back(worst);
    u_final = un;
    final_attractors = attrs;
  }
  if (rep.n_values.empty()) {
    if (rep.status.empty()) rep.status = "no usable exponent";
    return rep;
  }

  // Match the final attractors to the base ordering; the matching must be a
  // bijection or positions have merged and the bump target is ambiguous.
  std::vector<double> matched(rep.base_attractors.size());
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < rep.base_attractors.size(); ++i) {
    std::size_t best = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < final_attractors.size(); ++j) {
      double d = circle_dist(rep.base_attractors[i], final_attractors[j].x);
      if (d < bestd) {
        bestd = d;
        best = j;
      }
    }
    if (std::find(used.begin(), used.end(), best) != used.end()) {
      rep.structural_mismatch = true;
      rep.status = "two base attractors matched the same fixed point";
      return rep;
    }
    used.push_back(best);
    matched[i] = final_attractors[best].x.x;
  }

  for (double b : matched)
    rep.multipliers_before.push_back(word_multiplier(F, u_final, CirclePoint(b)));

  // The bump goes where generator 1 is first applied along the orbit of
  // attractor 0. Its ball must contain no other generator-1 application
  // point, across all tracked orbits, or more than one chain factor moves.
  rep.bumped = 0;
  std::vector<std::vector<double>> app_points(matched.size());
  for (std::size_t i = 0; i < matched.size(); ++i) {
    std::vector<double> orbit = orbit_of_word(F, u_final, matched[i]);
    for (std::size_t j = 0; j < u_final.symbols.size(); ++j)
      if (u_final.symbols[j] == 1)
        app_points[i].push_back(j == 0 ? matched[i] : orbit[j - 1]);
  }
  if (app_points[0].empty()) {
    rep.status = "generator 1 never acts along the bump orbit";
    return rep;
  }
  double site = app_points[0].front();
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < app_points.size(); ++i)
    for (std::size_t j = 0; j < app_points[i].size(); ++j) {
      if (i == 0 && j == 0) continue;
      dmin = std::min(dmin, circle_dist(app_points[i][j], site));
    }
  if (dmin < 1e-6) {
    rep.status = "the bump site is not isolated from the other orbit points";
    return rep;
  }
  double radius = std::min(0.02, dmin / 4.0);
  double old_d = map_derivative(F.at(1), site);

  std::vector<CircleMap> maps;
  maps.reserve(F.maps.size());
  maps.push_back(bump_perturbation(F.at(1), CirclePoint(site), 1.5 * old_d, radius));
  for (int s = 2; s <= F.size(); ++s) maps.push_back(F.at(s));
  Ifs G(std::move(maps), F.probs.empty() ? std::optional<std::vector<double>>{} : F.probs);

  for (std::size_t i = 0; i < matched.size(); ++i) {
    rep.multipliers_after.push_back(word_multiplier(G, u_final, CirclePoint(matched[i])));
    if (static_cast<int>(i) == rep.bumped) continue;
    double before = rep.multipliers_before[i];
    double rel = std::abs(rep.multipliers_after[i] - before) / std::abs(before);
    rep.max_other_relative_change = std::max(rep.max_other_relative_change, rel);
  }
  rep.status = "ok";
  return rep;
}

}  // namespace ifslab
