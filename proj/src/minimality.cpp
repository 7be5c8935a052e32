#include "ifslab/minimality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "ifslab/common.hpp"
#include "ifslab/rng.hpp"
#include "ifslab/rotation_numbers.hpp"

namespace ifslab {

namespace {

std::size_t grid_size(double resolution) {
  if (!(resolution > 0.0) || resolution >= 0.25) {
    throw DomainError("resolution must lie in (0, 0.25)");
  }
  auto m = static_cast<std::size_t>(std::llround(1.0 / resolution));
  if (m < 8) throw DomainError("resolution grid too coarse");
  return m;
}

std::size_t cell_of(double x, std::size_t m) {
  auto i = static_cast<std::size_t>(wrap(x) * static_cast<double>(m));
  return i >= m ? m - 1 : i;
}

// Marks all cells meeting the closed arc [lo, lo + len].
void mark_arc(std::vector<std::uint8_t>& marks, double lo, double len,
              std::size_t m) {
  if (len >= 1.0) {
    std::fill(marks.begin(), marks.end(), std::uint8_t{1});
    return;
  }
  double h = 1.0 / static_cast<double>(m);
  auto first = static_cast<long long>(std::floor(wrap(lo) / h));
  auto count = static_cast<long long>(std::floor(wrap(lo) / h + len / h)) -
               first + 1;
  for (long long k = 0; k < count; ++k) {
    marks[static_cast<std::size_t>((first + k) % static_cast<long long>(m))] = 1;
  }
}

std::optional<IntervalDomain> cells_to_domain(
    const std::vector<std::uint8_t>& marks, std::size_t m, bool* any) {
  double h = 1.0 / static_cast<double>(m);
  std::size_t marked = 0;
  for (auto v : marks) marked += v;
  *any = marked > 0;
  if (marked == 0 || marked == m) return std::nullopt;
  // Start scanning at an unmarked cell so runs never straddle the seam.
  std::size_t start = 0;
  while (marks[start]) ++start;
  std::vector<Arc> arcs;
  std::size_t i = 0;
  while (i < m) {
    if (!marks[(start + i) % m]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < m && marks[(start + j) % m]) ++j;
    arcs.push_back(Arc{wrap(static_cast<double>((start + i) % m) * h),
                       static_cast<double>(j - i) * h});
    i = j;
  }
  return domain_normalize(std::move(arcs));
}

std::vector<std::uint8_t> orbit_marks(const Ifs& sys, std::size_t m,
                                      const MinimalSetOptions& opt,
                                      std::uint64_t seed) {
  std::vector<std::uint8_t> marks(m, 0);
  Rng rng(seed);
  double x = rng.next_double();
  const auto probs = sys.effective_probs();
  for (std::size_t step = 0; step < opt.orbit_steps; ++step) {
    x = sys.at(rng.next_symbol(probs)).apply(x);
    if (step >= opt.burn_in) marks[cell_of(x, m)] = 1;
  }
  return marks;
}

std::vector<std::uint8_t> closure_marks(const Ifs& sys, std::size_t m,
                                        int max_depth, std::uint64_t seed,
                                        std::size_t* depth_reached) {
  std::vector<std::uint8_t> marks(m, 0);
  Rng rng(seed);
  double h = 1.0 / static_cast<double>(m);
  std::vector<std::size_t> frontier{
      static_cast<std::size_t>(rng.next_index(static_cast<int>(m)))};
  marks[frontier.front()] = 1;
  std::size_t depth = 0;
  std::vector<std::uint8_t> image(m, 0);
  while (!frontier.empty() && depth < static_cast<std::size_t>(max_depth)) {
    std::fill(image.begin(), image.end(), std::uint8_t{0});
    for (auto c : frontier) {
      double lo = static_cast<double>(c) * h;
      for (const auto& g : sys.maps) {
        double a = g.lift(lo);
        double b = g.lift(lo + h);
        mark_arc(image, a, b - a, m);
      }
    }
    frontier.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (image[i] && !marks[i]) {
        marks[i] = 1;
        frontier.push_back(i);
      }
    }
    ++depth;
  }
  *depth_reached = depth;
  return marks;
}

double arc_inside_depth(double t, double left, double len) {
  double d = wrap(t - left);
  if (d > len) return -std::min(d - len, 1.0 - len - (d - len));
  return std::min(d, len - d);
}

}  // namespace

MinimalSetEstimate minimal_set_estimate(const Ifs& F, Direction direction,
                                        double resolution, int max_depth,
                                        const MinimalSetOptions& options) {
  if (options.method != "orbit" && options.method != "closure") {
    throw DomainError("minimal_set_estimate method must be orbit or closure");
  }
  if (options.seeds < 1) throw DomainError("need at least one seed");
  std::size_t m = grid_size(resolution);
  const Ifs sys = direction == Direction::kForward ? F : inverse_ifs(F);

  std::vector<std::uint8_t> inter;
  std::vector<std::uint8_t> uni(m, 0);
  std::size_t iterations = 0;
  bool disagree = false;
  for (int s = 0; s < options.seeds; ++s) {
    std::uint64_t seed = split_seed(options.rng_seed, static_cast<std::uint64_t>(s));
    std::vector<std::uint8_t> marks;
    if (options.method == "orbit") {
      marks = orbit_marks(sys, m, options, seed);
      iterations = options.orbit_steps;
    } else {
      if (max_depth < 1) throw DomainError("closure needs max_depth >= 1");
      std::size_t depth = 0;
      marks = closure_marks(sys, m, max_depth, seed, &depth);
      iterations = std::max(iterations, depth);
    }
    for (std::size_t i = 0; i < m; ++i) uni[i] |= marks[i];
    if (inter.empty()) {
      inter = std::move(marks);
    } else {
      for (std::size_t i = 0; i < m; ++i) inter[i] &= marks[i];
    }
  }

  std::size_t inter_count = 0, uni_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    inter_count += inter[i];
    uni_count += uni[i];
  }
  if (uni_count > 0 &&
      static_cast<double>(uni_count - inter_count) >
          options.disagreement_warning * static_cast<double>(uni_count)) {
    disagree = true;
  }

  MinimalSetEstimate est;
  est.direction = direction;
  est.resolution = resolution;
  est.iterations = iterations;
  est.method = options.method;
  if (disagree) {
    est.warning = "seed runs disagree; reporting their intersection";
  }
  bool any = false;
  est.cover = cells_to_domain(inter, m, &any);
  est.full_circle = any && !est.cover.has_value();
  est.empty = !any;
  return est;
}

std::vector<CirclePoint> essential_intersection(const MinimalSetEstimate& mp,
                                                const MinimalSetEstimate& mm,
                                                double resolution) {
  if (mp.empty || mm.empty) return {};
  if (mp.full_circle && mm.full_circle) return {CirclePoint(0.0)};
  std::size_t m = grid_size(resolution);
  double r = resolution;
  double window = 8.0 * r;

  // A grid point x sees a cover on its right iff some cover arc meets the
  // open window (x, x + window), i.e. x lies in the arc dilated to the left.
  auto paint = [&](const MinimalSetEstimate& e, bool left_dilate) {
    std::vector<std::uint8_t> q(m, e.full_circle ? 1 : 0);
    if (e.full_circle) return q;
    for (const auto& a : e.cover->arcs) {
      double lo = left_dilate ? a.left - window : a.left;
      double len = a.length + window;
      auto first = static_cast<long long>(std::ceil(wrap(lo) / r));
      auto last = static_cast<long long>(std::floor(wrap(lo) / r + len / r));
      for (long long k = first; k <= last; ++k) {
        double x = static_cast<double>(k) * r - wrap(lo);
        if (x <= 0.0 || x >= len) continue;  // open dilated arc
        q[static_cast<std::size_t>(((k % static_cast<long long>(m)) +
                                    static_cast<long long>(m)) %
                                   static_cast<long long>(m))] = 1;
      }
    }
    return q;
  };

  auto rp = paint(mp, true), rm = paint(mm, true);
  auto lp = paint(mp, false), lm = paint(mm, false);
  std::vector<std::uint8_t> qual(m, 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    qual[i] = static_cast<std::uint8_t>((rp[i] & rm[i]) | (lp[i] & lm[i]));
    total += qual[i];
  }
  if (total == 0) return {};
  if (total == m) return {CirclePoint(0.0)};

  std::size_t start = 0;
  while (qual[start]) ++start;
  std::vector<CirclePoint> points;
  std::size_t i = 0;
  while (i < m) {
    if (!qual[(start + i) % m]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < m && qual[(start + j) % m]) ++j;
    double mid = (static_cast<double>(start + i) +
                  0.5 * static_cast<double>(j - 1 - i)) *
                 r;
    points.emplace_back(wrap(mid));
    i = j;
  }
  std::sort(points.begin(), points.end(),
            [](CirclePoint a, CirclePoint b) { return a.x < b.x; });
  return points;
}

HutchinsonCertificate hutchinson_certificate(const Ifs& F, const Arc& domain,
                                             const Arc& core,
                                             const std::vector<Word>& words,
                                             int grid) {
  if (grid < 16) throw DomainError("hutchinson grid too coarse");
  double core_off = wrap(core.left - domain.left);
  if (core_off + core.length > domain.length + kPointTol) {
    throw DomainError("core arc must sit inside the domain arc");
  }

  HutchinsonCertificate cert;
  cert.domain = domain;
  cert.core = core;
  cert.words = words;

  auto fail = [&](const std::string& reason, double witness) {
    if (cert.valid || !cert.failure_reason.empty()) return;
    cert.failure_reason = reason;
    cert.witness = wrap(witness);
  };

  if (words.empty()) {
    fail("covering: no words provided", core.left);
    return cert;
  }

  std::vector<CircleMap> maps;
  maps.reserve(words.size());
  for (const auto& w : words) maps.push_back(compose_word(F, w));

  // Contraction: max secant slope over a uniform grid on the domain arc.
  double n1 = static_cast<double>(grid - 1);
  for (std::size_t k = 0; k < maps.size(); ++k) {
    double factor = 0.0;
    double at = domain.left;
    double prev = maps[k].lift(domain.left);
    double worst = domain.left;
    for (int i = 1; i < grid; ++i) {
      double x = domain.left + domain.length * static_cast<double>(i) / n1;
      double v = maps[k].lift(x);
      double slope = (v - prev) / (domain.length / n1);
      if (slope > factor) {
        factor = slope;
        worst = 0.5 * (at + x);
      }
      at = x;
      prev = v;
    }
    cert.contraction_factors.push_back(factor);
    if (factor >= 1.0) fail("contraction: secant slope >= 1", worst);
  }

  // Invariance: every word image of the domain arc stays inside it, with
  // room to spare.
  cert.invariance_clearance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < maps.size(); ++k) {
    double lo = maps[k].lift(domain.left);
    double len = maps[k].lift(domain.left + domain.length) - lo;
    double off = wrap(lo - domain.left);
    if (len >= domain.length || off + len > domain.length) {
      fail("invariance: image leaves the domain arc", lo + len);
      cert.invariance_clearance = 0.0;
      continue;
    }
    cert.invariance_clearance =
        std::min(cert.invariance_clearance, std::min(off, domain.length - off - len));
  }

  // Covering: every point of the core arc lies inside some word image of it,
  // margin = the worst depth-in-best-image over the sample grid.
  std::vector<std::pair<double, double>> images;
  images.reserve(maps.size());
  for (const auto& g : maps) {
    double lo = g.lift(core.left);
    images.emplace_back(wrap(lo), g.lift(core.left + core.length) - lo);
  }
  cert.covering_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    double t = wrap(core.left + core.length * static_cast<double>(i) / n1);
    double best = -1.0;
    for (const auto& [lo, len] : images) {
      best = std::max(best, arc_inside_depth(t, lo, len));
    }
    if (best <= 0.0) fail("covering: core point left uncovered", t);
    cert.covering_margin = std::min(cert.covering_margin, best);
  }

  cert.valid = cert.failure_reason.empty();
  cert.robustness_scale =
      std::max(0.0, std::min(cert.invariance_clearance, cert.covering_margin));
  return cert;
}

namespace {

// Fixed point of f near the limit of iterating `step`, refined by bisecting
// the displacement sign change.
std::optional<double> refined_fixed_point(const CircleMap& f, bool attracting) {
  CircleMap it = attracting ? f : f.inverse();
  double x = 0.12345;
  for (int i = 0; i < 512; ++i) x = it.apply(x);
  auto disp = [&](double t) { return circle_delta(t, it.apply(t)); };
  double radius = 1e-3;
  while (radius < 0.3) {
    double a = x - radius, b = x + radius;
    if (disp(a) > 0.0 && disp(b) < 0.0) {
      for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (a + b);
        (disp(mid) > 0.0 ? a : b) = mid;
      }
      return wrap(0.5 * (a + b));
    }
    radius *= 2.0;
  }
  return std::nullopt;
}

struct CandidateArc {
  int exponent = 0;
  double left = 0.0;  // position relative to the core arc's left end
  double length = 0.0;
  bool allowed = false;
};

}  // namespace

RobustMinimalityReport robust_minimality_check(const Ifs& F, int rotation_index,
                                               int ns_index) {
  const CircleMap& R = F.at(rotation_index);
  const CircleMap& f = F.at(ns_index);
  RobustMinimalityReport report;

  constexpr int kTranslationSteps = 100000;
  constexpr int kMaxExponent = 160;
  constexpr double kDeltaBudget = 1.1e-4;  // per-symbol perturbation allowance
  constexpr double kBaseMargin = 5e-4;
  constexpr double kEndpointBand = 0.040;

  auto bail = [&](const std::string& why) {
    report.status = why;
    return report;
  };

  report.rotation_value = translation_number(R, kTranslationSteps).value;
  for (int q = 1; q <= 20; ++q) {
    for (int p = 0; p <= q; ++p) {
      double gap = circle_dist(report.rotation_value,
                               static_cast<double>(p) / static_cast<double>(q));
      if (gap <= 2.0 / kTranslationSteps) {
        return bail("rotation estimate too close to " + std::to_string(p) +
                    "/" + std::to_string(q));
      }
    }
  }

  auto a = refined_fixed_point(f, true);
  auto r = refined_fixed_point(f, false);
  if (!a || !r) return bail("could not isolate the attractor/repeller pair");
  report.attractor = *a;
  report.repeller = *r;
  report.attractor_slope = (f.lift(*a + 1e-5) - f.lift(*a - 1e-5)) / 2e-5;
  if (!(report.attractor_slope < 0.95)) {
    return bail("attractor slope not below 0.95");
  }

  // Shrink a ball around the repeller until f contracts on the complement.
  const int kSlopeGrid = 4096;
  double eta = 0.0;
  for (double e = 0.02; e < 0.3; e += 0.002) {
    Arc I{wrap(*r + e), 1.0 - 2.0 * e};
    double worst = 0.0;
    double prev = f.lift(I.left);
    for (int i = 1; i < kSlopeGrid; ++i) {
      double x = I.left + I.length * static_cast<double>(i) / (kSlopeGrid - 1);
      double v = f.lift(x);
      worst = std::max(worst, (v - prev) / (I.length / (kSlopeGrid - 1)));
      prev = v;
    }
    if (worst <= 0.9) {
      eta = e;
      break;
    }
  }
  if (eta == 0.0 || 1.0 - 4.0 * eta < 0.5) {
    return bail("no contraction neighbourhood away from the repeller");
  }
  report.eta = eta;
  Arc I{wrap(*r + eta), 1.0 - 2.0 * eta};

  // The core arc J leaves a wider ball around the repeller than I does. A
  // covering arc near an endpoint of J must overhang the endpoint while its
  // f(I)-image still clears the ball, and both margins have to fit inside
  // (eta2 - eta) minus how far f drags the two left ends apart. Widen the
  // ball until that slack is comfortable.
  auto image_dist = [&](double u) { return wrap(f.lift(wrap(*r + u)) - *r); };
  double eta2 = 0.0;
  for (double u = 2.0 * eta; u < 0.24; u += 0.002) {
    double band = (u - eta) - (image_dist(u) - image_dist(eta));
    if (band >= kEndpointBand) {
      eta2 = u;
      break;
    }
  }
  if (eta2 == 0.0 || 1.0 - 2.0 * eta2 < 0.5) {
    return bail("no endpoint slack for the covering construction");
  }
  report.core_eta = eta2;
  Arc J{wrap(*r + eta2), 1.0 - 2.0 * eta2};

  // Rotated copies of f(J) are the covering arcs; f(I) must stay clear of
  // the ball around the repeller so each word contracts the whole of I.
  double k_left = f.lift(J.left);
  double k_len = f.lift(J.left + J.length) - k_left;
  double ki_left = f.lift(I.left);
  double ki_len = f.lift(I.left + I.length) - ki_left;

  std::vector<CandidateArc> arcs(kMaxExponent + 1);
  double lo = k_left, hi = k_left + k_len;
  double ilo = ki_left, ihi = ki_left + ki_len;
  for (int e = 0; e <= kMaxExponent; ++e) {
    double clearance = kBaseMargin + (e + 1) * kDeltaBudget;
    double off = wrap(ilo - I.left);
    arcs[e].exponent = e;
    arcs[e].left = wrap(lo - J.left);
    arcs[e].length = hi - lo;
    arcs[e].allowed = off >= clearance &&
                      off + (ihi - ilo) <= I.length - clearance;
    lo = R.lift(lo);
    hi = R.lift(hi);
    ilo = R.lift(ilo);
    ihi = R.lift(ihi);
  }

  // Greedy chain over J, keeping enough overlap that a perturbation of
  // kDeltaBudget per word symbol cannot open a hole.
  std::vector<int> picks;
  double pos = 0.0;
  int prev_exp = -1;
  bool closed = false;
  while (static_cast<int>(picks.size()) <= 2 * kMaxExponent) {
    double best_score = -std::numeric_limits<double>::infinity();
    double best_end = 0.0;
    int best_exp = -1;
    for (const auto& c : arcs) {
      if (!c.allowed) continue;
      double need = prev_exp < 0
                        ? kBaseMargin + (c.exponent + 1) * kDeltaBudget
                        : kBaseMargin +
                              (std::abs(c.exponent - prev_exp) + 1) * kDeltaBudget;
      for (double shift : {-1.0, 0.0}) {
        double s = c.left + shift;
        double end = s + c.length;
        if (s > pos - need || end <= pos + 1e-12) continue;
        double score = end - (c.exponent + 1) * kDeltaBudget;
        if (score > best_score) {
          best_score = score;
          best_end = end;
          best_exp = c.exponent;
        }
      }
    }
    if (best_exp < 0) break;
    picks.push_back(best_exp);
    pos = best_end;
    prev_exp = best_exp;
    if (pos >= J.length + kBaseMargin + (best_exp + 1) * kDeltaBudget) {
      closed = true;
      break;
    }
  }
  if (!closed) {
    return bail("covering construction ran out of candidate words");
  }
  report.rotation_exponents = picks;

  std::vector<Word> words;
  words.reserve(picks.size());
  for (int e : picks) {
    std::vector<int> symbols{ns_index};
    symbols.insert(symbols.end(), static_cast<std::size_t>(e), rotation_index);
    words.emplace_back(std::move(symbols), F.size());
  }
  report.certificate = hutchinson_certificate(F, I, J, words);

  // The rotated core arcs must tile the circle in both directions; this is
  // what lets orbits escape any neighbourhood of the repeller.
  auto cover_margin = [&](const CircleMap& rot) {
    std::vector<std::pair<double, double>> copies;
    double jl = J.left, jr = J.left + J.length;
    int upto = *std::max_element(picks.begin(), picks.end());
    std::vector<std::pair<double, double>> all(upto + 1);
    for (int e = 0; e <= upto; ++e) {
      all[e] = {wrap(jl), jr - jl};
      jl = rot.lift(jl);
      jr = rot.lift(jr);
    }
    for (int e : picks) copies.push_back(all[e]);
    double margin = std::numeric_limits<double>::infinity();
    const int kSamples = 4096;
    for (int i = 0; i < kSamples; ++i) {
      double t = static_cast<double>(i) / kSamples;
      double best = -1.0;
      for (const auto& [cl, len] : copies) {
        best = std::max(best, arc_inside_depth(t, cl, len));
      }
      margin = std::min(margin, best);
    }
    return margin;
  };
  report.circle_cover_margin = cover_margin(R);
  report.inverse_cover_margin = cover_margin(R.inverse());

  if (!report.certificate.valid) {
    return bail("certificate failed: " + report.certificate.failure_reason);
  }
  if (!(report.circle_cover_margin > 0.0) ||
      !(report.inverse_cover_margin > 0.0)) {
    return bail("rotated core arcs fail to cover the circle");
  }
  report.certified = true;
  report.status = "certified";
  return report;
}

}  // namespace ifslab
