#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "ifslab/families.hpp"
#include "map_impls.hpp"

namespace ifslab {

namespace {

double scale(const DenjoyChart& c) { return 1.0 - c.total; }

}  // namespace

double DenjoyChart::nu(double x) const {
  x = wrap(x);
  auto it = std::lower_bound(points.begin(), points.end(), x);
  std::size_t idx = it - points.begin();  // number of points strictly below x
  double mass = (idx < points.size()) ? mass_before[idx] : total;
  return scale(*this) * x + mass;
}

double DenjoyChart::pi(double y) const {
  y = wrap(y);
  if (points.empty()) return y;
  auto it = std::upper_bound(new_left.begin(), new_left.end(), y);
  if (it == new_left.begin()) return y / scale(*this);
  std::size_t j = (it - new_left.begin()) - 1;
  if (y <= new_left[j] + lengths[j]) return points[j];
  return (y - (mass_before[j] + lengths[j])) / scale(*this);
}

int DenjoyChart::gap_index(double y) const {
  y = wrap(y);
  auto it = std::upper_bound(new_left.begin(), new_left.end(), y);
  if (it == new_left.begin()) return -1;
  std::size_t j = (it - new_left.begin()) - 1;
  return (y <= new_left[j] + lengths[j]) ? static_cast<int>(j) : -1;
}

int DenjoyChart::point_index(double x, double tol) const {
  if (points.empty()) return -1;
  x = wrap(x);
  auto it = std::lower_bound(points.begin(), points.end(), x);
  std::size_t n = points.size();
  std::size_t cand[3] = {(it - points.begin() + n - 1) % n,
                         static_cast<std::size_t>(it - points.begin()) % n,
                         (it - points.begin() + 1) % n};
  for (std::size_t j : cand)
    if (circle_dist(points[j], x) <= tol) return static_cast<int>(j);
  return -1;
}

double CollapseProjection::apply(double y) const { return chart_->pi(y); }

double CollapseProjection::lift(double t) const {
  double y = wrap(t);
  return chart_->pi(y) + (t - y);
}

std::shared_ptr<const DenjoyChart> make_denjoy_chart(
    std::vector<double> points, std::vector<double> lengths) {
  if (points.size() != lengths.size())
    throw ConstructionError("blow-up needs one length per orbit point");
  std::vector<std::pair<double, double>> rows;
  rows.reserve(points.size());
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(lengths[i] > 0.0))
      throw ConstructionError("blow-up gap lengths must be positive");
    total += lengths[i];
    rows.emplace_back(wrap(points[i]), lengths[i]);
  }
  if (total >= 1.0 - 1e-6)
    throw ConstructionError("blow-up gap lengths must sum to less than 1");
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].first - rows[i - 1].first < 1e-9)
      throw ConstructionError("blow-up orbit points must be distinct");

  auto chart = std::make_shared<DenjoyChart>();
  chart->total = total;
  double mass = 0.0;
  double s = 1.0 - total;
  for (const auto& [p, l] : rows) {
    chart->points.push_back(p);
    chart->lengths.push_back(l);
    chart->mass_before.push_back(mass);
    chart->new_left.push_back(s * p + mass);
    mass += l;
  }
  return chart;
}

namespace {

// The blown-up version of one generator. Off the inserted gaps it is the
// base map conjugated through the collapse projection; each gap maps to the
// gap of its image point affinely. Where the truncation of the orbit breaks
// that picture (a blown point whose image or preimage was not blown), the
// map is patched on windows a few 1e-8 wide so it stays a homeomorphism:
// a gap with no image gap is squeezed into a 2h-interval bridged by two
// short connector ramps, and the jump left by a gap with no preimage gap is
// spread linearly across a window around where it occurs.
class DenjoyImpl final : public MapImpl {
 public:
  DenjoyImpl(CircleMap base, std::shared_ptr<const DenjoyChart> chart)
      : base_(std::move(base)), chart_(std::move(chart)) {
    const DenjoyChart& c = *chart_;
    const std::size_t n = c.points.size();
    image_.assign(n, -1);
    half_.assign(n, 0.0);
    win_.assign(n, 0.0);

    // Incoming jump positions: blown points whose base-preimage is not
    // blown. The conjugated map jumps over that point's gap at z.
    std::vector<double> centers;  // everything a window must keep clear of
    for (std::size_t j = 0; j < n; ++j) {
      centers.push_back(c.new_left[j]);
      centers.push_back(c.new_left[j] + c.lengths[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      double pre = base_.apply_inverse(c.points[j]);
      if (c.point_index(pre) < 0) {
        double z = c.nu(pre);
        jumps_.push_back({z, 0.0});
        centers.push_back(z);
      }
    }
    std::sort(centers.begin(), centers.end());
    auto nearest_other = [&](double a) {
      // Cyclic distance from a to the nearest other special position.
      double best = 1.0;
      long long m = static_cast<long long>(centers.size());
      long long at = std::lower_bound(centers.begin(), centers.end(), a) -
                     centers.begin();
      for (long long off = -2; off <= 2; ++off) {
        long long k = ((at + off) % m + m) % m;
        double d = circle_dist(centers[k], a);
        if (d > 1e-15 && d < best) best = d;
      }
      return best;
    };

    for (std::size_t j = 0; j < n; ++j) {
      int ii = c.point_index(base_.apply(c.points[j]));
      image_[j] = ii;
      if (ii >= 0) continue;
      double L = c.new_left[j], R = L + c.lengths[j];
      double cap = std::min(nearest_other(L), nearest_other(R)) / 4.0;
      double w = std::min(1e-8, cap);
      double a = raw(L - w);
      double A = raw(L);  // image of the collapsed point, not blown
      double b = raw(R + w);
      // Where the base map is nearly flat (derivative ~1e-8 or less) the
      // one-sided differences can vanish in rounding at the default width.
      // Widen until both resolve comfortably above the ulp floor, or give up
      // at the cap that keeps windows clear of neighbouring features.
      double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1e-3, std::abs(A));
      while ((A - a <= floor || b - A <= floor) && w < cap) {
        w = std::min(w * 4.0, cap);
        a = raw(L - w);
        b = raw(R + w);
      }
      half_[j] = std::min({1e-9, (A - a) / 2.0, (b - A) / 2.0});
      if (!(half_[j] > 0.0))
        throw ConstructionError("blow-up window degenerated; base map too flat");
      win_[j] = w;
    }
    for (auto& jw : jumps_) {
      jw.w = std::min(1e-8, nearest_other(jw.z) / 4.0);
      if (!(jw.w > 0.0))
        throw ConstructionError("blow-up jump window degenerated");
    }
    std::sort(jumps_.begin(), jumps_.end(),
              [](const Jump& l, const Jump& r) { return l.z < r.z; });
  }

  double lift(double t) const override {
    const DenjoyChart& c = *chart_;
    double y = wrap(t);
    int j = c.gap_index(y);
    if (j >= 0) {
      double L = c.new_left[j];
      double tL = t - (y - L);
      int ii = image_[j];
      if (ii >= 0) {
        // Winding from the actual lift, landing position from the chart.
        double img = base_.lift(pi_lift(tL));
        double m = std::round(img - c.points[ii]);
        return m + c.new_left[ii] +
               (y - L) * (c.lengths[ii] / c.lengths[j]);
      }
      double A = raw(tL);
      return (A - half_[j]) + (y - L) * (2.0 * half_[j] / c.lengths[j]);
    }
    // Connector ramps beside squeezed gaps.
    for (int side = 0; side < 2; ++side) {
      int g = adjacent_gap(y, side == 0);
      if (g < 0 || image_[g] >= 0 || win_[g] <= 0.0) continue;
      double L = c.new_left[g], R = L + c.lengths[g];
      if (side == 0) {  // gap to the right of y: left connector
        double d = circle_delta(L, y);  // in [-w, 0)
        if (d >= -win_[g] && d < 0.0) {
          double tL = t - d;
          double a = raw(tL - win_[g]);
          double A = raw(tL);
          return a + (d + win_[g]) / win_[g] * ((A - half_[g]) - a);
        }
      } else {  // gap to the left of y: right connector
        double d = circle_delta(R, y);  // in (0, w]
        if (d > 0.0 && d <= win_[g]) {
          double tR = t - d;
          double tL = tR - c.lengths[g];
          double A = raw(tL);
          double b = raw(tR + win_[g]);
          return (A + half_[g]) + d / win_[g] * (b - (A + half_[g]));
        }
      }
    }
    // Spread windows over truncation jumps.
    if (const Jump* jw = find_jump(y)) {
      double d = circle_delta(jw->z, y);
      double tz = t - d;
      double a = raw(tz - jw->w), b = raw(tz + jw->w);
      return a + (d + jw->w) / (2.0 * jw->w) * (b - a);
    }
    return raw(t);
  }

  bool has_derivative() const override { return base_.has_derivative(); }

  double derivative(double x) const override {
    const DenjoyChart& c = *chart_;
    double y = wrap(x);
    int j = c.gap_index(y);
    if (j >= 0) {
      if (image_[j] >= 0) return c.lengths[image_[j]] / c.lengths[j];
      return 2.0 * half_[j] / c.lengths[j];
    }
    for (int side = 0; side < 2; ++side) {
      int g = adjacent_gap(y, side == 0);
      if (g < 0 || image_[g] >= 0 || win_[g] <= 0.0) continue;
      double L = c.new_left[g], R = L + c.lengths[g];
      double tL = y - circle_delta(L, y);
      if (side == 0) {
        double d = circle_delta(L, y);
        if (d >= -win_[g] && d < 0.0)
          return ((raw(tL) - half_[g]) - raw(tL - win_[g])) / win_[g];
      } else {
        double d = circle_delta(R, y);
        if (d > 0.0 && d <= win_[g])
          return (raw(tL + c.lengths[g] + win_[g]) - (raw(tL) + half_[g])) /
                 win_[g];
      }
    }
    if (const Jump* jw = find_jump(y)) {
      double tz = y - circle_delta(jw->z, y);
      return (raw(tz + jw->w) - raw(tz - jw->w)) / (2.0 * jw->w);
    }
    return base_.derivative(c.pi(y));
  }

  std::string kind() const override { return "denjoy"; }

  Descriptor describe() const override {
    Descriptor d;
    d.kind = "denjoy";
    d.add_array("points", chart_->points);
    d.add_array("lengths", chart_->lengths);
    d.children.push_back(base_.describe());
    return d;
  }

 private:
  struct Jump {
    double z, w;
  };

  double pi_lift(double t) const {
    double y = wrap(t);
    return chart_->pi(y) + (t - y);
  }

  // The conjugated lift, valid away from gaps, connectors and jumps.
  double raw(double t) const {
    double img = base_.lift(pi_lift(t));
    double yi = wrap(img);
    return chart_->nu(yi) + (img - yi);
  }

  // Index of the gap nearest to y on the given side (y itself not in a gap).
  int adjacent_gap(double y, bool to_right) const {
    const DenjoyChart& c = *chart_;
    if (c.new_left.empty()) return -1;
    auto it = std::upper_bound(c.new_left.begin(), c.new_left.end(), y);
    std::size_t n = c.new_left.size();
    if (to_right)
      return static_cast<int>((it == c.new_left.end())
                                  ? 0
                                  : it - c.new_left.begin());
    return static_cast<int>(
        (it == c.new_left.begin()) ? n - 1 : (it - c.new_left.begin()) - 1);
  }

  const Jump* find_jump(double y) const {
    if (jumps_.empty()) return nullptr;
    auto it = std::lower_bound(
        jumps_.begin(), jumps_.end(), y,
        [](const Jump& jw, double v) { return jw.z < v; });
    std::size_t n = jumps_.size();
    std::size_t cand[2] = {((it - jumps_.begin()) + n - 1) % n,
                           static_cast<std::size_t>(it - jumps_.begin()) % n};
    for (std::size_t k : cand) {
      double d = circle_delta(jumps_[k].z, y);
      if (d >= -jumps_[k].w && d <= jumps_[k].w) return &jumps_[k];
    }
    return nullptr;
  }

  CircleMap base_;
  std::shared_ptr<const DenjoyChart> chart_;
  std::vector<int> image_;    // gap index of each point's image, or -1
  std::vector<double> half_;  // squeeze half-heights for boundary gaps
  std::vector<double> win_;   // connector widths for boundary gaps
  std::vector<Jump> jumps_;
};

}  // namespace

CircleMap denjoy_map(const CircleMap& base,
                     std::shared_ptr<const DenjoyChart> chart) {
  if (!chart || chart->points.empty()) return base;
  return CircleMap(std::make_shared<DenjoyImpl>(base, std::move(chart)));
}

namespace {

DenjoyBlowup blow_up_impl(const Ifs& base, const std::vector<CirclePoint>& seeds,
                          const std::vector<double>& lengths, int depth) {
  if (depth < 0) throw ConstructionError("blow-up depth must be nonnegative");
  if (depth > 0 && static_cast<int>(lengths.size()) < depth)
    throw ConstructionError("blow-up needs at least `depth` gap lengths");
  if (depth == 0) {
    auto chart = std::make_shared<DenjoyChart>();
    return DenjoyBlowup{base, CollapseProjection(chart)};
  }

  std::vector<CircleMap> moves;
  for (const auto& m : base.maps) {
    moves.push_back(m);
    moves.push_back(m.inverse());
  }

  // Breadth-first enumeration of the orbit, seeds first. A single queue
  // interleaves several seeds' orbits by generation.
  std::vector<double> found;       // discovery order
  std::vector<double> sorted;      // for the duplicate check
  auto known = [&](double x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x - 1e-9);
    for (; it != sorted.end() && *it <= x + 1e-9; ++it)
      if (std::abs(*it - x) <= 1e-9) return true;
    // Wraparound comparisons for points hugging 0 or 1.
    return (!sorted.empty() &&
            (circle_dist(sorted.front(), x) <= 1e-9 ||
             circle_dist(sorted.back(), x) <= 1e-9));
  };
  auto insert = [&](double x) {
    found.push_back(x);
    sorted.insert(std::lower_bound(sorted.begin(), sorted.end(), x), x);
  };

  std::deque<double> queue;
  for (const auto& s : seeds) {
    double x = wrap(s.x);
    if (known(x)) throw ConstructionError("blow-up seeds must be distinct");
    insert(x);
    queue.push_back(x);
  }
  while (static_cast<int>(found.size()) < depth) {
    if (queue.empty())
      throw ConstructionError("orbit has fewer points than the requested depth");
    double x = queue.front();
    queue.pop_front();
    for (const auto& m : moves) {
      double y = m.apply(x);
      if (known(y)) continue;
      insert(y);
      queue.push_back(y);
      if (static_cast<int>(found.size()) == depth) break;
    }
  }

  std::vector<double> pts(found.begin(), found.begin() + depth);
  std::vector<double> lens(lengths.begin(), lengths.begin() + depth);
  auto chart = make_denjoy_chart(std::move(pts), std::move(lens));

  Ifs blown;
  blown.probs = base.probs;
  for (const auto& m : base.maps) blown.maps.push_back(denjoy_map(m, chart));
  return DenjoyBlowup{std::move(blown), CollapseProjection(chart)};
}

}  // namespace

DenjoyBlowup denjoy_blowup(const Ifs& base, CirclePoint orbit_seed,
                           const std::vector<double>& lengths, int depth) {
  return blow_up_impl(base, {orbit_seed}, lengths, depth);
}

DenjoyBlowup denjoy_blowup_multi(const Ifs& base,
                                 const std::vector<CirclePoint>& seeds,
                                 const std::vector<double>& lengths,
                                 int depth) {
  return blow_up_impl(base, seeds, lengths, depth);
}

}  // namespace ifslab
