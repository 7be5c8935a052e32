#include "ifslab/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ifslab {

namespace {

struct Grid {
  std::size_t m;
  double h;

  explicit Grid(double resolution) {
    if (!(resolution > 0.0) || resolution >= 0.25)
      throw DomainError("grid resolution out of range");
    m = static_cast<std::size_t>(std::llround(1.0 / resolution));
    if (m < 8) throw DomainError("grid too coarse");
    h = 1.0 / static_cast<double>(m);
  }

  std::size_t cell_of(double x) const {
    double w = wrap(x);
    auto i = static_cast<std::size_t>(w * static_cast<double>(m));
    return i >= m ? m - 1 : i;
  }
  double center(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) * h;
  }

  // Indices of all cells whose center lies strictly within fuzz of y.
  template <typename Fn>
  void for_ball(double y, double fuzz, Fn&& fn) const {
    double lo = (wrap(y) - fuzz) / h - 0.5;
    double hi = (wrap(y) + fuzz) / h - 0.5;
    auto first = static_cast<long long>(std::ceil(lo));
    auto last = static_cast<long long>(std::floor(hi));
    for (long long j = first; j <= last; ++j) {
      long long idx = j % static_cast<long long>(m);
      if (idx < 0) idx += static_cast<long long>(m);
      fn(static_cast<std::size_t>(idx));
    }
  }
};

// Merges marked cells into a normalized domain. Returns nullopt when every
// cell is marked.
std::optional<IntervalDomain> cells_to_domain(const std::vector<char>& marked,
                                              const Grid& g) {
  std::size_t count = 0;
  for (char c : marked) count += c ? 1 : 0;
  if (count == g.m) return std::nullopt;
  if (count == 0) throw InconsistencyError("no cells marked");

  std::vector<Arc> arcs;
  std::size_t i = 0;
  while (marked[i]) ++i;  // start of an unmarked stretch exists
  for (std::size_t seen = 0; seen < g.m; ++seen) {
    std::size_t idx = (i + seen) % g.m;
    if (marked[idx] && !marked[(idx + g.m - 1) % g.m]) {
      std::size_t len = 0;
      while (marked[(idx + len) % g.m]) ++len;
      arcs.emplace_back(static_cast<double>(idx) * g.h,
                        static_cast<double>(len) * g.h);
    }
  }
  return domain_normalize(std::move(arcs));
}

std::vector<char> saturate_from(const Ifs& F, const Grid& g, std::size_t start,
                                double fuzz) {
  std::vector<char> marked(g.m, 0);
  std::deque<std::size_t> queue;
  marked[start] = 1;
  queue.push_back(start);
  while (!queue.empty()) {
    std::size_t cell = queue.front();
    queue.pop_front();
    for (int sym = 1; sym <= F.size(); ++sym) {
      double y = F.at(sym).apply(g.center(cell));
      g.for_ball(y, fuzz, [&](std::size_t j) {
        if (!marked[j]) {
          marked[j] = 1;
          queue.push_back(j);
        }
      });
    }
  }
  return marked;
}

}  // namespace

ReachabilityResult epsilon_reachable(const Ifs& F, CirclePoint x, double epsilon,
                                     double resolution) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (resolution > epsilon / 4.0)
    throw DomainError("resolution must be at most epsilon/4");
  Grid g(resolution);

  ReachabilityResult res;
  res.grid_resolution = g.h;
  res.epsilon = epsilon;
  std::vector<char> marked = saturate_from(F, g, g.cell_of(x.x), epsilon);
  res.reached_set = cells_to_domain(marked, g);
  res.reached_all = !res.reached_set.has_value();
  return res;
}

bool check_invariant_domain(const Ifs& F, const IntervalDomain& U,
                            double strict_margin) {
  if (strict_margin < 0.0) throw DomainError("margin must be nonnegative");
  for (int sym = 1; sym <= F.size(); ++sym) {
    IntervalDomain img = domain_image(F.at(sym), U);
    for (const Arc& a : img.arcs)
      if (!U.contains_arc(a, strict_margin)) return false;
  }
  return true;
}

std::optional<IntervalDomain> detect_strictly_absorbing(
    const Ifs& F, double epsilon, double resolution,
    const std::vector<CirclePoint>& starts) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (resolution > epsilon / 4.0)
    throw DomainError("resolution must be at most epsilon/4");
  Grid g(resolution);

  std::vector<CirclePoint> sources = starts;
  if (sources.empty())
    for (int i = 0; i < 16; ++i)
      sources.emplace_back(static_cast<double>(i) / 16.0);

  for (CirclePoint s : sources) {
    std::vector<char> marked = saturate_from(F, g, g.cell_of(s.x), epsilon);
    if (std::find(marked.begin(), marked.end(), char(0)) == marked.end())
      continue;  // this start reaches everything

    // Prune the transient trail: keep only cells that stay in the image of
    // the marked set, iterated to a fixed point.
    for (;;) {
      std::vector<char> image(g.m, 0);
      for (std::size_t i = 0; i < g.m; ++i) {
        if (!marked[i]) continue;
        for (int sym = 1; sym <= F.size(); ++sym) {
          double y = F.at(sym).apply(g.center(i));
          g.for_ball(y, epsilon, [&](std::size_t j) { image[j] = 1; });
        }
      }
      bool changed = false;
      for (std::size_t i = 0; i < g.m; ++i) {
        char keep = marked[i] && image[i];
        if (keep != marked[i]) changed = true;
        marked[i] = keep;
      }
      if (!changed) break;
    }

    std::optional<IntervalDomain> core = cells_to_domain(marked, g);
    if (!core)
      throw InconsistencyError("pruned core unexpectedly covers the circle");
    double margin = epsilon - 2.0 * g.h;
    if (margin < 0.0) margin = 0.0;
    if (!check_invariant_domain(F, *core, margin))
      throw InconsistencyError(
          "grid-absorbing candidate failed exact invariance verification");
    return core;
  }
  return std::nullopt;
}

std::optional<Word> covering_word(const Ifs& F, CirclePoint x, const Arc& J,
                                  double epsilon, double resolution,
                                  std::size_t max_len) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (resolution > epsilon / 4.0)
    throw DomainError("resolution must be at most epsilon/4");
  Grid g(resolution);

  const double fuzz = epsilon / 2.0;
  const std::size_t target = g.cell_of(J.midpoint());
  const std::size_t start = g.cell_of(x.x);

  struct Parent {
    std::size_t cell;
    int sym;
  };
  std::vector<int> depth(g.m, -1);
  std::vector<Parent> parent(g.m, {0, 0});
  std::deque<std::size_t> queue;
  depth[start] = 0;
  queue.push_back(start);

  bool found = (start == target);
  while (!queue.empty() && !found) {
    std::size_t cell = queue.front();
    queue.pop_front();
    if (static_cast<std::size_t>(depth[cell]) >= max_len) continue;
    for (int sym = 1; sym <= F.size() && !found; ++sym) {
      double y = F.at(sym).apply(g.center(cell));
      g.for_ball(y, fuzz, [&](std::size_t j) {
        if (depth[j] < 0) {
          depth[j] = depth[cell] + 1;
          parent[j] = {cell, sym};
          if (j == target) found = true;
          queue.push_back(j);
        }
      });
    }
  }
  if (!found) return std::nullopt;

  std::vector<int> symbols;
  for (std::size_t c = target; c != start; c = parent[c].cell)
    symbols.push_back(parent[c].sym);
  std::reverse(symbols.begin(), symbols.end());
  Word w(symbols, F.size());

  // Certification: thread the interval [x, x] with full +-epsilon fattening
  // and require the final interval to contain J.
  double lo = x.x, up = x.x;
  for (int sym : symbols) {
    const CircleMap& f = F.at(sym);
    lo = f.lift(lo) - epsilon;
    up = f.lift(up) + epsilon;
  }
  double span = up - lo;
  if (span < 1.0) {
    double offset = wrap(J.left - lo);
    if (offset + J.length > span) return std::nullopt;
  }
  return w;
}

}  // namespace ifslab
