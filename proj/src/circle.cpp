#include "ifslab/circle.hpp"

#include <algorithm>
#include <sstream>

namespace ifslab {

Arc::Arc(double l, double len) : left(wrap(l)), length(len) {
  if (!(len > 0.0) || !(len < 1.0))
    throw ConstructionError("arc length must lie in (0, 1), got " +
                            std::to_string(len));
}

bool Arc::contains(double x, double tol) const {
  double rel = wrap(x - left);
  if (rel <= length + tol) return true;
  return rel >= 1.0 - tol;  // just left of the left endpoint
}

Arc arc_between(double a, double b) {
  double len = wrap(b - a);
  if (len == 0.0)
    throw ConstructionError("arc_between: endpoints coincide");
  return Arc(a, len);
}

double IntervalDomain::total_length() const {
  double s = 0.0;
  for (const auto& a : arcs) s += a.length;
  return s;
}

bool IntervalDomain::contains(double x, double tol) const {
  for (const auto& a : arcs)
    if (a.contains(x, tol)) return true;
  return false;
}

bool IntervalDomain::contains_arc(const Arc& a, double margin) const {
  for (const auto& c : arcs) {
    double rel = wrap(a.left - c.left);
    if (rel >= margin - 1e-15 && rel + a.length <= c.length - margin + 1e-15)
      return true;
  }
  return false;
}

IntervalDomain domain_normalize(std::vector<Arc> arcs) {
  if (arcs.empty())
    throw ConstructionError("interval domain must contain at least one arc");
  for (auto& a : arcs) a.left = wrap(a.left);
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& a, const Arc& b) { return a.left < b.left; });

  // Merge on the line starting from the first arc; handle wraparound last.
  std::vector<std::pair<double, double>> merged;  // [left, right] unwrapped
  for (const auto& a : arcs) {
    double l = a.left, r = a.left + a.length;
    if (!merged.empty() && l <= merged.back().second + 1e-15) {
      merged.back().second = std::max(merged.back().second, r);
    } else {
      merged.emplace_back(l, r);
    }
  }
  // Wrap: the last component may reach past 1 into the first ones.
  while (merged.size() > 1 && merged.back().second >= merged.front().first + 1.0 - 1e-15) {
    merged.front().first = merged.back().first - 1.0;
    merged.front().second =
        std::max(merged.front().second, merged.back().second - 1.0);
    merged.pop_back();
  }
  // The wrap-merged front can now reach past later components; keep folding
  // them in until it is clear of the next one.
  while (merged.size() > 1 && merged[1].first <= merged.front().second + 1e-15) {
    merged.front().second = std::max(merged.front().second, merged[1].second);
    merged.erase(merged.begin() + 1);
  }
  if (merged.size() == 1 && merged.front().second - merged.front().first >= 1.0 - 1e-15)
    throw ConstructionError("interval domain covers the full circle");

  IntervalDomain d;
  for (const auto& [l, r] : merged) d.arcs.push_back(Arc(l, r - l));
  std::sort(d.arcs.begin(), d.arcs.end(),
            [](const Arc& a, const Arc& b) { return a.left < b.left; });
  return d;
}

IntervalDomain domain_complement(const IntervalDomain& d) {
  std::vector<Arc> out;
  const auto& a = d.arcs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double from = a[i].right();
    double to = a[(i + 1) % a.size()].left;
    double len = wrap(to - from);
    if (a.size() == 1) len = 1.0 - a[0].length;
    if (len > 1e-15) out.push_back(Arc(from, len));
  }
  if (out.empty())
    throw ConstructionError("complement of domain is empty");
  return domain_normalize(out);
}

IntervalDomain domain_dilate(const IntervalDomain& d, double m) {
  std::vector<Arc> out;
  for (const auto& a : d.arcs) {
    double len = std::min(a.length + 2.0 * m, 1.0 - 1e-12);
    out.push_back(Arc(a.left - m, len));
  }
  return domain_normalize(out);
}

namespace {
// Measure of the set where membership in a and b differs, computed by
// sweeping the combined endpoint list.
double sweep_symdiff(const IntervalDomain& a, const IntervalDomain& b) {
  std::vector<double> cuts;
  for (const auto& arc : a.arcs) {
    cuts.push_back(arc.left);
    cuts.push_back(arc.right());
  }
  for (const auto& arc : b.arcs) {
    cuts.push_back(arc.left);
    cuts.push_back(arc.right());
  }
  for (auto& c : cuts) c = wrap(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  int n = static_cast<int>(cuts.size());
  for (int i = 0; i < n; ++i) {
    double l = cuts[i];
    double r = (i + 1 < n) ? cuts[i + 1] : cuts[0] + 1.0;
    double mid = wrap(l + wrap(r - l) / 2.0);
    if (a.contains(mid) != b.contains(mid)) total += wrap(r - l);
  }
  return total;
}
}  // namespace

double domain_symmetric_difference(const IntervalDomain& a,
                                   const IntervalDomain& b) {
  return sweep_symdiff(a, b);
}

Word::Word(std::vector<int> syms, int s) : symbols(std::move(syms)), alphabet(s) {
  if (s < 1) throw ConstructionError("word alphabet must be at least 1");
  for (int c : symbols)
    if (c < 1 || c > s)
      throw ConstructionError("word symbol " + std::to_string(c) +
                              " outside alphabet 1.." + std::to_string(s));
}

Word::Word(const std::string& digits, int s) {
  alphabet = s;
  if (s < 1 || s > 9)
    throw ConstructionError("digit-string words need alphabet in 1..9");
  for (char c : digits) {
    if (c < '1' || c > '0' + s)
      throw ConstructionError(std::string("bad word digit '") + c + "'");
    symbols.push_back(c - '0');
  }
}

std::string Word::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (alphabet > 9 && i > 0) os << ',';
    os << symbols[i];
  }
  return os.str();
}

Word concat(const Word& u, const Word& v) {
  if (u.alphabet != v.alphabet)
    throw ConstructionError("cannot concatenate words over different alphabets");
  Word w = u;
  w.symbols.insert(w.symbols.end(), v.symbols.begin(), v.symbols.end());
  return w;
}

Word word_power(const Word& w, int n) {
  Word out(std::vector<int>{}, w.alphabet);
  for (int i = 0; i < n; ++i)
    out.symbols.insert(out.symbols.end(), w.symbols.begin(), w.symbols.end());
  return out;
}

}  // namespace ifslab
