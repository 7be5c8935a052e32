#pragma once

#include <string>
#include <vector>

#include "ifslab/common.hpp"

namespace ifslab {

// A point of R/Z, stored in the fundamental domain [0, 1).
struct CirclePoint {
  double x = 0.0;
  CirclePoint() = default;
  CirclePoint(double v) : x(wrap(v)) {}  // NOLINT: implicit by design
};

inline double circle_dist(CirclePoint a, CirclePoint b) {
  return circle_dist(a.x, b.x);
}

// Oriented arc starting at `left` of the given length, 0 < length < 1.
// An arc may wrap through 0; its right endpoint is wrap(left + length).
struct Arc {
  double left = 0.0;
  double length = 0.0;

  Arc() = default;
  Arc(double l, double len);

  double right() const { return wrap(left + length); }
  // True if the closed arc contains x, with slack `tol` on both sides.
  bool contains(double x, double tol = 0.0) const;
  double midpoint() const { return wrap(left + length / 2.0); }
};

// Arc between two endpoints going counterclockwise from a to b.
Arc arc_between(double a, double b);

// Finite union of disjoint arcs, kept sorted by left endpoint and with
// touching arcs merged. Never empty and never the full circle.
struct IntervalDomain {
  std::vector<Arc> arcs;

  double total_length() const;
  int components() const { return static_cast<int>(arcs.size()); }
  bool contains(double x, double tol = 0.0) const;
  // True if the closed arc `a` lies inside one component with clearance
  // >= margin at both ends.
  bool contains_arc(const Arc& a, double margin = 0.0) const;
};

// Sorts, merges overlapping or touching arcs (with wraparound), and
// validates. Throws ConstructionError on an empty list or when the union
// covers the whole circle.
IntervalDomain domain_normalize(std::vector<Arc> arcs);

// Complement of a domain, again as a normalized domain.
IntervalDomain domain_complement(const IntervalDomain& d);

// Enlarges every component by `m` on both sides and renormalizes.
// Throws ConstructionError if the result covers the circle.
IntervalDomain domain_dilate(const IntervalDomain& d, double m);

// Length of the symmetric difference of two domains.
double domain_symmetric_difference(const IntervalDomain& a,
                                   const IntervalDomain& b);

// Word over the alphabet {1, ..., alphabet}. symbols[0] acts first.
struct Word {
  std::vector<int> symbols;
  int alphabet = 0;

  Word() = default;
  Word(std::vector<int> syms, int s);
  // Parses a digit string like "121"; only valid for alphabets up to 9.
  Word(const std::string& digits, int s);

  int size() const { return static_cast<int>(symbols.size()); }
  std::string str() const;
};

// Concatenation: u followed by v (u acts first).
Word concat(const Word& u, const Word& v);

// n copies of w.
Word word_power(const Word& w, int n);

}  // namespace ifslab
