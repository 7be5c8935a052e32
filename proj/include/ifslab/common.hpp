#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ifslab {

// Default tolerance for treating two circle points as equal.
inline constexpr double kPointTol = 1e-9;

// Fractional part in [0, 1). wrap(-0.25) == 0.75.
inline double wrap(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // guards against floor rounding at negative epsilons
  return f;
}

// Shortest arc distance between two circle points, in [0, 1/2].
inline double circle_dist(double a, double b) {
  double d = wrap(a - b);
  return d <= 0.5 ? d : 1.0 - d;
}

// Signed displacement from a to b along the circle, in [-1/2, 1/2).
inline double circle_delta(double a, double b) {
  double d = wrap(b - a);
  return d < 0.5 ? d : d - 1.0;
}

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Construction-time contract violations (orientation, monotonicity, ranges).
struct ConstructionError : Error {
  using Error::Error;
};

// A requested operation does not apply to the given object (missing
// derivative, point not fixed, rotation number not zero, ...).
struct DomainError : Error {
  using Error::Error;
};

// Numerical verification of an internally produced certificate failed,
// usually a sign that the grid resolution is too coarse.
struct InconsistencyError : Error {
  using Error::Error;
};

}  // namespace ifslab
