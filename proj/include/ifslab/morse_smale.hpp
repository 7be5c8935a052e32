#pragma once

#include "ifslab/circle_map.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ifslab {

enum class FixedPointKind { kAttractor, kRepeller, kNeutral };

struct FixedPoint {
  CirclePoint x;
  FixedPointKind kind = FixedPointKind::kNeutral;
  std::optional<double> multiplier;  // derivative (or secant slope) at x
};

struct FixedPointSet {
  std::vector<FixedPoint> points;  // sorted by position
  // True when the map fixes every grid point (identity up to tolerance);
  // `points` is left empty in that case.
  bool neutral_everywhere = false;

  std::size_t count(FixedPointKind k) const;
};

// Locates the zeros of the displacement x -> f(x) - x by scanning a grid of
// step `resolution` for sign changes and bisecting each bracket to 1e-12.
// Classification: multiplier < 1 attractor, > 1 repeller, within 1e-6 of 1
// neutral. Errors out when the translation number is not consistent with 0,
// since such maps have no fixed points at all.
FixedPointSet fixed_points(const CircleMap& f, double resolution);

// Chain-rule product of the generator derivatives along the orbit of b
// under u (exactly |u| factors, one per applied symbol). b must be fixed by
// the composite within 1e-8. Analytic derivatives where available, central
// differences with Richardson extrapolation otherwise.
double word_multiplier(const Ifs& F, const Word& u, CirclePoint b);

struct DistinctMultipliersReport {
  bool distinct = false;
  bool inconclusive = false;
  std::string status;
  std::vector<CirclePoint> attractors;
  std::vector<double> multipliers;
  double min_relative_gap = 0.0;  // over attractor pairs
  // Filled when a prefix word is supplied: smallest distance between any
  // prefix-orbit point of an attractor and the attractor set itself.
  std::optional<double> min_orbit_distance;
  bool orbits_disjoint = true;
};

// Lists the attractor multipliers of the composite of u and checks that they
// are pairwise separated by more than `tol` in relative terms. A neutral
// fixed point makes the verdict inconclusive. When `prefix` is given, also
// verifies that the prefix-orbits of the attractors avoid the attractor set
// (the locality precondition for targeted multiplier surgery).
DistinctMultipliersReport distinct_multipliers_check(
    const Ifs& F, const Word& u, double tol,
    const std::optional<Word>& prefix = {});

struct PerturbationReport {
  std::string status;  // "ok" or a diagnostic
  bool structural_mismatch = false;
  std::vector<int> n_values;
  // Per n: largest distance between an attractor of the composed word and
  // the matched attractor of the pure power word.
  std::vector<double> attractor_distances;
  std::vector<CirclePoint> base_attractors;
  std::vector<double> multipliers_before;  // at the largest n
  std::vector<double> multipliers_after;   // after the bump
  int bumped = -1;
  double max_other_relative_change = 0.0;
};

// Builds the words u(n) = w^m followed by 1^{k n} for n = 1, 2, 4, ... up to
// n_max, tracks how fast their attractors approach those of the pure power
// word 1^k, then bumps the first generator's derivative at one attractor and
// verifies the other multipliers do not move. The near-identity requirement
// sup |f_w^m(x) - x| < eta guards the attractor-matching step.
PerturbationReport multiplier_perturbation_experiment(const Ifs& F,
                                                      const Word& w, int k,
                                                      int m, int n_max,
                                                      double eta = 1e-3);

}  // namespace ifslab
