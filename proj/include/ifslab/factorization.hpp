#pragma once

#include "ifslab/circle_map.hpp"
#include "ifslab/random_dynamics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ifslab {

// Monotone circle map T with mu[x, T(x)] = 1/d for every x, built by
// inverting the interpolated CDF: T(x) = C^{-1}(C(x) + 1/d). Requires d >= 2
// and no atom of weight >= 1/d (otherwise C^{-1} would have to jump across
// the atom and T could not be a homeomorphism).
CircleMap measure_rotation(const EmpiricalMeasure& mu, int d);

// Max circle distance between T(g(x)) and g(T(x)) over all generators g of F
// and all sample points x, including the same test with g replaced by its
// inverse. Zero means T commutes with the family on the sample.
double commutation_residual(const CircleMap& T, const Ifs& F,
                            const std::vector<CirclePoint>& sample);

// d-fold cover of the family: each generator g becomes
//   g~(x) = (lift_g(d x) + k) / d,
// which projects to g under x -> d x mod 1 and commutes with the deck
// rotation x -> x + 1/d exactly. rotation_choice picks k per generator
// (defaults to all zeros); d = 1 returns F unchanged.
Ifs lift_to_cover(const Ifs& F, int d,
                  const std::vector<int>& rotation_choice = {});

// Outcome of the factorization pipeline. Exactly one of `synchronizing`,
// `inconclusive`, or a usable (d, T) pair is meaningful; `verdict` is one of
// "synchronizing", "inconclusive", "candidate", "obstructed".
struct FactorCandidate {
  int d = 0;
  CircleMap T;  // identity unless d >= 2 was estimated
  bool synchronizing = false;
  bool inconclusive = false;
  std::string verdict;
  std::string detail;

  // Residuals of the commutation test for T against the generators.
  double residual_backward = 0.0;  // on the backward stationary sample
  double residual_full = 0.0;      // on a uniform grid over the circle
  double power_residual = 0.0;     // max |T^d(x) - x| over the grid
  double cdf_gap = 0.0;            // max atom spacing of the CDF behind T

  // Spatial profile of the grid residual: profile_values[i] is the largest
  // residual seen at grid points inside profile_arcs[i]. A factorization
  // obstruction shows up as a localized spike here.
  std::vector<Arc> profile_arcs;
  std::vector<double> profile_values;
};

struct FactorParams {
  // Stage 1: repeller counting (see estimate_d).
  std::size_t partition_size = 2048;
  std::size_t word_length = 2000;
  std::size_t trials = 50;
  // Stage 2: forward stationary estimate feeding the CDF.
  std::size_t measure_samples = 100000;
  std::size_t measure_burn_in = 1000;
  // Stage 3: commutation testing.
  std::size_t backward_sample = 512;
  std::size_t profile_bins = 64;
  std::size_t grid_points = 1024;
  double residual_threshold = 0.02;  // candidate vs obstructed
  int forced_d = 0;  // >= 2 skips the counting stage and uses this d
  std::uint64_t rng_seed = 2026;
};

// Pipeline: estimate the number d of expansion runs; d = 1 means the system
// synchronizes and there is nothing to factor. For d >= 2, build T from the
// forward stationary estimate and measure how far it is from commuting with
// the generators, both on a backward stationary sample and across the whole
// circle. The verdict is evidence, not a proof; the residual profile shows
// where commutation fails.
FactorCandidate factorization_report(const Ifs& F,
                                     const FactorParams& params = {});

}  // namespace ifslab
