#pragma once

#include "ifslab/circle.hpp"
#include "ifslab/circle_map.hpp"
#include "ifslab/rng.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace ifslab {

// Atomic probability measure on the circle with sorted support.
//
// Two CDF conventions are exposed on purpose:
//  - cdf_lift(): step CDF extended to a degree-one "lift" on the real line,
//    used for Wasserstein computations (classical circular OT on atoms);
//  - smooth_cdf_lift(): continuous piecewise-linear interpolation between
//    atoms, strictly increasing, hence invertible. The mass of atom i is
//    spread linearly over (x_{i-1}, x_i]. This is what measure-rotation
//    constructions invert.
class EmpiricalMeasure {
public:
  EmpiricalMeasure(std::vector<double> atoms, std::vector<double> weights);

  static EmpiricalMeasure uniform_grid(std::size_t points);
  static EmpiricalMeasure point_mass(CirclePoint x);

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }

  // Step CDF as a degree-one monotone function of a real variable:
  // cdf_lift(t + 1) = cdf_lift(t) + 1, right-continuous in t.
  double cdf_lift(double t) const;

  // Continuous strictly increasing interpolated CDF (degree one) and its
  // exact inverse.
  double smooth_cdf_lift(double t) const;
  double smooth_quantile_lift(double q) const;

  // Mass of the arc, via the step CDF.
  double mass(const Arc& a) const;

  double max_weight() const;
  // Largest gap between consecutive atoms; reported by factorization as
  // the resolution limit of CDF inversion.
  double max_atom_gap() const;

private:
  std::vector<double> atoms_;    // sorted, in [0,1)
  std::vector<double> weights_;  // positive, sum 1
  std::vector<double> cum_;      // cum_[i] = w_0 + ... + w_i
};

// Exact Wasserstein-1 distance on the circle between atomic measures,
// computed as min over c of the L1 distance between step CDFs shifted by c
// (the minimum is attained at a weighted median).
double wasserstein_circle(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// I.i.d. word of n symbols over {0,...,s-1} with the given probabilities.
Word sample_word(int s, const std::vector<double>& probabilities, std::size_t n,
        std::uint64_t rng_seed);

// Birkhoff average of point masses along one random forward orbit of x0,
// recorded after burn_in steps. Pass inverse_ifs(F) for the backward version.
EmpiricalMeasure empirical_stationary(const Ifs& F, CirclePoint x0, std::size_t N,
                   std::size_t burn_in, std::uint64_t rng_seed);

// Wasserstein distance between mu and the probability-weighted average of
// its pushforwards under the generators. Near zero certifies approximate
// stationarity.
double stationarity_residual(const Ifs& F, const EmpiricalMeasure& mu);

struct SynchronizationStats {
  std::size_t cloud_size = 0;
  std::size_t steps = 0;
  std::size_t trials = 0;
  double tol = 0.0;
  // Per trial: smallest total arc length needed to cover the final cloud
  // (1 minus the largest empty gap). Goes to 0 under synchronization.
  std::vector<double> final_spans;
  // Per trial: fraction of point pairs ending closer than tol.
  std::vector<double> collapse_fractions;

  double mean_span() const;
  double mean_collapse() const;
};

// Drives an equispaced cloud by one common random word per trial.
SynchronizationStats synchronization_test(const Ifs& F, std::size_t cloud_size,
                     std::size_t n, std::size_t trials,
                     std::uint64_t rng_seed, double tol = 1e-3);

struct SyncReport {
  // Mode of the per-trial repeller counts; -1 when inconclusive.
  int d_estimate = -1;
  bool conclusive = false;
  double mode_fraction = 0.0;
  // Count value -> number of trials. Key 0 means "every arc contracted,
  // no repeller visible"; key -1 means "no arc contracted".
  std::map<int, int> histogram;
  // One entry per trial agreeing with the mode: midpoints of the
  // non-contracted runs, in source coordinates.
  std::vector<std::vector<CirclePoint>> repeller_samples;
  // Median image-arc diameter per step, averaged over all trials.
  std::vector<double> contraction_curve;
  std::size_t partition_size = 0;
  std::size_t steps = 0;
  std::size_t trials = 0;
  double contraction_tol = 0.0;
};

// Pushes the uniform partition through random words and counts maximal runs
// of arcs whose image stays larger than contraction_tol. contraction_tol <= 0
// selects the default 4/partition_size.
SyncReport estimate_d(const Ifs& F, std::size_t partition_size, std::size_t n,
           std::size_t trials, double contraction_tol,
           std::uint64_t rng_seed);

// Hausdorff distance between f_{w_0}(r_omega) and r_shifted, validating the
// equivariance of repeller estimates under the shift.
double repeller_pushforward_check(const Ifs& F, const Word& omega_prefix,
                 const std::vector<CirclePoint>& r_omega,
                 const std::vector<CirclePoint>& r_shifted);

}  // namespace ifslab
