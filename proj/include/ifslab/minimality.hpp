#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifslab/circle.hpp"
#include "ifslab/circle_map.hpp"

namespace ifslab {

enum class Direction { kForward, kBackward };

// Grid cover of the smallest closed set invariant under all generators
// (forward) or all inverses (backward).
struct MinimalSetEstimate {
  Direction direction = Direction::kForward;
  bool full_circle = false;
  bool empty = false;
  // Engaged iff neither full_circle nor empty.
  std::optional<IntervalDomain> cover;
  double resolution = 0.0;
  std::size_t iterations = 0;  // orbit steps taken, or closure depth reached
  std::string method;          // "orbit" or "closure"
  std::string warning;         // set when per-seed runs disagree noticeably
};

struct MinimalSetOptions {
  // "orbit": mark cells visited by independent random orbits after a burn-in
  // and intersect over seeds. "closure": saturate grid cells under cell-image
  // marking from random start cells, again intersected over seeds. Closure
  // overestimates badly when some generator expands near the invariant set,
  // so orbit sampling is the default.
  std::string method = "orbit";
  std::size_t orbit_steps = 400000;
  std::size_t burn_in = 2000;
  int seeds = 4;
  std::uint64_t rng_seed = 77;
  double disagreement_warning = 0.10;  // fraction of the seed-union cells
};

MinimalSetEstimate minimal_set_estimate(const Ifs& F, Direction direction,
                                        double resolution, int max_depth,
                                        const MinimalSetOptions& options = {});

// Points approached from one common side by both covers at the available
// resolution: a grid point qualifies when, on the same side (left or
// right), each cover has a cell inside the adjacent window of length
// 8 * resolution. Consecutive qualifying grid points are clustered and the
// cluster midpoints returned. Two full-circle estimates yield the canonical
// representative 0; disjoint covers yield an empty list.
std::vector<CirclePoint> essential_intersection(const MinimalSetEstimate& mp,
                                                const MinimalSetEstimate& mm,
                                                double resolution);

// Numerical verification that the maps named by `words` contract a
// neighbourhood `domain` into itself while their images of `core` cover
// `core`. A valid certificate pins down minimality on the core arc, with
// robustness roughly min(invariance_clearance, covering_margin).
struct HutchinsonCertificate {
  bool valid = false;
  std::string failure_reason;  // first violated condition when invalid
  double witness = 0.0;        // point at which the violation shows
  Arc domain{0.0, 0.5};        // the contraction neighbourhood I
  Arc core{0.0, 0.25};         // the covered arc J, inside `domain`
  std::vector<Word> words;
  std::vector<double> contraction_factors;  // max secant slope per word
  double invariance_clearance = 0.0;
  double covering_margin = 0.0;
  double robustness_scale = 0.0;
};

HutchinsonCertificate hutchinson_certificate(const Ifs& F, const Arc& domain,
                                             const Arc& core,
                                             const std::vector<Word>& words,
                                             int grid = kDefaultValidationGrid);

// Constructive certificate for a pair (rotation-like generator, generator
// with a hyperbolic attractor): shrinks a neighbourhood of the repelling
// fixed point away, builds words "apply the attracting map once, then rotate
// m_j times", and hands them to hutchinson_certificate. Also verifies that
// the rotated copies of the core arc cover the whole circle, in both
// rotation directions.
struct RobustMinimalityReport {
  bool certified = false;
  std::string status;  // "certified" or the first obstruction met
  double rotation_value = 0.0;
  double attractor = 0.0;
  double repeller = 0.0;
  double attractor_slope = 0.0;
  double eta = 0.0;       // excluded radius around the repeller (domain arc)
  double core_eta = 0.0;  // wider excluded radius for the core arc
  std::vector<int> rotation_exponents;
  HutchinsonCertificate certificate;
  double circle_cover_margin = 0.0;
  double inverse_cover_margin = 0.0;
};

RobustMinimalityReport robust_minimality_check(const Ifs& F, int rotation_index,
                                               int ns_index);

}  // namespace ifslab
