#pragma once

#include <optional>
#include <vector>

#include "ifslab/circle.hpp"
#include "ifslab/circle_map.hpp"

namespace ifslab {

// Grid summary of epsilon-orbit reachability. When every cell is reachable,
// reached_set is empty (an IntervalDomain cannot hold the full circle).
struct ReachabilityResult {
  bool reached_all = false;
  std::optional<IntervalDomain> reached_set;
  double grid_resolution = 0.0;
  double epsilon = 0.0;
};

// Marks every grid cell reachable from x by orbits that may err by less than
// epsilon after each generator application. The grid must satisfy
// resolution <= epsilon/4 so the cell fuzz stays dominated by epsilon.
ReachabilityResult epsilon_reachable(const Ifs& F, CirclePoint x, double epsilon,
                                     double resolution);

// Exact-image invariance test: every generator maps U inside U with
// clearance >= strict_margin at both ends of every image component.
bool check_invariant_domain(const Ifs& F, const IntervalDomain& U,
                            double strict_margin);

// Searches for a strictly absorbing interval-domain: runs epsilon_reachable
// from each start (16 equispaced points by default), takes the first start
// that does not reach the whole circle, prunes the transient trail by
// iterating the grid image to its stable core, and verifies the result with
// check_invariant_domain at margin epsilon - 2*resolution. Returns nullopt
// when every start reaches everything; throws InconsistencyError when a
// candidate fails exact verification.
std::optional<IntervalDomain> detect_strictly_absorbing(
    const Ifs& F, double epsilon, double resolution,
    const std::vector<CirclePoint>& starts = {});

// Shortest word (by grid BFS at epsilon/2 step fuzz) whose epsilon-fattened
// image of x covers the arc J; the returned word is certified by threading
// the full [x - 0, x + 0] interval with +-epsilon fattening and checking that
// the final interval contains J. Returns nullopt if no word of length
// <= max_len reaches J's cell or if certification fails.
std::optional<Word> covering_word(const Ifs& F, CirclePoint x, const Arc& J,
                                  double epsilon, double resolution,
                                  std::size_t max_len);

}  // namespace ifslab
