#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ifslab/circle.hpp"
#include "ifslab/circle_map.hpp"

namespace ifslab {

// What a packaged example system is expected to exhibit. The covers are
// finite-depth truncations: unions of closed arcs that contain the limit
// object and on which the stated inclusions can be checked cellwise.
struct ZooPredictions {
  bool forward_full = false;  // forward minimal set expected to be the circle
  bool backward_full = false;
  bool forward_inside_backward = false;  // strict inclusion expected
  bool backward_inside_forward = false;
  int expected_d = 1;
  std::string factor_verdict = "synchronizing";
  std::optional<IntervalDomain> forward_cover;
  std::optional<IntervalDomain> backward_cover;
  // Points where the two minimal sets are expected to meet.
  std::vector<CirclePoint> intersection_points;
  // The distinguished arc of the construction: the gap carrying the glued
  // flow, or the support of the rearranging map.
  std::optional<Arc> core_interval;
  std::optional<Arc> bump_support;  // where factorization is expected to fail
};

struct ZooSystem {
  std::string name;
  int depth = 0;
  Ifs ifs;
  ZooPredictions predictions;
};

// Schottky pair (strong north-south and east-west maps) with their
// inverses, a glued fractional flow inside one limit-set gap, and a
// piecewise-Moebius map pressing the limit set into itself. Forward-minimal
// exactly on the Cantor limit set, backward-minimal on the whole circle.
// `depth` controls the limit-set truncation in the predictions.
ZooSystem build_one_sided_minimal(int depth = 6);

// Denjoy blow-up of one full orbit of the previous system, truncated to
// `depth` inserted intervals. Both minimal sets become proper, the forward
// one strictly inside the backward one.
ZooSystem build_denjoy_nested(int depth);

// Blow-up of two orbits of an irrational rotation, flow maps in the first
// gap of each orbit, and an interval-rearranging map pinned so that one
// family of gaps is pressed into the other. The minimal sets are
// Cantorvals; neither contains the other. `depth` inserted intervals per
// orbit.
ZooSystem build_cantorval(int depth);

// Projective-line system around scaled Cantor sets: a strong contraction
// fixing 0 and infinity, its inverse, and two glued branch maps. The
// forward and backward minimal sets are Cantor sets meeting exactly at the
// chart images of 0 and infinity (circle points 1/2 and 0).
ZooSystem build_cantor_pair(int depth);

// d-sheeted lift of a system with a proper forward set, plus one extra map
// that is the identity except inside a single lifted gap of that set. The
// expansion count d survives the perturbation; global factorization does
// not, and the failure is localized at the bump.
ZooSystem build_lifted_perturbed(const ZooSystem& base, int d,
                                 int bump_gap_index);

// Name-based dispatch used by the command line: one-sided-minimal,
// denjoy-nested, cantorval, cantor-pair, lifted-perturbed.
ZooSystem build_zoo(const std::string& name, int depth);

}  // namespace ifslab
