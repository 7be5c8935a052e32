#include "doctest.h"

#include <cmath>
#include <vector>

#include "ifslab/factorization.hpp"
#include "ifslab/families.hpp"

using namespace ifslab;

namespace {

Ifs minimal_pair(double strength = 100.0) {
  return Ifs{{rotation(std::sqrt(2.0) - 1.0),
              north_south(CirclePoint(0.0), CirclePoint(0.5), strength)},
             {}};
}

// Atoms at i/n whose interpolated CDF agrees with F(x) = x^2 at every atom.
// n is a power of two so each weight (2i-1)/n^2 is exact in binary.
EmpiricalMeasure square_cdf_measure(std::size_t n) {
  std::vector<double> atoms, weights;
  double nn = static_cast<double>(n) * static_cast<double>(n);
  atoms.push_back(0.0);
  weights.push_back((2.0 * n - 1.0) / nn);
  for (std::size_t i = 1; i < n; ++i) {
    atoms.push_back(static_cast<double>(i) / n);
    weights.push_back((2.0 * i - 1.0) / nn);
  }
  return EmpiricalMeasure(std::move(atoms), std::move(weights));
}

}  // namespace

TEST_CASE("measure rotation of the uniform measure is a rigid rotation") {
  auto mu = EmpiricalMeasure::uniform_grid(64);
  auto T = measure_rotation(mu, 3);
  for (int i = 0; i < 48; ++i) {
    double x = i / 48.0;
    CHECK(circle_dist(T.apply(x), wrap(x + 1.0 / 3.0)) < 1e-12);
  }
}

TEST_CASE("measure rotation halves the square-law CDF at the right point") {
  auto mu = square_cdf_measure(2048);
  auto T = measure_rotation(mu, 2);
  // Solving F(T(0)) = F(0) + 1/2 with F(x) = x^2 gives T(0) = 1/sqrt(2).
  CHECK(T.apply(0.0) == doctest::Approx(0.7071067811865476).epsilon(1e-6));

  // T^2 telescopes the CDF by a full unit, so it is the identity up to
  // floating-point noise, independently of interpolation error.
  for (double x : {0.05, 0.31, 0.5, 0.77, 0.93}) {
    double y = T.apply(T.apply(x));
    CHECK(circle_dist(x, y) < 1e-9);
  }

  // Arcs keep their mu-mass under T within the step-vs-smooth CDF gap.
  double tol = 3.0 * mu.max_weight();
  for (double x : {0.1, 0.42}) {
    Arc a{x, 0.2};
    Arc ta{T.apply(x), wrap(T.apply(x + 0.2) - T.apply(x))};
    CHECK(std::abs(mu.mass(a) - mu.mass(ta)) < tol);
  }
}

TEST_CASE("measure rotation rejects heavy atoms and degree one") {
  EmpiricalMeasure mu({0.1, 0.5}, {0.6, 0.4});
  CHECK_THROWS_AS(measure_rotation(mu, 2), ConstructionError);
  CHECK_THROWS_AS(measure_rotation(EmpiricalMeasure::uniform_grid(8), 1),
                  DomainError);
}

TEST_CASE("rotations commute exactly") {
  Ifs F{{rotation(std::sqrt(2.0) - 1.0)}, {}};
  std::vector<CirclePoint> sample{0.0, 0.2, 0.55, 0.9};
  CHECK(commutation_residual(rotation(0.5), F, sample) < 1e-12);
}

TEST_CASE("cover lift of a rotation divides the angle") {
  Ifs F{{rotation(0.3)}, {}};
  auto G0 = lift_to_cover(F, 3);
  auto G1 = lift_to_cover(F, 3, {1});
  for (double x : {0.0, 0.4, 0.85}) {
    CHECK(circle_dist(G0.maps[0].apply(x), wrap(x + 0.1)) < 1e-12);
    CHECK(circle_dist(G1.maps[0].apply(x), wrap(x + 0.1 + 1.0 / 3.0)) < 1e-12);
  }
  CHECK(lift_to_cover(F, 1).maps[0].kind() == "rotation");
  CHECK_THROWS_AS(lift_to_cover(F, 2, {0, 1}), ConstructionError);
}

TEST_CASE("cover lift projects onto the base and commutes with the deck") {
  auto F = minimal_pair();
  auto G = lift_to_cover(F, 2);
  REQUIRE(G.size() == 2);

  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 17; ++i) {
      double x = i / 17.0;
      double down = wrap(2.0 * G.maps[j].apply(x));
      CHECK(circle_dist(down, F.maps[j].apply(wrap(2.0 * x))) < 1e-12);
    }
  }

  std::vector<CirclePoint> grid;
  for (int i = 0; i < 64; ++i) grid.push_back(CirclePoint(i / 64.0));
  CHECK(commutation_residual(rotation(0.5), G, grid) < 1e-12);

  // Inverses thread through the lift as well.
  for (int j = 0; j < 2; ++j) {
    double x = 0.37;
    CHECK(circle_dist(G.maps[j].apply_inverse(G.maps[j].apply(x)), x) < 1e-9);
  }
}

TEST_CASE("factorization report flags a synchronizing system") {
  FactorParams p;
  p.partition_size = 512;
  p.word_length = 600;
  p.trials = 12;
  p.rng_seed = 3;
  auto rep = factorization_report(minimal_pair(), p);
  CHECK(rep.synchronizing);
  CHECK(rep.d == 1);
  CHECK(rep.verdict == "synchronizing");
}

TEST_CASE("factorization report is inconclusive for a lone rotation") {
  FactorParams p;
  p.partition_size = 256;
  p.word_length = 200;
  p.trials = 6;
  p.rng_seed = 11;
  auto rep = factorization_report(Ifs{{rotation(0.25)}, {}}, p);
  CHECK(rep.inconclusive);
  CHECK(rep.verdict == "inconclusive");
}

TEST_CASE("factorization report certifies the 2-cover lift") {
  // Gentle contraction keeps the stationary density bounded away from zero,
  // so the empirical quantiles behind T converge at Monte-Carlo rate. (With
  // strength 100 the base measure develops near-vacuum bands whose quantile
  // error is limited by hole widths, not by the sample count.)
  auto G = lift_to_cover(minimal_pair(3.0), 2);
  FactorParams p;
  p.partition_size = 512;
  p.word_length = 600;
  p.trials = 12;
  p.measure_samples = 40000;
  p.measure_burn_in = 500;
  p.backward_sample = 256;
  p.grid_points = 512;
  p.residual_threshold = 0.1;
  p.rng_seed = 5;
  auto rep = factorization_report(G, p);
  REQUIRE_FALSE(rep.inconclusive);
  REQUIRE_FALSE(rep.synchronizing);
  CHECK(rep.d == 2);
  CHECK(rep.verdict == "candidate");
  CHECK(rep.residual_backward < 0.1);
  CHECK(rep.residual_full < 0.1);
  CHECK(rep.power_residual < 1e-6);
  CHECK(rep.cdf_gap < 0.15);
  REQUIRE(rep.profile_arcs.size() == 64);
  REQUIRE(rep.profile_values.size() == 64);
}

TEST_CASE("a bump inside one deck copy obstructs the factorization") {
  auto G = lift_to_cover(minimal_pair(3.0), 2);
  // The bump moves points only inside (0.55, 0.70), breaking the deck
  // symmetry there; the residual must localize on the bump arc and its
  // deck translate.
  FlowBumpParams bp;
  bp.support = Arc{0.55, 0.15};
  bp.time = 1.2;
  bp.amplitude = 0.1;
  auto maps = G.maps;
  maps.push_back(flow_bump(bp));
  Ifs H{maps, {}};

  FactorParams p;
  p.forced_d = 2;  // skip the repeller count; the deck structure is known
  p.measure_samples = 40000;
  p.measure_burn_in = 500;
  p.backward_sample = 256;
  p.grid_points = 512;
  p.rng_seed = 5;
  auto rep = factorization_report(H, p);
  REQUIRE_FALSE(rep.inconclusive);
  REQUIRE(rep.d == 2);

  double on_bump = 0.0;
  for (std::size_t i = 0; i < rep.profile_arcs.size(); ++i) {
    double c = rep.profile_arcs[i].midpoint();
    if (Arc{0.53, 0.19}.contains(c) || Arc{0.03, 0.19}.contains(c)) {
      on_bump = std::max(on_bump, rep.profile_values[i]);
    }
  }
  CHECK(on_bump > 0.01);
}

