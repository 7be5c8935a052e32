#include <cmath>

#include "doctest.h"
#include "ifslab/families.hpp"
#include "ifslab/random_dynamics.hpp"

using namespace ifslab;

namespace {

Ifs minimal_example() {
  return Ifs{{rotation(std::sqrt(2.0) - 1.0),
              north_south(CirclePoint(0.0), CirclePoint(0.5), 100.0)},
             {}};
}

}  // namespace

TEST_CASE("empirical measure merges, sorts and normalizes atoms") {
  EmpiricalMeasure mu({0.7, 0.1, 0.1 + 1e-15}, {0.25, 0.5, 0.25});
  CHECK(mu.size() == 2);
  CHECK(mu.atoms()[0] == doctest::Approx(0.1));
  CHECK(mu.weights()[0] == doctest::Approx(0.75));
  CHECK(mu.mass(Arc{0.05, 0.1}) == doctest::Approx(0.75));
  CHECK(mu.max_weight() == doctest::Approx(0.75));
}

TEST_CASE("step cdf lift is degree one and right continuous") {
  auto mu = EmpiricalMeasure::uniform_grid(4);
  CHECK(mu.cdf_lift(0.5) == doctest::Approx(0.75));
  CHECK(mu.cdf_lift(0.49) == doctest::Approx(0.5));
  CHECK(mu.cdf_lift(1.5) == doctest::Approx(mu.cdf_lift(0.5) + 1.0));
  CHECK(mu.cdf_lift(-0.5) == doctest::Approx(mu.cdf_lift(0.5) - 1.0));
}

TEST_CASE("smooth cdf and quantile lifts invert each other") {
  EmpiricalMeasure mu({0.15, 0.4, 0.9}, {0.2, 0.5, 0.3});
  for (double q : {0.05, 0.2, 0.5, 0.77, 0.99, 1.3, -0.4}) {
    CHECK(mu.smooth_cdf_lift(mu.smooth_quantile_lift(q)) ==
          doctest::Approx(q).epsilon(1e-12));
  }
  for (double t : {0.0, 0.15, 0.3999, 0.5, 0.89, 1.7}) {
    CHECK(mu.smooth_quantile_lift(mu.smooth_cdf_lift(t)) ==
          doctest::Approx(t).epsilon(1e-12));
  }
  // Increasing by one full turn on either side.
  CHECK(mu.smooth_cdf_lift(0.3 + 1.0) ==
        doctest::Approx(mu.smooth_cdf_lift(0.3) + 1.0));
  CHECK(mu.smooth_quantile_lift(0.25 + 1.0) ==
        doctest::Approx(mu.smooth_quantile_lift(0.25) + 1.0));
}

TEST_CASE("circular wasserstein distance matches hand values") {
  auto delta0 = EmpiricalMeasure::point_mass(CirclePoint(0.0));
  auto delta3 = EmpiricalMeasure::point_mass(CirclePoint(0.3));
  auto delta7 = EmpiricalMeasure::point_mass(CirclePoint(0.7));
  CHECK(wasserstein_circle(delta0, delta3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(wasserstein_circle(delta0, delta7) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(wasserstein_circle(delta0, delta0) == doctest::Approx(0.0));
  // Point mass against the uniform measure costs a quarter turn on average.
  auto uni = EmpiricalMeasure::uniform_grid(512);
  CHECK(wasserstein_circle(delta0, uni) == doctest::Approx(0.25).epsilon(1e-2));
  // Rotating a grid onto itself keeps the distance at zero.
  std::vector<double> shifted, w(256, 1.0 / 256.0);
  for (int i = 0; i < 256; ++i) shifted.push_back(wrap(i / 256.0 + 0.125));
  EmpiricalMeasure rot(shifted, w);
  CHECK(wasserstein_circle(rot, EmpiricalMeasure::uniform_grid(256)) <
        1e-12);
  // A misaligned copy pays the fractional offset on the minority side.
  std::vector<double> off;
  for (int i = 0; i < 256; ++i) off.push_back(wrap(i / 256.0 + 0.123));
  EmpiricalMeasure near(off, w);
  CHECK(wasserstein_circle(near, EmpiricalMeasure::uniform_grid(256)) ==
        doctest::Approx(0.488 / 256.0).epsilon(1e-6));
}

TEST_CASE("sampled words are reproducible and balanced") {
  auto w1 = sample_word(2, {0.5, 0.5}, 2000, 42);
  auto w2 = sample_word(2, {0.5, 0.5}, 2000, 42);
  CHECK(w1.symbols == w2.symbols);
  int ones = 0;
  for (int s : w1.symbols) ones += s == 1;
  CHECK(std::abs(ones - 1000) < 120);
  CHECK_THROWS_AS(sample_word(2, {0.7, 0.2}, 10, 1), ConstructionError);
}

TEST_CASE("empirical stationary measure of a rotation is near uniform") {
  Ifs F{{rotation(std::sqrt(2.0) - 1.0)}, {}};
  auto mu = empirical_stationary(F, CirclePoint(0.0), 20000, 2000, 7);
  CHECK(wasserstein_circle(mu, EmpiricalMeasure::uniform_grid(4096)) < 2e-3);
  CHECK(stationarity_residual(F, mu) < 2e-3);
}

TEST_CASE("stationarity residual vanishes on genuinely invariant data") {
  Ifs F{{north_south(CirclePoint(0.0), CirclePoint(0.5), 50.0)}, {}};
  auto delta = EmpiricalMeasure::point_mass(CirclePoint(0.0));
  CHECK(stationarity_residual(F, delta) < 1e-12);
}

TEST_CASE("synchronization collapses clouds for the contracting pair") {
  auto stats = synchronization_test(minimal_example(), 16, 3000, 6, 21);
  CHECK(stats.final_spans.size() == 6);
  CHECK(stats.mean_span() < 0.05);
  CHECK(stats.mean_collapse() > 0.9);
}

TEST_CASE("synchronization leaves rigid rotations alone") {
  Ifs F{{rotation(std::sqrt(2.0) - 1.0)}, {}};
  auto stats = synchronization_test(F, 16, 500, 3, 5);
  CHECK(stats.mean_span() == doctest::Approx(1.0 - 1.0 / 16.0).epsilon(1e-9));
  CHECK(stats.mean_collapse() == doctest::Approx(0.0));
}

TEST_CASE("repeller count estimation is conclusive on the contracting pair") {
  auto rep = estimate_d(minimal_example(), 512, 600, 12, 0.0, 3);
  CHECK(rep.d_estimate == 1);
  CHECK(rep.conclusive);
  CHECK(rep.mode_fraction > 0.8);
  CHECK(rep.contraction_curve.size() == 600);
  CHECK(rep.contraction_curve.back() < rep.contraction_curve.front());
  for (const auto& samples : rep.repeller_samples) CHECK(samples.size() == 1);
}

TEST_CASE("repeller count estimation refuses rigid rotations") {
  Ifs F{{rotation(std::sqrt(2.0) - 1.0)}, {}};
  auto rep = estimate_d(F, 256, 200, 6, 0.0, 11);
  CHECK_FALSE(rep.conclusive);
  // Partition arcs keep their length exactly, which reads as contraction to
  // within any tolerance above the initial arc size.
  CHECK(rep.histogram.at(0) == 6);
}

TEST_CASE("repeller pushforward check compares image sets") {
  Ifs F{{rotation(0.25)}, {}};
  Word prefix("1", 1);
  std::vector<CirclePoint> r = {CirclePoint(0.2)};
  std::vector<CirclePoint> shifted = {CirclePoint(0.45)};
  CHECK(repeller_pushforward_check(F, prefix, r, shifted) < 1e-12);
  std::vector<CirclePoint> wrong = {CirclePoint(0.6)};
  CHECK(repeller_pushforward_check(F, prefix, r, wrong) ==
        doctest::Approx(0.15).epsilon(1e-9));
}
