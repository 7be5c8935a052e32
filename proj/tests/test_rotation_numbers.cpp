#include <cmath>

#include "doctest.h"
#include "ifslab/families.hpp"
#include "ifslab/rotation_numbers.hpp"

using namespace ifslab;

namespace {

Ifs two_generator_example(double strength) {
  return Ifs{{rotation(std::sqrt(2.0) - 1.0),
              north_south(CirclePoint(0.0), CirclePoint(0.5), strength)},
             {}};
}

}  // namespace

TEST_CASE("translation number of a pure rotation") {
  auto est = translation_number(rotation(0.35), 10000);
  CHECK(est.value == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(est.error_bound == doctest::Approx(1e-4));
  CHECK(est.iterations == 10000);
}

TEST_CASE("translation number vanishes for maps with fixed points") {
  for (double s : {5.0, 50.0, 100.0}) {
    auto est =
        translation_number(north_south(CirclePoint(0.2), CirclePoint(0.7), s), 10000);
    CHECK(std::abs(est.value) < 1e-4);
  }
}

TEST_CASE("translation number is lift-additive for rotations") {
  auto est = translation_number(rotation(0.7), 5000);
  CHECK(est.value == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(translation_number(rotation(0.25), 8).value ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("gap search on a single rotation widens by two epsilon per step") {
  Ifs F{{rotation(0.3)}, {}};
  auto witness = gap_word_search(F, 0.03, 40, 16);
  REQUIRE(witness.has_value());
  // The fuzzed interval spreads by exactly 2 * epsilon each application, so
  // the first word with spread above 1 has 17 symbols.
  CHECK(witness->word.size() == 17);
  CHECK(witness->spread() == doctest::Approx(1.02).epsilon(1e-9));
  CHECK(witness->upper - witness->lower == witness->spread());
}

TEST_CASE("gap search reports nothing when the fuzz cannot accumulate") {
  Ifs F{{north_south(CirclePoint(0.0), CirclePoint(0.5), 100.0)}, {}};
  CHECK_FALSE(gap_word_search(F, 0.001, 30, 8).has_value());
}

TEST_CASE("gap search finds a witness for the rotation plus north-south pair") {
  auto F = two_generator_example(50.0);
  auto witness = gap_word_search(F, 0.05, 120, 32);
  REQUIRE(witness.has_value());
  CHECK(witness->spread() > 1.0);
  CHECK(witness->word.size() <= 120);
}

TEST_CASE("crossing search pins the compensating translation") {
  Ifs F{{rotation(0.3)}, {}};
  Word w("1", 1);
  auto hit = rho_crossing_search(F, w, 1.0 / 3.0, {0.0, 0.1});
  REQUIRE(hit.has_value());
  auto [a, b] = *hit;
  CHECK(b - a < 1e-10);
  CHECK(0.5 * (a + b) == doctest::Approx(1.0 / 3.0 - 0.3).epsilon(1e-8));
}

TEST_CASE("crossing search rejects unreachable targets") {
  Ifs F{{rotation(0.3)}, {}};
  Word w("1", 1);
  CHECK_FALSE(rho_crossing_search(F, w, 0.5, {0.0, 0.05}).has_value());
  CHECK_FALSE(rho_crossing_search(F, w, 0.1, {0.0, 0.05}).has_value());
}

TEST_CASE("crossing search handles longer words") {
  Ifs F{{rotation(0.3)}, {}};
  Word w("11", 1);
  // Two applications pick up the shift twice, so the midpoint compensates
  // half of the defect to the target.
  auto hit = rho_crossing_search(F, w, 2.0 / 3.0, {0.0, 0.1});
  REQUIRE(hit.has_value());
  CHECK(0.5 * (hit->first + hit->second) ==
        doctest::Approx(1.0 / 30.0).epsilon(1e-6));
}

TEST_CASE("measure growth diagnostic tracks the fuzz expansion rate") {
  Ifs F{{rotation(std::sqrt(2.0) - 1.0)}, {}};
  double eps = 0.01;
  auto curve = measure_growth_diagnostic(F, eps, 4, 8, 99);
  REQUIRE(curve.size() == 8);
  // Against the uniform backward stationary measure the fuzzed interval of
  // width 2 n eps carries mass about 2 n eps.
  for (std::size_t n = 1; n < curve.size(); ++n) {
    CHECK(curve[n] == doctest::Approx(2.0 * eps * static_cast<double>(n + 1))
                          .epsilon(0.15));
    CHECK(curve[n] >= curve[n - 1] - 1e-9);
  }
}
