#include <cmath>
#include <vector>

#include "doctest.h"
#include "ifslab/families.hpp"

using namespace ifslab;

namespace {

// Centered finite-difference slope of f at x through the lift.
double fd_slope(const CircleMap& f, double x, double h = 1e-6) {
  return (f.lift(x + h) - f.lift(x - h)) / (2.0 * h);
}

void check_homeo_grid(const CircleMap& f, int n = 2048) {
  double prev = f.lift(0.0);
  for (int i = 1; i <= n; ++i) {
    double v = f.lift(static_cast<double>(i) / n);
    REQUIRE(v > prev);
    prev = v;
  }
  REQUIRE(prev - f.lift(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 64; ++i) {
    double x = i / 64.0;
    REQUIRE(std::abs(circle_delta(f.apply(f.apply_inverse(x)), x)) < 1e-9);
  }
}

}  // namespace

TEST_CASE("chart conversions") {
  CHECK(chart_from_circle(0.5) == doctest::Approx(0.0));
  CHECK(chart_from_circle(0.75) == doctest::Approx(1.0));
  CHECK(std::isinf(chart_from_circle(0.0)));
  CHECK(circle_from_chart(0.0) == doctest::Approx(0.5));
  CHECK(circle_from_chart(std::numeric_limits<double>::infinity()) == 0.0);
  for (double x : {0.01, 0.3, 0.5, 0.77, 0.99})
    CHECK(circle_from_chart(chart_from_circle(x)) == doctest::Approx(x).epsilon(1e-12));
}

TEST_CASE("mobius maps act projectively") {
  SUBCASE("identity parameters give the identity map") {
    auto f = mobius(Mobius{1, 0, 0, 1});
    for (int i = 0; i < 64; ++i) {
      double x = i / 64.0;
      CHECK(f.apply(x) == doctest::Approx(x).epsilon(1e-12));
    }
  }
  SUBCASE("orientation check") {
    CHECK_THROWS_AS(mobius(Mobius{1, 0, 0, -1}), ConstructionError);
  }
  SUBCASE("chart action matches circle action") {
    Mobius m{2.0, 1.0, 0.5, 1.0};  // det 1.5 > 0, gets normalized
    auto f = mobius(m);
    for (int i = 1; i < 97; ++i) {
      double x = i / 97.0;
      double through_chart = circle_from_chart(m.act(chart_from_circle(x)));
      REQUIRE(std::abs(circle_delta(f.apply(x), through_chart)) < 1e-12);
    }
    check_homeo_grid(f);
  }
  SUBCASE("group law: composition is the matrix product") {
    Mobius m1{3.0, 1.0, 1.0, 1.0}, m2{1.0, -0.4, 0.2, 1.0};
    auto lhs = compose_maps({mobius(m1), mobius(m2)});  // m1 acts first
    auto rhs = mobius(m2 * m1);
    for (int i = 0; i < 512; ++i) {
      double x = i / 512.0;
      REQUIRE(std::abs(circle_delta(lhs.apply(x), rhs.apply(x))) < 1e-8);
    }
  }
  SUBCASE("t -> t/100 fixes the chart images of 0 and infinity") {
    auto f = mobius(Mobius{1.0, 0.0, 0.0, 100.0});
    CHECK(std::abs(circle_delta(f.apply(0.5), 0.5)) < 1e-12);  // chart 0
    CHECK(std::abs(circle_delta(f.apply(0.0), 0.0)) < 1e-12);  // chart inf
    // attracting end: derivative 1/100
    CHECK(f.derivative(0.5) == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(fd_slope(f, 0.5) == doctest::Approx(0.01).epsilon(1e-4));
    auto fixed = Mobius{1.0, 0.0, 0.0, 100.0}.fixed_points_chart();
    REQUIRE(fixed.size() == 2);
    bool has_inf = std::isinf(fixed[0]) || std::isinf(fixed[1]);
    bool has_zero = fixed[0] == 0.0 || fixed[1] == 0.0;
    CHECK(has_inf);
    CHECK(has_zero);
  }
  SUBCASE("derivative agrees with finite differences off fixed points") {
    Mobius m{1.4, 0.3, -0.2, 1.0};
    auto f = mobius(m);
    for (double x : {0.03, 0.21, 0.48, 0.5, 0.62, 0.97})
      REQUIRE(f.derivative(x) == doctest::Approx(fd_slope(f, x)).epsilon(1e-5));
  }
}

TEST_CASE("mobius fractional powers") {
  Mobius m = north_south_matrix(0.1, 0.6, 9.0);
  SUBCASE("power 1 reproduces the map") {
    auto f = mobius(m), g = mobius(m.power(1.0));
    for (int i = 0; i < 128; ++i)
      REQUIRE(std::abs(circle_delta(f.apply(i / 128.0), g.apply(i / 128.0))) <
              1e-10);
  }
  SUBCASE("power 2 is the square") {
    auto f2 = mobius(m.power(2.0)), ff = compose_maps({mobius(m), mobius(m)});
    for (int i = 0; i < 128; ++i)
      REQUIRE(std::abs(circle_delta(f2.apply(i / 128.0), ff.apply(i / 128.0))) <
              1e-10);
  }
  SUBCASE("half power squares back") {
    Mobius h = m.power(0.5);
    auto hh = compose_maps({mobius(h), mobius(h)});
    auto f = mobius(m);
    for (int i = 0; i < 128; ++i)
      REQUIRE(std::abs(circle_delta(hh.apply(i / 128.0), f.apply(i / 128.0))) <
              1e-10);
  }
  SUBCASE("negative power inverts") {
    auto f = mobius(m), g = mobius(m.power(-1.0));
    for (int i = 0; i < 128; ++i) {
      double x = i / 128.0;
      REQUIRE(std::abs(circle_delta(g.apply(f.apply(x)), x)) < 1e-10);
    }
  }
  SUBCASE("elliptic matrices are rejected") {
    Mobius rot90{0.0, -1.0, 1.0, 0.0};
    CHECK_THROWS_AS(rot90.power(0.5), DomainError);
  }
}

TEST_CASE("north-south maps") {
  auto f = north_south(0.0, 0.5, 100.0);

  SUBCASE("fixed points are where they were asked to be") {
    CHECK(std::abs(circle_delta(f.apply(0.0), 0.0)) < 1e-12);
    CHECK(std::abs(circle_delta(f.apply(0.5), 0.5)) < 1e-12);
  }
  SUBCASE("points move toward the attractor") {
    double y = f.apply(0.25);
    CHECK(y > 0.0);
    CHECK(y < 0.25);
    CHECK(y == doctest::Approx(0.003182992764908255).epsilon(1e-12));
    CHECK(f.apply(0.9) == doctest::Approx(0.9989657521243371).epsilon(1e-12));
  }
  SUBCASE("multipliers at the fixed points") {
    CHECK(f.derivative(0.0) == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(f.derivative(0.5) == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(fd_slope(f, 0.0, 1e-7) == doctest::Approx(0.01).epsilon(1e-6));
  }
  SUBCASE("general placement") {
    auto g = north_south(0.3, 0.8, 17.0);
    CHECK(std::abs(circle_delta(g.apply(0.3), 0.3)) < 1e-12);
    CHECK(std::abs(circle_delta(g.apply(0.8), 0.8)) < 1e-12);
    CHECK(g.derivative(0.3) == doctest::Approx(1.0 / 17.0).epsilon(1e-9));
    CHECK(g.derivative(0.8) == doctest::Approx(17.0).epsilon(1e-9));
    check_homeo_grid(g);
  }
  SUBCASE("degenerate input rejected") {
    CHECK_THROWS_AS(north_south(0.4, 0.4, 10.0), ConstructionError);
    CHECK_THROWS_AS(north_south(0.0, 0.5, 1.0), ConstructionError);
  }
}

TEST_CASE("flow bumps") {
  Arc support(0.2, 0.3);

  SUBCASE("time zero is the identity") {
    auto f = flow_bump({support, 0.0});
    for (int i = 0; i < 128; ++i)
      CHECK(f.apply(i / 128.0) == doctest::Approx(i / 128.0).epsilon(1e-12));
  }
  SUBCASE("identity outside the support") {
    auto f = flow_bump({support, 1.0});
    for (double x : {0.0, 0.1, 0.19999, 0.50001, 0.7, 0.95})
      CHECK(f.apply(x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(f.apply(0.35) > 0.35);  // pushed forward inside
  }
  SUBCASE("opposite times cancel") {
    auto fwd = flow_bump({support, 1.0});
    auto bwd = flow_bump({support, -1.0});
    for (int i = 0; i < 256; ++i) {
      double x = i / 256.0;
      REQUIRE(std::abs(circle_delta(bwd.apply(fwd.apply(x)), x)) < 1e-6);
    }
  }
  SUBCASE("times add up") {
    auto a = flow_bump({support, 0.7});
    auto b = flow_bump({support, 0.55});
    auto c = flow_bump({support, 1.25});
    for (int i = 0; i < 256; ++i) {
      double x = i / 256.0;
      REQUIRE(std::abs(circle_delta(compose_maps({a, b}).apply(x), c.apply(x))) <
              1e-8);
    }
  }
  SUBCASE("integrator self-consistency at the midpoint") {
    auto coarse = flow_bump({support, 1.0});
    auto fine = flow_bump({support, 1.0, 0.0, 512});
    double m = support.midpoint();
    CHECK(coarse.apply(m) == doctest::Approx(fine.apply(m)).epsilon(1e-8));
  }
  SUBCASE("derivative matches finite differences") {
    auto f = flow_bump({support, -std::sqrt(2.0)});
    for (double x : {0.25, 0.35, 0.42, 0.49})
      REQUIRE(f.derivative(x) == doctest::Approx(fd_slope(f, x)).epsilon(1e-5));
    CHECK(f.derivative(0.1) == doctest::Approx(1.0));
    check_homeo_grid(f);
  }
}

TEST_CASE("bump perturbations") {
  auto f = north_south(0.0, 0.5, 100.0);

  SUBCASE("derivative is retargeted, value preserved") {
    auto g = bump_perturbation(f, 0.0, 0.02, 0.05);
    CHECK(std::abs(circle_delta(g.apply(0.0), f.apply(0.0))) < 1e-12);
    CHECK(fd_slope(g, 0.0, 1e-7) == doctest::Approx(0.02).epsilon(1e-4));
    CHECK(g.derivative(0.0) == doctest::Approx(0.02).epsilon(1e-9));
  }
  SUBCASE("unchanged away from the bump") {
    auto g = bump_perturbation(f, 0.0, 0.02, 0.05);
    for (double x : {0.06, 0.2, 0.5, 0.8, 0.9499})
      REQUIRE(g.apply(x) == doctest::Approx(f.apply(x)).epsilon(1e-13));
  }
  SUBCASE("matching derivative leaves the map alone") {
    auto g = bump_perturbation(f, 0.25, f.derivative(0.25), 0.03);
    for (int i = 0; i < 256; ++i)
      REQUIRE(g.apply(i / 256.0) ==
              doctest::Approx(f.apply(i / 256.0)).epsilon(1e-12));
  }
  SUBCASE("overambitious slopes are rejected") {
    // forcing slope 200 near the attractor needs a violent correction that
    // would fold the map over inside the small radius
    CHECK_THROWS_AS(bump_perturbation(f, 0.0, 200.0, 0.01),
                    ConstructionError);
  }
  SUBCASE("perturbed map is still a homeomorphism") {
    check_homeo_grid(bump_perturbation(f, 0.1, 0.005, 0.04));
  }
}

TEST_CASE("piecewise linear maps") {
  auto f = piecewise_linear({{0.0, 0.1}, {0.25, 0.5}, {0.5, 0.6}, {0.75, 0.9}});
  CHECK(f.apply(0.0) == doctest::Approx(0.1));
  CHECK(f.apply(0.25) == doctest::Approx(0.5));
  CHECK(f.apply(0.125) == doctest::Approx(0.3));  // halfway up the first leg
  CHECK(f.apply_inverse(0.3) == doctest::Approx(0.125));
  CHECK(f.derivative(0.1) == doctest::Approx(1.6));
  check_homeo_grid(f);

  // wrapping knot images
  auto g = piecewise_linear({{0.0, 0.9}, {0.5, 0.1}});
  CHECK(g.apply(0.0) == doctest::Approx(0.9));
  CHECK(g.apply(0.5) == doctest::Approx(0.1));
  CHECK(g.apply(0.25) == doctest::Approx(0.0).epsilon(1e-12));
  check_homeo_grid(g);
}

TEST_CASE("reflection conjugation") {
  SUBCASE("rotations reflect to their inverses") {
    auto g = reflect_conjugate(rotation(0.3));
    for (int i = 0; i < 64; ++i)
      CHECK(g.apply(i / 64.0) ==
            doctest::Approx(wrap(i / 64.0 - 0.3)).epsilon(1e-12));
  }
  SUBCASE("an involution") {
    auto f = north_south(0.1, 0.4, 5.0);
    auto g = reflect_conjugate(reflect_conjugate(f));
    for (int i = 0; i < 128; ++i)
      REQUIRE(g.apply(i / 128.0) ==
              doctest::Approx(f.apply(i / 128.0)).epsilon(1e-12));
  }
  SUBCASE("fixed points mirror") {
    auto f = north_south(0.1, 0.4, 5.0);
    auto g = reflect_conjugate(f);
    CHECK(std::abs(circle_delta(g.apply(0.9), 0.9)) < 1e-12);
    CHECK(std::abs(circle_delta(g.apply(0.6), 0.6)) < 1e-12);
    CHECK(g.derivative(0.9) == doctest::Approx(0.2).epsilon(1e-9));
  }
}

TEST_CASE("piecewise glue") {
  SUBCASE("two maps agreeing at the breakpoints") {
    // t -> 10t for t >= 0 (x in [1/2,1)) and t -> t/10 for t <= 0; the
    // pieces agree at chart 0 and infinity, so no interpolation is needed.
    auto q = Mobius{10.0, 0.0, 0.0, 1.0};
    auto qinv = q.inverse();
    auto h = piecewise_glue({GluePiece{0.0, true, mobius(qinv)},
                             GluePiece{0.5, true, mobius(q)}});
    CHECK(h.apply(0.75) == doctest::Approx(circle_from_chart(10.0)).epsilon(1e-12));
    CHECK(h.apply(0.25) == doctest::Approx(circle_from_chart(-0.1)).epsilon(1e-12));
    CHECK(std::abs(circle_delta(h.apply(0.5), 0.5)) < 1e-12);
    CHECK(std::abs(circle_delta(h.apply(0.0), 0.0)) < 1e-12);
    check_homeo_grid(h);
  }
  SUBCASE("interpolation bridges between map pieces") {
    auto f = north_south(0.1, 0.6, 4.0);
    auto g = piecewise_glue({GluePiece{0.05, true, f},
                             GluePiece{0.3, false, CircleMap()},
                             GluePiece{0.55, true, CircleMap()},
                             GluePiece{0.95, false, CircleMap()}});
    // map piece reproduced exactly on its interval
    for (double x : {0.06, 0.15, 0.29})
      REQUIRE(g.apply(x) == doctest::Approx(f.apply(x)).epsilon(1e-12));
    // identity piece reproduced exactly on its interval
    for (double x : {0.56, 0.8, 0.94})
      REQUIRE(g.apply(x) == doctest::Approx(x).epsilon(1e-12));
    check_homeo_grid(g);
  }
  SUBCASE("mismatched junctions are rejected") {
    CHECK_THROWS_AS(piecewise_glue({GluePiece{0.0, true, rotation(0.2)},
                                    GluePiece{0.5, true, rotation(0.7)}}),
                    ConstructionError);
  }
}

TEST_CASE("geometric gap lengths") {
  auto lens = geometric_lengths(20);
  REQUIRE(lens.size() == 20);
  CHECK(lens[0] == doctest::Approx(0.05));
  CHECK(lens[1] == doctest::Approx(0.025));
  double total = 0.0;
  for (double l : lens) total += l;
  CHECK(total == doctest::Approx(0.09999990463256836).epsilon(1e-12));
}

TEST_CASE("denjoy blow-up of a rotation") {
  const double alpha = std::sqrt(2.0) - 1.0;
  Ifs base({rotation(alpha)});

  SUBCASE("depth zero returns the original system") {
    auto blown = denjoy_blowup(base, 0.1, {}, 0);
    CHECK(blown.system.maps[0].kind() == "rotation");
    CHECK(blown.projection.apply(0.37) == doctest::Approx(0.37));
  }

  auto blown = denjoy_blowup(base, 0.1, geometric_lengths(12), 12);
  const auto& F = blown.system.maps[0];
  const auto& proj = blown.projection;

  SUBCASE("blown map is a homeomorphism") { check_homeo_grid(F); }

  SUBCASE("projection semiconjugates the new map to the old one") {
    auto old = base.maps[0];
    for (int i = 0; i < 512; ++i) {
      double y = i / 512.0 + 0.0007;
      REQUIRE(std::abs(circle_delta(proj.apply(F.apply(y)),
                                    old.apply(proj.apply(y)))) < 1e-6);
    }
  }

  SUBCASE("gaps map onto gaps along the orbit") {
    const auto& chart = proj.chart();
    REQUIRE(static_cast<int>(chart.points.size()) == 12);
    // the seed's gap must land exactly on the gap of seed + alpha
    int j = chart.point_index(0.1);
    int ij = chart.point_index(wrap(0.1 + alpha));
    REQUIRE(j >= 0);
    REQUIRE(ij >= 0);
    double left_j = chart.new_left[j];
    double left_ij = chart.new_left[ij];
    CHECK(F.apply(left_j) == doctest::Approx(left_ij).epsilon(1e-9));
    CHECK(F.apply(wrap(left_j + chart.lengths[j])) ==
          doctest::Approx(left_ij + chart.lengths[ij]).epsilon(1e-9));
    // affine inside: midpoint goes to midpoint
    CHECK(F.apply(left_j + chart.lengths[j] / 2) ==
          doctest::Approx(left_ij + chart.lengths[ij] / 2).epsilon(1e-9));
  }

  SUBCASE("projection is monotone and degree one") {
    double prev = proj.lift(0.0);
    for (int i = 1; i <= 1024; ++i) {
      double v = proj.lift(i / 1024.0);
      REQUIRE(v >= prev);
      prev = v;
    }
    CHECK(proj.lift(1.0) - proj.lift(0.0) == doctest::Approx(1.0));
  }

  SUBCASE("chart bookkeeping") {
    const auto& chart = proj.chart();
    double total = 0.0;
    for (double l : chart.lengths) total += l;
    CHECK(chart.total == doctest::Approx(total));
    // nu and pi invert each other off the gaps
    for (double x : {0.03, 0.22, 0.61, 0.94}) {
      if (chart.point_index(x, 1e-6) >= 0) continue;
      REQUIRE(chart.pi(chart.nu(x)) == doctest::Approx(x).epsilon(1e-12));
    }
  }
}

TEST_CASE("denjoy blow-up input validation") {
  Ifs base({rotation(0.3)});
  CHECK_THROWS_AS(denjoy_blowup(base, 0.0, {0.5, 0.6}, 2), ConstructionError);
  CHECK_THROWS_AS(denjoy_blowup(base, 0.0, {0.1}, 5), ConstructionError);
  // rational rotation: orbit has only 10 points, depth 11 is impossible
  Ifs rat({rotation(0.1)});
  std::vector<double> lens(11, 0.001);
  CHECK_THROWS_AS(denjoy_blowup(rat, 0.0, lens, 11), ConstructionError);
}

TEST_CASE("two-seed blow-up interleaves both orbits") {
  const double alpha = 1.0 / std::sqrt(5.0);
  Ifs base({rotation(alpha)});
  auto blown = denjoy_blowup_multi(base, {CirclePoint(0.1), CirclePoint(0.37)},
                                   geometric_lengths(10), 10);
  const auto& chart = blown.projection.chart();
  CHECK(chart.point_index(0.1) >= 0);
  CHECK(chart.point_index(0.37) >= 0);
  CHECK(chart.point_index(wrap(0.1 + alpha)) >= 0);
  CHECK(chart.point_index(wrap(0.37 + alpha)) >= 0);
  CHECK(chart.point_index(wrap(0.1 - alpha)) >= 0);
  CHECK(chart.point_index(wrap(0.37 - alpha)) >= 0);
  check_homeo_grid(blown.system.maps[0]);
}
