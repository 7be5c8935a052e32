#include <cmath>

#include "doctest.h"
#include "ifslab/families.hpp"
#include "ifslab/minimality.hpp"

using namespace ifslab;

namespace {

Ifs minimal_example() {
  return Ifs{{rotation(std::sqrt(2.0) - 1.0),
              north_south(CirclePoint(0.0), CirclePoint(0.5), 100.0)},
             {}};
}

Ifs single_ns() {
  return Ifs{{north_south(CirclePoint(0.0), CirclePoint(0.5), 100.0)}, {}};
}

MinimalSetOptions fast_orbit() {
  MinimalSetOptions opt;
  opt.orbit_steps = 60000;
  opt.burn_in = 1000;
  return opt;
}

}  // namespace

TEST_CASE("orbit estimate of a single north-south pins the two fixed points") {
  auto fwd = minimal_set_estimate(single_ns(), Direction::kForward, 1.0 / 512.0,
                                  0, fast_orbit());
  REQUIRE(fwd.cover.has_value());
  CHECK_FALSE(fwd.full_circle);
  CHECK(fwd.cover->contains(0.0, 1e-9));
  CHECK(fwd.cover->total_length() <= 4.0 / 512.0);
  CHECK(fwd.method == "orbit");

  auto bwd = minimal_set_estimate(single_ns(), Direction::kBackward, 1.0 / 512.0,
                                  0, fast_orbit());
  REQUIRE(bwd.cover.has_value());
  CHECK(bwd.cover->contains(0.5, 1e-9));
  CHECK(bwd.cover->total_length() <= 4.0 / 512.0);
}

TEST_CASE("orbit estimate spreads over the circle for the contracting pair") {
  // Cells reachable only through long chains of consecutive rotations carry
  // doubly exponentially small stationary mass, so a sampled orbit does not
  // saturate every cell in bounded time. It must still pick up the attractor
  // and its first rotated images, and most of the circle by length.
  auto opt = fast_orbit();
  opt.orbit_steps = 150000;
  double alpha = std::sqrt(2.0) - 1.0;
  for (auto dir : {Direction::kForward, Direction::kBackward}) {
    auto est = minimal_set_estimate(minimal_example(), dir, 1.0 / 256.0, 0, opt);
    CHECK_FALSE(est.empty);
    bool forward = dir == Direction::kForward;
    double anchor = forward ? 0.0 : 0.5;
    double step = forward ? alpha : -alpha;
    if (est.full_circle) continue;
    REQUIRE(est.cover.has_value());
    CHECK(est.cover->contains(anchor, 1e-9));
    CHECK(est.cover->contains(wrap(anchor + step), 1e-9));
    CHECK(est.cover->contains(wrap(anchor + 2.0 * step), 1e-9));
    CHECK(est.cover->total_length() > 0.5);
  }
}

TEST_CASE("closure estimate also keeps the attractor cell") {
  MinimalSetOptions opt;
  opt.method = "closure";
  auto est = minimal_set_estimate(single_ns(), Direction::kForward, 1.0 / 256.0,
                                  4000, opt);
  CHECK(est.method == "closure");
  CHECK_FALSE(est.full_circle);
  REQUIRE(est.cover.has_value());
  CHECK(est.cover->contains(0.0, 1e-9));
}

TEST_CASE("closure estimate saturates when a rotation is present") {
  MinimalSetOptions opt;
  opt.method = "closure";
  opt.seeds = 2;
  auto est = minimal_set_estimate(minimal_example(), Direction::kForward,
                                  1.0 / 256.0, 4000, opt);
  CHECK(est.full_circle);
}

TEST_CASE("essential intersection of two full covers is the origin") {
  MinimalSetEstimate full;
  full.full_circle = true;
  auto pts = essential_intersection(full, full, 1.0 / 1024.0);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].x == doctest::Approx(0.0));
}

TEST_CASE("essential intersection is empty for split covers") {
  MinimalSetEstimate a, b;
  a.cover = domain_normalize({Arc{0.1, 0.05}});
  b.cover = domain_normalize({Arc{0.7, 0.05}});
  CHECK(essential_intersection(a, b, 1.0 / 1024.0).empty());
}

TEST_CASE("essential intersection flags a shared one-sided accumulation") {
  double r = 1.0 / 1024.0;
  MinimalSetEstimate a, b;
  a.cover = domain_normalize({Arc{0.29, 0.011}});
  b.cover = domain_normalize({Arc{0.301, 0.009}});
  auto pts = essential_intersection(a, b, r);
  REQUIRE(pts.size() == 1);
  CHECK(circle_dist(pts[0].x, 0.301) <= 8.0 * r);
}

TEST_CASE("essential intersection against a full cover marks component middles") {
  double r = 1.0 / 1024.0;
  MinimalSetEstimate full, part;
  full.full_circle = true;
  part.cover = domain_normalize({Arc{0.2, 0.1}});
  auto pts = essential_intersection(full, part, r);
  REQUIRE(pts.size() == 1);
  CHECK(circle_dist(pts[0].x, 0.25) <= 2.0 * r);
}

TEST_CASE("hutchinson certificate needs at least one covering word") {
  auto cert = hutchinson_certificate(minimal_example(), Arc{0.55, 0.9},
                                     Arc{0.6, 0.8}, {});
  CHECK_FALSE(cert.valid);
  CHECK(cert.failure_reason.substr(0, 8) == "covering");
}

TEST_CASE("hutchinson certificate rejects a domain holding the repeller") {
  Ifs F = single_ns();
  Arc I{0.4, 0.2};  // spans the repeller at one half
  Arc J{0.45, 0.1};
  auto cert = hutchinson_certificate(F, I, J, {Word("1", 1)});
  CHECK_FALSE(cert.valid);
  CHECK(cert.failure_reason.substr(0, 11) == "contraction");
  CHECK(circle_dist(cert.witness, 0.5) < 0.05);
  REQUIRE(cert.contraction_factors.size() == 1);
  CHECK(cert.contraction_factors[0] > 1.0);
}

TEST_CASE("hutchinson certificate validates the rotation-assisted family") {
  auto F = minimal_example();
  auto report = robust_minimality_check(F, 1, 2);
  REQUIRE(report.certified);
  CHECK(report.status == "certified");
  CHECK(report.eta == doctest::Approx(0.034).epsilon(1e-12));
  CHECK(report.core_eta == doctest::Approx(0.094).epsilon(1e-12));
  CHECK(circle_dist(report.attractor, 0.0) < 1e-9);
  CHECK(circle_dist(report.repeller, 0.5) < 1e-9);
  CHECK(report.attractor_slope == doctest::Approx(0.01).epsilon(1e-3));

  const auto& cert = report.certificate;
  REQUIRE(cert.valid);
  CHECK(cert.covering_margin > 0.0);
  CHECK(cert.invariance_clearance > 0.0);
  for (double c : cert.contraction_factors) {
    CHECK(c < 0.8722348916 + 1e-6);
    CHECK(c < 1.0);
  }
  // The covering arcs are rotated copies of the image of the core arc, whose
  // length is pinned by the north-south profile.
  const CircleMap& f = F.at(2);
  double klen = f.lift(cert.core.left + cert.core.length) - f.lift(cert.core.left);
  CHECK(klen == doctest::Approx(0.0209198248921796).epsilon(1e-9));
  CHECK(report.circle_cover_margin > 0.1);
  CHECK(report.inverse_cover_margin > 0.1);
  for (int e : report.rotation_exponents) {
    CHECK(e >= 0);
    CHECK(e <= 160);
  }
}

TEST_CASE("hutchinson certificate survives a small common translation") {
  auto F = minimal_example();
  auto report = robust_minimality_check(F, 1, 2);
  REQUIRE(report.certified);
  for (double delta : {1e-4, -1e-4}) {
    auto moved = hutchinson_certificate(translate_ifs(F, delta),
                                        report.certificate.domain,
                                        report.certificate.core,
                                        report.certificate.words);
    CHECK(moved.valid);
  }
}

TEST_CASE("robust minimality rejects rational rotations") {
  Ifs F{{rotation(0.5), north_south(CirclePoint(0.0), CirclePoint(0.5), 100.0)},
        {}};
  auto report = robust_minimality_check(F, 1, 2);
  CHECK_FALSE(report.certified);
  CHECK(report.status.find("close to") != std::string::npos);
}

TEST_CASE("robust minimality needs a genuinely attracting fixed point") {
  Ifs F{{rotation(std::sqrt(2.0) - 1.0),
         north_south(CirclePoint(0.0), CirclePoint(0.5), 1.02)},
        {}};
  auto report = robust_minimality_check(F, 1, 2);
  CHECK_FALSE(report.certified);
}
