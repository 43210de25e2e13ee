#include <cmath>
#include <random>

#include <doctest.h>

#include "conetime/cone_surface.hpp"
#include "conetime/documents.hpp"
#include "conetime/errors.hpp"
#include "conetime/numeric.hpp"
#include "fixtures.hpp"

using namespace conetime;

namespace {

ErrorCode build_error(const char* text) {
  try {
    build_surface(parse_surface(text));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("surface unexpectedly valid");
  return ErrorCode::Io;
}

double curvature_sum(const ConeSurface& s) {
  double sum = 0.0;
  for (const VertexId v : s.cone_points()) sum += kTwoPi - s.cone_angle(v);
  return sum;
}

}  // namespace

TEST_CASE("doubled equilateral triangle is a sphere with three cones of angle 2pi/3") {
  const ConeSurface s = fixtures::surface("doubled_triangle.surface");
  CHECK(s.euler_characteristic() == 2);
  REQUIRE(s.cone_points().size() == 3);
  for (const VertexId v : s.cone_points()) CHECK(s.cone_angle(v) == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(curvature_sum(s) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
}

TEST_CASE("pillowcase has four cones of angle pi") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  CHECK(s.euler_characteristic() == 2);
  REQUIRE(s.cone_points().size() == 4);
  const char* expected[] = {"p1", "p2", "p3", "p4"};
  for (std::size_t i = 0; i < 4; ++i) {
    const VertexId v = s.cone_points()[i];
    CHECK(s.vertex(v).label == expected[i]);
    CHECK(s.cone_angle(v) == doctest::Approx(kPi).epsilon(1e-15));
  }
  CHECK(s.area() == doctest::Approx(2.0));
}

TEST_CASE("flat torus has no cone points and a regular interior vertex after refinement") {
  const ConeSurface s = fixtures::surface("torus.surface");
  CHECK(s.euler_characteristic() == 0);
  CHECK(s.cone_points().empty());
  std::mt19937_64 rng(3);
  const ConeSurface r = build_surface(fixtures::refine(fixtures::spec("torus.surface"), rng, 3));
  CHECK(r.cone_points().empty());
  for (int v = 0; v < r.vertex_count(); ++v) {
    CHECK(r.cone_angle(VertexId{v}) == doctest::Approx(kTwoPi).epsilon(1e-12));
  }
}

TEST_CASE("build rejects malformed gluings") {
  CHECK(build_error("CONETIME-SURFACE v1\ntriangle 0 0 0 1 0 0 1\ntriangle 1 0 0 2 0 0 2\n"
                    "glue 0 0 1 0\nglue 0 1 1 1\nglue 0 2 1 2\n") == ErrorCode::MismatchedEdgeLength);
  CHECK(build_error("CONETIME-SURFACE v1\ntriangle 0 0 0 1 0 1 1\ntriangle 1 0 0 1 1 0 1\n"
                    "glue 0 2 1 0\n") == ErrorCode::UnpairedEdge);
  CHECK(build_error("CONETIME-SURFACE v1\ntriangle 0 0 0 1 0 1 1\ntriangle 1 0 0 1 1 0 1\n"
                    "glue 0 2 1 0\nglue 0 2 1 1\n") == ErrorCode::DuplicateGluing);
  CHECK(build_error("CONETIME-SURFACE v1\ntriangle 0 0 0 1 0 2 0\n") == ErrorCode::DegenerateTriangle);
  CHECK(build_error("CONETIME-SURFACE v1\ntriangle 0 0 0 0 1 1 0\n") == ErrorCode::InconsistentOrientation);
}

TEST_CASE("mismatched fixture names the offending gluing line") {
  try {
    fixtures::surface("mismatched.surface");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MismatchedEdgeLength);
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
}

TEST_CASE("cone angle of an unknown vertex") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  CHECK_THROWS_AS(s.cone_angle(VertexId{99}), Error);
}

TEST_CASE("saddle distances on the fixtures") {
  const ConeSurface p = fixtures::surface("pillowcase.surface");
  const auto c = [&](const char* l) { return fixtures::cone(p, l); };
  // Unit square corners: adjacent corners at distance 1, opposite ones at sqrt 2.
  CHECK(saddle_distance(p, c("p1"), c("p2")) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(saddle_distance(p, c("p2"), c("p3")) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(saddle_distance(p, c("p1"), c("p4")) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(saddle_distance(p, c("p1"), c("p3")) == doctest::Approx(1.0).epsilon(1e-12));

  const ConeSurface t = fixtures::surface("doubled_triangle.surface");
  for (const VertexId a : t.cone_points()) {
    for (const VertexId b : t.cone_points()) {
      if (a == b) continue;
      CHECK(saddle_distance(t, a, b) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(saddle_distance(t, a, b) == saddle_distance(t, b, a));
    }
  }
}

TEST_CASE("injectivity radii") {
  const ConeSurface t = fixtures::surface("doubled_triangle.surface");
  // The shortest self connection crosses the opposite side at its midpoint:
  // twice the altitude, sqrt 3, beats the unit distance to the other cones.
  for (const VertexId v : t.cone_points()) {
    const RadiusBound r = injectivity_radius_at_cone(t, v);
    CHECK_FALSE(r.unbounded);
    CHECK(r.value == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  }
  const ConeSurface p = fixtures::surface("pillowcase.surface");
  for (const VertexId v : p.cone_points()) {
    CHECK(injectivity_radius_at_cone(p, v).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(injectivity_radius_at_cone(ConePlane{kPi / 3.0}).unbounded);
}

TEST_CASE("disk embedding") {
  const ConeSurface t = fixtures::surface("doubled_triangle.surface");
  const VertexId a = t.cone_points()[0];
  CHECK(disk_embedded(t, a, 0.0));
  CHECK(disk_embedded(t, a, std::sqrt(3.0) / 2.0 - 1e-6));
  CHECK_FALSE(disk_embedded(t, a, std::sqrt(3.0) / 2.0));
  const ConeSurface p = fixtures::surface("pillowcase.surface");
  CHECK_FALSE(disk_embedded(p, p.cone_points()[0], 10.0));
}

TEST_CASE("search budget exhaustion is reported") {
  const ConeSurface p = fixtures::surface("pillowcase.surface");
  CHECK_THROWS_AS(injectivity_radius_at_cone(p, p.cone_points()[0], 2), Error);
  try {
    saddle_distance(p, p.cone_points()[1], p.cone_points()[2], 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SearchBudgetExceeded);
  }
}

TEST_CASE("Gauss-Bonnet and refinement invariance on random refinements") {
  std::mt19937_64 rng(20240611);
  for (const char* name : {"pillowcase.surface", "doubled_triangle.surface", "spindle.surface"}) {
    const ConeSurface base = fixtures::surface(name);
    for (int trial = 0; trial < 5; ++trial) {
      CAPTURE(name);
      CAPTURE(trial);
      const ConeSurface r = build_surface(fixtures::refine(fixtures::spec(name), rng, 2 + trial));
      CHECK(std::abs(kTwoPi * r.euler_characteristic() - curvature_sum(r)) < Tolerances::gauss_bonnet);
      CHECK(r.euler_characteristic() == base.euler_characteristic());
      REQUIRE(r.cone_points().size() == base.cone_points().size());
      const double tol = 1e-9 * base.longest_edge();
      for (std::size_t i = 0; i < base.cone_points().size(); ++i) {
        const VertexId a = base.cone_points()[i];
        const VertexId ra = r.cone_points()[i];
        CHECK(r.vertex(ra).label == base.vertex(a).label);
        CHECK(std::abs(r.cone_angle(ra) - base.cone_angle(a)) < Tolerances::angle);
        CHECK(std::abs(injectivity_radius_at_cone(r, ra).value - injectivity_radius_at_cone(base, a).value) < tol);
        for (std::size_t j = i + 1; j < base.cone_points().size(); ++j) {
          CHECK(std::abs(saddle_distance(r, ra, r.cone_points()[j]) -
                         saddle_distance(base, a, base.cone_points()[j])) < tol);
        }
      }
    }
  }
}

TEST_CASE("every vertex class has positive angle") {
  std::mt19937_64 rng(5);
  const ConeSurface r = build_surface(fixtures::refine(fixtures::spec("pillowcase.surface"), rng, 6));
  for (int v = 0; v < r.vertex_count(); ++v) CHECK(r.cone_angle(VertexId{v}) > 0.0);
}

TEST_CASE("cone distances from a regular point") {
  const ConeSurface p = fixtures::surface("pillowcase.surface");
  const SurfacePoint x{0, {0.6, 0.3}};
  const auto d = cone_distances(p, x, 5.0, kDefaultSearchBudget);
  // Straight segments to the square corners in the front chart.
  CHECK(d[fixtures::cone(p, "p1").value] == doctest::Approx(std::hypot(0.6, 0.3)).epsilon(1e-12));
  CHECK(d[fixtures::cone(p, "p2").value] == doctest::Approx(std::hypot(0.4, 0.3)).epsilon(1e-12));
  CHECK(d[fixtures::cone(p, "p3").value] == doctest::Approx(std::hypot(0.6, 0.7)).epsilon(1e-12));
  CHECK(d[fixtures::cone(p, "p4").value] == doctest::Approx(std::hypot(0.4, 0.7)).epsilon(1e-12));
  CHECK_FALSE(distance_to_cone(p, x, fixtures::cone(p, "p1"), 0.1, kDefaultSearchBudget).has_value());
}
