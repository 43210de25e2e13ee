#include <string>

#include <doctest.h>

#include "conetime/documents.hpp"
#include "conetime/errors.hpp"
#include "fixtures.hpp"

using namespace conetime;

namespace {

std::string error_text(auto&& f, ErrorCode expected) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == expected);
    return e.what();
  }
  FAIL("no error raised");
  return {};
}

}  // namespace

TEST_CASE("surface parse errors carry line numbers") {
  CHECK(error_text([] { parse_surface("CONETIME-SURFACE v2\n"); }, ErrorCode::Parse).find("line 1") !=
        std::string::npos);
  CHECK(error_text([] { parse_surface("CONETIME-SURFACE v1\n# c\ntriangle 0 0 0 1 0\n"); }, ErrorCode::Parse)
            .find("line 3") != std::string::npos);
  CHECK(error_text([] { parse_surface("CONETIME-SURFACE v1\nbogus 1\n"); }, ErrorCode::Parse).find("line 2") !=
        std::string::npos);
  CHECK(error_text([] { parse_surface("CONETIME-SURFACE v1\ntriangle 0 0 0 1 0 0 x\n"); }, ErrorCode::Parse)
            .find("bad number") != std::string::npos);
}

TEST_CASE("missing files are I/O errors") {
  CHECK(error_text([] { read_surface(fixtures::data_path("absent.surface")); }, ErrorCode::Io).find("absent") !=
        std::string::npos);
}

TEST_CASE("written surfaces parse back to the same surface") {
  const SurfaceSpec a = fixtures::spec("doubled_triangle.surface");
  const std::string text = write_surface(a);
  const SurfaceSpec b = parse_surface(text);
  REQUIRE(a.triangles.size() == b.triangles.size());
  for (std::size_t i = 0; i < a.triangles.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      CHECK(a.triangles[i].v[k].x == b.triangles[i].v[k].x);
      CHECK(a.triangles[i].v[k].y == b.triangles[i].v[k].y);
    }
  }
  CHECK(write_surface(b) == text);
}

TEST_CASE("cochain documents round-trip bit-exactly") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  const EdgeCochain w = omega_cochain(s, read_omega(fixtures::data_path("pillowcase_small.omega")));
  const std::string text = write_omega(w);
  const EdgeCochain back = omega_cochain(s, parse_omega(text));
  CHECK(back.jumps() == w.jumps());
  CHECK(write_omega(back) == text);
}

TEST_CASE("cochain document validation") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  error_text([&] { omega_cochain(s, parse_omega("CONETIME-OMEGA v1\nresidue nobody 1\n")); }, ErrorCode::UnknownVertex);
  error_text([&] { omega_cochain(s, parse_omega("CONETIME-OMEGA v1\nresidue p1 1\n")); }, ErrorCode::ResidueSumNonzero);
  const ConeSurface t = fixtures::surface("doubled_triangle.surface");
  error_text([&] { omega_cochain(t, read_omega(fixtures::data_path("sphere_bad.omega"))); },
             ErrorCode::ResidueSumNonzero);
  // Unlisted cones default to zero.
  const EdgeCochain w = omega_cochain(s, parse_omega("CONETIME-OMEGA v1\nresidue p1 0.5\nresidue p3 -0.5\n"));
  CHECK(w.residue(fixtures::cone(s, "p2")) == 0.0);
}

TEST_CASE("waypoint and leg documents") {
  const ConeSurface s = fixtures::surface("spindle.surface");
  const auto w = parse_waypoints(s, read_text_file(fixtures::data_path("hexagon_r2.waypoints")));
  CHECK(w.size() == 7);
  CHECK(s.same_point(w.front(), w.back()));
  const auto legs = parse_legs(s, read_text_file(fixtures::data_path("hexagon_r2.legs")));
  REQUIRE(legs.size() == 6);
  for (const auto& l : legs) CHECK(norm(l.direction) == doctest::Approx(1.0).epsilon(1e-15));
  error_text([&] { parse_waypoints(s, "CONETIME-WAYPOINTS v1\nwaypoint 7 0.1 0.1\n"); }, ErrorCode::Parse);
  error_text([&] { parse_legs(s, "CONETIME-LEGS v1\nleg 0 1 0.1 0 0 1\n"); }, ErrorCode::Parse);
}
