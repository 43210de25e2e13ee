#include <cmath>
#include <random>

#include <doctest.h>

#include "conetime/errors.hpp"
#include "conetime/geodesics.hpp"
#include "conetime/numeric.hpp"
#include "conetime/one_form.hpp"
#include "fixtures.hpp"

using namespace conetime;

namespace {

ErrorCode error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

/// Each exit, carried through the crossed edge's gluing, lands on the next entry.
void check_transitions(const ConeSurface& s, const TracedGeodesic& g) {
  const double tol = s.eps_len();
  for (std::size_t i = 0; i + 1 < g.segments.size(); ++i) {
    const Segment& a = g.segments[i];
    const Segment& b = g.segments[i + 1];
    const Vec2 da = normalized(a.exit - a.entry);
    const Vec2 db = normalized(b.exit - b.entry);
    if (a.exit_slot >= 0) {
      const RigidMotion& m = s.crossing_motion(EdgeRef{a.tri, a.exit_slot});
      CHECK(s.neighbor(EdgeRef{a.tri, a.exit_slot}).tri == b.tri);
      CHECK(distance(m(a.exit), b.entry) < tol);
      CHECK(std::abs(signed_angle(m.rotate(da), db)) < 1e-9);
    } else {
      // Passage through a regular vertex: same point on the surface.
      CHECK(s.same_point(SurfacePoint{a.tri, a.exit}, SurfacePoint{b.tri, b.entry}));
    }
  }
}

double polyline_length(const TracedGeodesic& g) {
  CompensatedSum sum;
  for (const Segment& seg : g.segments) sum += seg.length();
  return sum.value();
}

}  // namespace

TEST_CASE("axis-aligned torus geodesic closes after length 1") {
  const ConeSurface s = fixtures::surface("torus.surface");
  const TracedGeodesic g = trace(s, DirectionState{0, {0.6, 0.3}, {1.0, 0.0}}, 5.0);
  CHECK(g.reason == Termination::LoopClosure);
  CHECK(g.length == doctest::Approx(1.0).epsilon(1e-12));
  check_transitions(s, g);
}

TEST_CASE("generic pillowcase geodesic keeps its length and chart transitions") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int i = 0; i < 50; ++i) {
    const double a = ang(rng);
    const TracedGeodesic g = trace(s, DirectionState{0, {0.61, 0.27}, {std::cos(a), std::sin(a)}}, 10.0);
    if (g.reason != Termination::LengthBudget) continue;
    CHECK(std::abs(g.length - 10.0) < s.eps_len());
    CHECK(std::abs(polyline_length(g) - 10.0) < 10 * s.eps_len());
    check_transitions(s, g);
  }
}

TEST_CASE("ray aimed at a corner stops there") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  const Vec2 from{0.6, 0.3};
  const Vec2 corner{1.0, 1.0};
  const TracedGeodesic g = trace(s, DirectionState{0, from, normalized(corner - from)}, 5.0);
  CHECK(g.reason == Termination::ConeHit);
  REQUIRE(g.hit_cone.has_value());
  CHECK(s.vertex(*g.hit_cone).label == "p4");
  CHECK(g.length == doctest::Approx(distance(from, corner)).epsilon(1e-12));
}

TEST_CASE("invalid starts are rejected") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  CHECK(error_of([&] { trace(s, DirectionState{0, {2.0, 2.0}, {1.0, 0.0}}, 1.0); }) == ErrorCode::InvalidStart);
  CHECK(error_of([&] { trace(s, DirectionState{0, {0.5, 0.2}, {2.0, 0.0}}, 1.0); }) == ErrorCode::InvalidStart);
  CHECK(error_of([&] { trace(s, DirectionState{0, {0.5, 0.2}, {1.0, 0.0}}, 0.0); }) == ErrorCode::InvalidStart);
  CHECK(error_of([&] { trace(s, DirectionState{0, {0.0, 0.0}, {1.0, 0.0}}, 1.0); }) == ErrorCode::InvalidStart);
}

TEST_CASE("tracing back from the end reproduces the polyline") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  const TracedGeodesic g = trace(s, DirectionState{0, {0.61, 0.27}, normalized(Vec2{0.83, 0.31})}, 6.0);
  REQUIRE(g.reason == Termination::LengthBudget);
  const TracedGeodesic back = trace(s, DirectionState{g.end.tri, g.end.p, -g.end.dir}, g.length);
  const TracedGeodesic rev = reversed(s, g);
  REQUIRE(back.segments.size() == rev.segments.size());
  for (std::size_t i = 0; i < rev.segments.size(); ++i) {
    CHECK(back.segments[i].tri == rev.segments[i].tri);
    CHECK(distance(back.segments[i].entry, rev.segments[i].entry) < 1e-9);
    CHECK(distance(back.segments[i].exit, rev.segments[i].exit) < 1e-9);
  }
  CHECK(crossing_word(rev) == reversed_word(s, crossing_word(g)));
}

TEST_CASE("single cone connections") {
  const PolarPoint a{1.0, 0.0};
  const ConeConnection c1 = single_cone_connection(kPi / 2.0, a, a, 1);
  CHECK(c1.exists);
  CHECK(c1.length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_FALSE(single_cone_connection(kPi / 2.0, a, a, 2).exists);
  CHECK_FALSE(single_cone_connection(3.0 * kPi / 2.0, a, a, 1).exists);
  CHECK(error_of([&] { single_cone_connection(1.0, PolarPoint{0.0, 0.0}, a, 0); }) == ErrorCode::NonpositiveRadius);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> theta(0.1, 3.0), r(0.1, 5.0), phi(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double th = theta(rng);
    const PolarPoint p{r(rng), phi(rng) * th};
    const PolarPoint q{r(rng), phi(rng) * th};
    for (int m = -3; m <= 3; ++m) {
      const ConeConnection c = single_cone_connection(th, p, q, m);
      const ConeConnection mirrored = single_cone_connection(th, PolarPoint{p.r, -p.phi}, PolarPoint{q.r, -q.phi}, -m);
      CHECK(c.exists == (std::abs(c.advance) < kPi));
      CHECK(c.exists == mirrored.exists);
      if (c.exists) {
        CHECK(c.length == doctest::Approx(fixtures::chord_oracle(p.r, q.r, c.advance)).epsilon(1e-12));
        CHECK(c.length == doctest::Approx(mirrored.length).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("chord in disk") {
  CHECK(chord_in_disk(1.0, kPi / 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(chord_in_disk(1.5, kPi / 3.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(chord_in_disk(1.0, 1e-8) < 1e-7);
  CHECK(error_of([] { chord_in_disk(1.0, kPi); }) == ErrorCode::AngleOutOfRange);
  double prev = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double a = kPi * i / 1000.0;
    const double c = chord_in_disk(2.0, a);
    CHECK(c > prev);
    CHECK(c < 2.0 * a);
    prev = c;
  }
}

TEST_CASE("torus loops up to length 1 are the two coordinate loops") {
  const ConeSurface s = fixtures::surface("torus.surface");
  const auto loops = loops_at(s, SurfacePoint{0, {0.6, 0.3}}, 1.0 + 1e-9);
  REQUIRE(loops.size() == 2);
  for (const auto& l : loops) {
    CHECK(l.length == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(l.holonomy) < 1e-9);
  }
  CHECK(loops[0].word != loops[1].word);
}

TEST_CASE("no loops below the systole") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  CHECK(loops_at(s, SurfacePoint{0, {0.6, 0.3}}, 0.01).empty());
}

TEST_CASE("loops at a cone of the doubled triangle") {
  const ConeSurface s = fixtures::surface("doubled_triangle.surface");
  const VertexId a = fixtures::cone(s, "a");
  const auto loops = loops_at(s, SurfacePoint{0, {0.0, 0.0}}, 2.5);
  const VertexId first = s.vertex_of(Corner{0, 0});
  CHECK(first == a);
  // One self connection: across the opposite side and back, length sqrt 3.
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].length == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("loops winding around a single cone obey k theta < pi") {
  const ConeSurface s = fixtures::surface("doubled_triangle.surface");
  const WindingCounter counter(s);
  const SurfacePoint base{0, {0.45, 0.3}};
  const auto loops = loops_at(s, base, 2.5);
  CHECK_FALSE(loops.empty());
  int isolated = 0;
  for (const auto& l : loops) {
    int encircled = 0;
    VertexId only{};
    int k = 0;
    for (const VertexId c : s.cone_points()) {
      const int w = counter.winding(l.path, c);
      if (w != 0) {
        ++encircled;
        only = c;
        k = w;
      }
    }
    if (encircled != 1) continue;
    ++isolated;
    CHECK(std::abs(k) * s.cone_angle(only) < kPi);
    // A loop encircling one cone once turns the direction by its curvature.
    CHECK(std::abs(std::abs(l.holonomy) - std::abs(std::remainder(kTwoPi - s.cone_angle(only), kTwoPi))) < 1e-9);
  }
  CHECK(isolated > 0);
}

TEST_CASE("loops are ordered by length and carry canonical words") {
  const ConeSurface s = fixtures::surface("pillowcase.surface");
  const auto loops = loops_at(s, SurfacePoint{0, {0.6, 0.3}}, 4.0);
  REQUIRE(loops.size() >= 2);
  for (std::size_t i = 0; i + 1 < loops.size(); ++i) CHECK(loops[i].length <= loops[i + 1].length + 1e-9);
  for (const auto& l : loops) {
    const auto rev = reversed_word(s, l.word);
    CHECK_FALSE(rev < l.word);
    CHECK(std::abs(l.path.length - l.length) < 1e-9);
  }
}

TEST_CASE("termination names") {
  CHECK(to_string(Termination::LengthBudget) == "length-budget");
  CHECK(to_string(Termination::ConeHit) == "cone-hit");
  CHECK(to_string(Termination::LoopClosure) == "loop-closure");
}
