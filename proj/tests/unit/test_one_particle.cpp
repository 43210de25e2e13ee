#include <cmath>
#include <random>

#include <doctest.h>

#include "conetime/errors.hpp"
#include "conetime/numeric.hpp"
#include "conetime/one_particle.hpp"
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

}  // namespace

TEST_CASE("model radii") {
  const ParticleModel m(kPi / 3.0, 1.0);
  CHECK(m.r0() == 1.0 / (kPi / 3.0));
  CHECK(m.rc() == 0.5 * kPi * std::abs(m.r0()));
  CHECK(m.mass() == kTwoPi - kPi / 3.0);
  CHECK(ParticleModel(3.0 * kPi, -1.0).mass() < 0.0);
  CHECK(error_of([] { ParticleModel(0.0, 1.0); }) == ErrorCode::AngleOutOfRange);
}

TEST_CASE("adapted coordinates") {
  const ParticleModel flat(kTwoPi, 0.0);
  const AdaptedCoords a = to_adapted_coords(flat, PolarEvent{2.0, 1.0, 0.5});
  CHECK(a.alpha == doctest::Approx(1.0));
  CHECK(a.tau == doctest::Approx(kTwoPi * 0.5));

  const ParticleModel m(1.3, 0.4);
  const AdaptedCoords b = to_adapted_coords(m, PolarEvent{1.0, 1.3, 1.0});
  CHECK(b.tau == doctest::Approx(1.3 - 0.4 * 1.3));
  CHECK(b.full_alpha() == doctest::Approx(kTwoPi));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const PolarEvent e{std::abs(u(rng)) + 0.1, u(rng), u(rng)};
    const PolarEvent back = from_adapted_coords(m, to_adapted_coords(m, e));
    CHECK(std::abs(back.theta - e.theta) < 1e-12 * 10.0);
    CHECK(std::abs(back.t - e.t) < 1e-12 * 10.0);
    CHECK(back.r == e.r);
  }
  CHECK(error_of([&] { to_adapted_coords(m, PolarEvent{0.0, 0.0, 0.0}); }) == ErrorCode::NonpositiveRadius);
}

TEST_CASE("metric values and regions") {
  const ParticleModel m(kPi / 3.0, 1.0);
  const double r0 = std::abs(m.r0());
  CHECK(metric_value(m, AdaptedCoords{2.0, 0.3, 0.1, 0}, AdaptedTangent{1.0, 0.0, 0.0}) == 1.0);
  CHECK(std::abs(metric_value(m, AdaptedCoords{r0, 0.0, 0.0, 0}, AdaptedTangent{0.0, 1.0, 0.0})) < 1e-15);
  const double inside = metric_value(m, AdaptedCoords{r0 / 2.0, 0.0, 0.0, 0}, AdaptedTangent{0.0, 1.0, 0.0});
  const double k = m.theta0() / kTwoPi;
  CHECK(inside == doctest::Approx(k * k * (r0 * r0 / 4.0 - r0 * r0)));
  CHECK(inside < 0.0);

  CHECK(classify_region(ParticleModel(1.0, 0.0), 0.01) == Region::Interior);
  const ParticleModel h(kPi, kPi / 2.0);
  CHECK(classify_region(h, 0.25) == Region::CtcRegion);
  CHECK(classify_region(h, 0.5) == Region::CtcSurface);
  CHECK(classify_region(h, 0.75) == Region::Interior);

  for (double r = 0.05; r < 3.0; r += 0.0137) {
    const double g = metric_value(m, AdaptedCoords{r, 0.0, 0.0, 0}, AdaptedTangent{0.0, 1.0, 0.0});
    const Region expect = std::abs(g) < 1e-12 ? Region::CtcSurface : (g < 0.0 ? Region::CtcRegion : Region::Interior);
    CHECK(classify_region(m, r) == expect);
  }
}

TEST_CASE("developing isometries form a group") {
  const ParticleModel m(0.7, 0.2);
  const EllipticIsometry id = develop(m, 0);
  const PolarEvent e{1.5, 0.0, 0.0};
  CHECK(id(e).theta == 0.0);
  CHECK(id(e).t == 0.0);
  const PolarEvent one = develop(m, 1)(e);
  CHECK(one.r == 1.5);
  CHECK(one.theta == 0.7);
  CHECK(one.t == 0.2);
  CHECK(develop(m, 2) == develop(m, 1) * develop(m, 1));
  CHECK(develop(m, -3) * develop(m, 5) == develop(m, 2));
}

TEST_CASE("angle syntax and finite quotients") {
  const auto half = parse_angle("pi/2");
  REQUIRE(half);
  CHECK(is_finite_quotient(*half));
  CHECK(angle_value(*half) == kPi / 2.0);
  CHECK(angle_value(*parse_angle("2/3pi")) == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-15));
  CHECK(is_finite_quotient(*parse_angle("3pi")));
  CHECK_FALSE(is_finite_quotient(*parse_angle("irrational:sqrt(2)")));
  CHECK(angle_value(*parse_angle("irrational:sqrt(2)")) == doctest::Approx(std::sqrt(2.0) * kPi));
  CHECK(error_of([] { is_finite_quotient(*parse_angle("1.5707963")); }) == ErrorCode::InexactAngle);
  CHECK_FALSE(parse_angle("pi/x"));
}

TEST_CASE("admissible windings") {
  CHECK(admissible_windings(ParticleModel(kPi / 3.0, 1.0)) == std::vector<int>{-2, -1, 1, 2});
  CHECK(admissible_windings(ParticleModel(kPi, 1.0)).empty());
  CHECK(admissible_windings(ParticleModel(kPi / 2.0, 1.0)) == std::vector<int>{-1, 1});
  CHECK(admissible_windings(ParticleModel(3.0 * kPi, 1.0)).empty());
}

TEST_CASE("return times") {
  const ParticleModel still(kPi / 3.0, 0.0);
  const ObserverLine obs{1.0, 0.0};
  // Chord across the unrolled wedge: 2 d sin(m theta0 / 2).
  CHECK(return_time(still, obs, 0.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(return_time(still, obs, 0.0, 2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  const ParticleModel spin(kPi / 3.0, 1.0);
  CHECK(std::abs(return_time(spin, obs, 0.0, -1)) < 1e-15);
  CHECK(error_of([&] { return_time(spin, obs, 0.0, 3); }) == ErrorCode::InadmissibleWinding);
  CHECK(error_of([&] { return_time(spin, ObserverLine{0.0, 0.0}, 0.0, 1); }) == ErrorCode::DegenerateGeometry);
}

TEST_CASE("return directions and thresholds") {
  const ParticleModel m(kPi / 3.0, 1.0);
  CHECK(return_direction(m, 1) == doctest::Approx(kPi / 3.0).epsilon(1e-15));
  CHECK(return_direction(m, -1) == -return_direction(m, 1));
  CHECK(return_direction(ParticleModel(kPi - 1e-6, 0.0), 1) == doctest::Approx(0.5e-6).epsilon(1e-6));
  CHECK(positivity_threshold(m, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(positivity_threshold(m, 2) == doctest::Approx(1.0 / std::sin(kPi / 3.0)).epsilon(1e-15));
  CHECK(positivity_threshold(ParticleModel(kPi / 3.0, 0.0), 2) == 0.0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> th(0.05, 3.1), sg(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const ParticleModel p(th(rng), sg(rng));
    double prev = 0.0;
    for (const int w : admissible_windings(p)) {
      if (w < 0) continue;
      const double thr = positivity_threshold(p, w);
      CHECK(thr >= prev);
      CHECK(thr <= p.rc() * (1.0 + 1e-12));
      prev = thr;
    }
  }
}

TEST_CASE("return events satisfy the null condition") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> th(0.05, 3.1), sg(-2.0, 2.0), d(0.1, 10.0), v(-2.0, 2.0), t(-5.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const ParticleModel p(th(rng), sg(rng));
    const auto ms = admissible_windings(p);
    if (ms.empty()) continue;
    const int m = ms[rng() % ms.size()];
    const ObserverLine obs{d(rng), v(rng)};
    const double tt = t(rng);
    const double delta = return_time(p, obs, tt, m);
    CHECK(std::abs(relative_null_interval(return_events(p, obs, tt, m, delta))) < Tolerances::null_interval);
    CHECK(std::abs(fixtures::null_residual_oracle(p.theta0(), p.sigma(), obs.d, obs.rapidity, tt, m, delta)) <
          Tolerances::null_interval);
  }
}

TEST_CASE("parameter inference") {
  const InferredParameters p = infer_parameters(2.3, 1.7, 2.0 * kPi / 3.0);
  CHECK(p.theta0 == doctest::Approx(kPi / 3.0).epsilon(1e-12));
  CHECK(p.sigma == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(p.d == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(infer_parameters(1.5, 1.5, 1.0).sigma == 0.0);
  CHECK(error_of([] { infer_parameters(1.0, -1.0, 1.0); }) == ErrorCode::DegenerateGeometry);
  CHECK(error_of([] { infer_parameters(1.0, 1.0, kPi); }) == ErrorCode::DegenerateGeometry);
}
