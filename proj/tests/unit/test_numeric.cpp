#include <cmath>
#include <cstdlib>
#include <random>

#include <doctest.h>

#include "conetime/errors.hpp"
#include "conetime/numeric.hpp"

using namespace conetime;

TEST_CASE("expressions evaluate exact forms") {
  CHECK(*parse_expression("1/2") == 0.5);
  CHECK(*parse_expression("-3") == -3.0);
  CHECK(*parse_expression("sqrt(3)/2") == std::sqrt(3.0) / 2.0);
  CHECK(*parse_expression("pi") == kPi);
  CHECK(*parse_expression("2/3pi") == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-15));
  CHECK(*parse_expression("(1+2)*4") == 12.0);
  CHECK(*parse_expression("1e-3") == 1e-3);
  CHECK_FALSE(parse_expression("1/"));
  CHECK_FALSE(parse_expression("abc"));
  CHECK_FALSE(parse_expression(""));
}

TEST_CASE("round-trip formatting reproduces the double") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    CHECK(*parse_expression(format_roundtrip(v)) == v);
  }
}

TEST_CASE("significant-digit rounding") {
  CHECK(round_sig(1.23456789012345, 12) == 1.23456789012);
  CHECK(format_sig(2.0 / 3.0, 12) == "0.666666666667");
  CHECK(round_sig(0.0) == 0.0);
  CHECK_FALSE(std::signbit(round_sig(-0.0)));
}

TEST_CASE("compensated summation recovers cancelled digits") {
  CompensatedSum s;
  s += 1.0;
  for (int i = 0; i < 10000; ++i) s += 1e-16;
  s += -1.0;
  CHECK(s.value() == doctest::Approx(1e-12).epsilon(1e-6));
}

TEST_CASE("search budget comes from the environment") {
  unsetenv("CONETIME_BUDGET");
  CHECK(search_budget_from_env() == kDefaultSearchBudget);
  setenv("CONETIME_BUDGET", "1234", 1);
  CHECK(search_budget_from_env() == 1234);
  unsetenv("CONETIME_BUDGET");
}

TEST_CASE("exit statuses follow the error class") {
  CHECK(exit_status(ErrorCode::Io) == 1);
  CHECK(exit_status(ErrorCode::SearchBudgetExceeded) == 4);
  CHECK(exit_status(ErrorCode::MismatchedEdgeLength) == 2);
  CHECK(exit_status(ErrorCode::ResidueSumNonzero) == 2);
}
