#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace conetime {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Global tolerances. Length tolerances are relative to the longest edge of
/// the surface they apply to.
struct Tolerances {
  static constexpr double relative_length = 1e-9;
  static constexpr double angle = 1e-9;
  static constexpr double gauss_bonnet = 1e-6;
  static constexpr double residue = 1e-9;
  static constexpr double null_interval = 1e-9;
};

/// Default cap on chart expansions for unfolding searches. The CONETIME_BUDGET
/// environment variable overrides it.
inline constexpr long kDefaultSearchBudget = 1'000'000;
long search_budget_from_env();

class CompensatedSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Locale-independent parse of a numeric expression. Accepts decimals, the
/// constant `pi`, `sqrt(...)`, parentheses, unary minus and `+ - * /`, as
/// well as juxtaposed `pi` (`2/3pi`).
std::optional<double> parse_expression(std::string_view text);

/// Shortest decimal that round-trips to the same double.
std::string format_roundtrip(double v);

/// Fixed number of significant digits, used by reports that must be stable
/// across platforms whose libm may differ in the last bit.
std::string format_sig(double v, int digits = 12);

/// Rounds a double to `digits` significant digits (decimal), for report records.
double round_sig(double v, int digits = 12);

}  // namespace conetime
