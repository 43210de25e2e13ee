#include "conetime/numeric.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace conetime {

long search_budget_from_env() {
  const char* env = std::getenv("CONETIME_BUDGET");
  if (env == nullptr) return kDefaultSearchBudget;
  long value = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value <= 0) return kDefaultSearchBudget;
  return value;
}

namespace {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  std::optional<double> parse() {
    auto v = expr();
    skip_space();
    if (!v || pos_ != text_.size()) return std::nullopt;
    return v;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  bool next_is_pi() {
    skip_space();
    return text_.substr(pos_, 2) == "pi";
  }

  std::optional<double> expr() {
    auto lhs = term();
    while (lhs) {
      if (consume("+")) {
        auto rhs = term();
        if (!rhs) return std::nullopt;
        *lhs += *rhs;
      } else if (consume("-")) {
        auto rhs = term();
        if (!rhs) return std::nullopt;
        *lhs -= *rhs;
      } else {
        break;
      }
    }
    return lhs;
  }

  std::optional<double> term() {
    auto lhs = unary();
    while (lhs) {
      if (consume("*")) {
        auto rhs = unary();
        if (!rhs) return std::nullopt;
        *lhs *= *rhs;
      } else if (consume("/")) {
        auto rhs = unary();
        if (!rhs) return std::nullopt;
        *lhs /= *rhs;
      } else if (next_is_pi()) {
        pos_ += 2;
        *lhs *= kPi;
      } else {
        break;
      }
    }
    return lhs;
  }

  std::optional<double> unary() {
    if (consume("-")) {
      auto v = unary();
      if (v) *v = -*v;
      return v;
    }
    if (consume("+")) return unary();
    return primary();
  }

  std::optional<double> primary() {
    skip_space();
    if (consume("(")) {
      auto v = expr();
      if (!v || !consume(")")) return std::nullopt;
      return v;
    }
    if (consume("sqrt")) {
      if (!consume("(")) return std::nullopt;
      auto v = expr();
      if (!v || !consume(")") || *v < 0.0) return std::nullopt;
      return std::sqrt(*v);
    }
    if (consume("pi")) return kPi;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (begin == end || !(std::isdigit(static_cast<unsigned char>(*begin)) || *begin == '.')) {
      return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value, std::chars_format::general);
    if (ec != std::errc()) return std::nullopt;
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::optional<double> parse_expression(std::string_view text) {
  auto v = ExpressionParser(text).parse();
  if (v && !std::isfinite(*v)) return std::nullopt;
  return v;
}

std::string format_roundtrip(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_sig(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  v = round_sig(v, digits);
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
  return std::string(buf, ptr);
}

double round_sig(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, digits - 1);
  double out = 0.0;
  std::from_chars(buf, ptr, out);
  if (out == 0.0) out = 0.0;
  return out;
}

}  // namespace conetime
