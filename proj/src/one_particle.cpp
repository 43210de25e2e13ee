#include "conetime/one_particle.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "conetime/errors.hpp"
#include "conetime/numeric.hpp"

namespace conetime {

ParticleModel::ParticleModel(double theta0, double sigma)
    : theta0_(theta0), sigma_(sigma), mass_(kTwoPi - theta0), r0_(sigma / theta0), rc_(0.5 * kPi * std::abs(r0_)) {
  if (!(theta0 > 0.0) || !std::isfinite(theta0)) {
    throw Error(ErrorCode::AngleOutOfRange, "cone angle must be positive and finite");
  }
  if (!std::isfinite(sigma)) throw Error(ErrorCode::InvalidArgument, "spin must be finite");
}

double AdaptedCoords::full_alpha() const { return alpha + kTwoPi * static_cast<double>(winding); }

namespace {

void require_radius(double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::NonpositiveRadius, "radius must be positive");
}

void require_admissible(const ParticleModel& model, int m) {
  if (!is_admissible(model, m)) {
    throw Error(ErrorCode::InadmissibleWinding,
                "winding " + std::to_string(m) + " needs 0 < |m| theta0 < pi");
  }
}

}  // namespace

AdaptedCoords to_adapted_coords(const ParticleModel& model, const PolarEvent& e) {
  require_radius(e.r);
  const double alpha = kTwoPi * e.theta / model.theta0();
  AdaptedCoords a;
  a.r = e.r;
  a.tau = model.theta0() * e.t - model.sigma() * e.theta;
  a.winding = static_cast<std::int64_t>(std::floor(alpha / kTwoPi));
  a.alpha = alpha - kTwoPi * static_cast<double>(a.winding);
  if (a.alpha >= kTwoPi) {
    a.alpha -= kTwoPi;
    ++a.winding;
  } else if (a.alpha < 0.0) {
    a.alpha += kTwoPi;
    --a.winding;
  }
  return a;
}

PolarEvent from_adapted_coords(const ParticleModel& model, const AdaptedCoords& a) {
  require_radius(a.r);
  PolarEvent e;
  e.r = a.r;
  e.theta = a.full_alpha() * model.theta0() / kTwoPi;
  e.t = (a.tau + model.sigma() * e.theta) / model.theta0();
  return e;
}

double metric_value(const ParticleModel& model, const AdaptedCoords& at, const AdaptedTangent& v) {
  require_radius(at.r);
  const double th = model.theta0();
  const double r0 = model.r0();
  const double k = th / kTwoPi;
  return -(v.dtau * v.dtau) / (th * th) - (r0 / kPi) * v.dalpha * v.dtau +
         k * k * (at.r * at.r - r0 * r0) * v.dalpha * v.dalpha + v.dr * v.dr;
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::CtcRegion: return "ctc-region";
    case Region::CtcSurface: return "ctc-surface";
    case Region::Interior: return "interior";
  }
  return "unknown";
}

Region classify_region(const ParticleModel& model, double r) {
  require_radius(r);
  const double r0 = std::abs(model.r0());
  if (std::abs(r - r0) <= Tolerances::relative_length * r0) return Region::CtcSurface;
  return r < r0 ? Region::CtcRegion : Region::Interior;
}

PolarEvent EllipticIsometry::operator()(const PolarEvent& e) const {
  return PolarEvent{e.r, e.theta + rotation(), e.t + translation()};
}

EllipticIsometry EllipticIsometry::operator*(const EllipticIsometry& o) const {
  if (theta0 != o.theta0 || sigma != o.sigma) {
    throw Error(ErrorCode::InvalidArgument, "isometries of different particles do not compose");
  }
  return EllipticIsometry{theta0, sigma, power + o.power};
}

EllipticIsometry develop(const ParticleModel& model, std::int64_t i) {
  return EllipticIsometry{model.theta0(), model.sigma(), i};
}

double RationalPiAngle::value() const { return static_cast<double>(p) / static_cast<double>(q) * kPi; }

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t') out += c;
  }
  return out;
}

}  // namespace

std::optional<AngleInput> parse_angle(std::string_view raw) {
  const std::string text = strip_spaces(raw);
  std::string_view s(text);
  if (s.substr(0, 11) == "irrational:") {
    const auto v = parse_expression(s.substr(11));
    if (!v) return std::nullopt;
    return IrrationalPiAngle{*v};
  }
  auto rational = [](std::int64_t p, std::int64_t q) -> std::optional<AngleInput> {
    if (q == 0) return std::nullopt;
    if (q < 0) {
      p = -p;
      q = -q;
    }
    const std::int64_t g = std::gcd(p, q);
    if (g > 1) {
      p /= g;
      q /= g;
    }
    return RationalPiAngle{p, q};
  };
  if (s == "pi") return rational(1, 1);
  if (s.size() > 3 && s.substr(0, 3) == "pi/") {
    if (const auto q = parse_int(s.substr(3))) return rational(1, *q);
  }
  if (s.size() > 2 && s.substr(s.size() - 2) == "pi") {
    std::string_view body = s.substr(0, s.size() - 2);
    if (!body.empty() && body.back() == '*') body.remove_suffix(1);
    const auto slash = body.find('/');
    if (slash == std::string_view::npos) {
      if (const auto p = parse_int(body)) return rational(*p, 1);
    } else {
      const auto p = parse_int(body.substr(0, slash));
      const auto q = parse_int(body.substr(slash + 1));
      if (p && q) return rational(*p, *q);
    }
  }
  const auto v = parse_expression(s);
  if (!v) return std::nullopt;
  return FloatAngle{*v};
}

double angle_value(const AngleInput& a) {
  return std::visit(
      [](const auto& x) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, RationalPiAngle>) {
          return x.value();
        } else if constexpr (std::is_same_v<std::decay_t<decltype(x)>, IrrationalPiAngle>) {
          return x.value * kPi;
        } else {
          return x.value;
        }
      },
      a);
}

bool is_finite_quotient(const AngleInput& theta0) {
  if (std::holds_alternative<FloatAngle>(theta0)) {
    throw Error(ErrorCode::InexactAngle, "rationality of a floating-point angle is undecidable");
  }
  if (const auto* r = std::get_if<RationalPiAngle>(&theta0)) {
    if (r->p <= 0) throw Error(ErrorCode::AngleOutOfRange, "cone angle must be positive");
    return true;
  }
  if (!(std::get<IrrationalPiAngle>(theta0).value > 0.0)) {
    throw Error(ErrorCode::AngleOutOfRange, "cone angle must be positive");
  }
  return false;
}

bool is_admissible(const ParticleModel& model, int m) {
  return m != 0 && std::abs(static_cast<double>(m)) * model.theta0() < kPi - Tolerances::angle;
}

std::vector<int> admissible_windings(const ParticleModel& model) {
  std::vector<int> out;
  if (model.theta0() >= kPi) return out;
  const int max_m = static_cast<int>(std::floor(kPi / model.theta0())) + 1;
  for (int m = -max_m; m <= max_m; ++m) {
    if (is_admissible(model, m)) out.push_back(m);
  }
  return out;
}

double return_time(const ParticleModel& model, const ObserverLine& obs, double t, int m) {
  require_admissible(model, m);
  if (obs.d == 0.0) throw Error(ErrorCode::DegenerateGeometry, "observer crosses the particle");
  const double half = 0.5 * m * model.theta0();
  const double s = std::sin(half);
  const double c = std::cos(half);
  const double sh = std::sinh(obs.rapidity);
  const double ch = std::cosh(obs.rapidity);
  const double ms = m * model.sigma();
  const double big_t = 2.0 * s * (obs.d * c - t * sh * s);
  const double big_s = 2.0 * s * (t * sh * c + obs.d * s);
  const double u = ms * sh + ch * big_t;
  return ms * ch + sh * big_t + std::sqrt(u * u + big_s * big_s);
}

double return_time_static(const ParticleModel& model, double d, int m) {
  require_admissible(model, m);
  return m * model.sigma() + 2.0 * d * std::abs(std::sin(0.5 * m * model.theta0()));
}

double return_direction(const ParticleModel& model, int m) {
  require_admissible(model, m);
  const double sign = m > 0 ? 1.0 : -1.0;
  return sign * 0.5 * (kPi - std::abs(m) * model.theta0());
}

double positivity_threshold(const ParticleModel& model, int m) {
  require_admissible(model, m);
  return std::abs(m * model.sigma() / (2.0 * std::sin(0.5 * m * model.theta0())));
}

double observer_radius(const ObserverLine& obs, double t) {
  const double x = t * std::sinh(obs.rapidity);
  return std::sqrt(x * x + obs.d * obs.d);
}

ReturnEvents return_events(const ParticleModel& model, const ObserverLine& obs, double t, int m,
                           double delta) {
  const double sh = std::sinh(obs.rapidity);
  const double ch = std::cosh(obs.rapidity);
  const double a = m * model.theta0();
  const double te = t - delta;
  const double x = te * sh;
  const double y = obs.d;
  ReturnEvents e{};
  e.emission[0] = std::cos(a) * x - std::sin(a) * y;
  e.emission[1] = std::sin(a) * x + std::cos(a) * y;
  e.emission[2] = te * ch + m * model.sigma();
  e.reception[0] = t * sh;
  e.reception[1] = obs.d;
  e.reception[2] = t * ch;
  return e;
}

double relative_null_interval(const ReturnEvents& e) {
  const double dx = e.reception[0] - e.emission[0];
  const double dy = e.reception[1] - e.emission[1];
  const double dt = e.reception[2] - e.emission[2];
  const double scale = dx * dx + dy * dy + dt * dt;
  if (scale == 0.0) return 0.0;
  return (dx * dx + dy * dy - dt * dt) / scale;
}

InferredParameters infer_parameters(double dt_plus, double dt_minus, double angle_between_rays) {
  if (!(angle_between_rays > 0.0) || !(angle_between_rays < kPi)) {
    throw Error(ErrorCode::DegenerateGeometry, "angle between the rays must lie in (0, pi)");
  }
  if (!(dt_plus + dt_minus > 0.0)) {
    throw Error(ErrorCode::DegenerateGeometry, "return times must have a positive sum");
  }
  const double alpha1 = 0.5 * angle_between_rays;
  InferredParameters p;
  p.theta0 = kPi - angle_between_rays;
  p.sigma = 0.5 * (dt_plus - dt_minus);
  p.d = (dt_plus + dt_minus) / (4.0 * std::cos(alpha1));
  if (!(p.d > 0.0) || !std::isfinite(p.d)) {
    throw Error(ErrorCode::DegenerateGeometry, "inferred distance is not positive");
  }
  return p;
}

}  // namespace conetime
