#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace conetime {

/// Particle of cone angle theta0 (mass 2 pi - theta0) and spin sigma.
class ParticleModel {
 public:
  /// Throws AngleOutOfRange unless theta0 is finite and positive.
  ParticleModel(double theta0, double sigma);

  double theta0() const { return theta0_; }
  double sigma() const { return sigma_; }
  double mass() const { return mass_; }
  /// CTC radius sigma / theta0 (signed).
  double r0() const { return r0_; }
  /// Paradox-exclusion radius pi |r0| / 2.
  double rc() const { return rc_; }

 private:
  double theta0_;
  double sigma_;
  double mass_;
  double r0_;
  double rc_;
};

/// Event in the wedge coordinates (r, theta, t) with theta unreduced.
struct PolarEvent {
  double r = 0.0;
  double theta = 0.0;
  double t = 0.0;
};

/// Adapted coordinates with alpha in [0, 2 pi) and the number of full turns
/// kept in `winding`.
struct AdaptedCoords {
  double r = 0.0;
  double alpha = 0.0;
  double tau = 0.0;
  std::int64_t winding = 0;
  double full_alpha() const;
};

AdaptedCoords to_adapted_coords(const ParticleModel& model, const PolarEvent& e);
PolarEvent from_adapted_coords(const ParticleModel& model, const AdaptedCoords& a);

struct AdaptedTangent {
  double dr = 0.0;
  double dalpha = 0.0;
  double dtau = 0.0;
};

/// -(1/theta0^2) dtau^2 - (r0/pi) dalpha dtau + (theta0/2pi)^2 (r^2 - r0^2) dalpha^2 + dr^2.
double metric_value(const ParticleModel& model, const AdaptedCoords& at, const AdaptedTangent& v);

enum class Region { CtcRegion, CtcSurface, Interior };
std::string_view to_string(Region r);

/// Causal character of the Killing field d/dalpha at radius r.
Region classify_region(const ParticleModel& model, double r);

/// Elliptic isometry: rotation by power * theta0 and time shift power * sigma.
/// Stored as the integer power so composition is exact.
struct EllipticIsometry {
  double theta0 = 0.0;
  double sigma = 0.0;
  std::int64_t power = 0;

  double rotation() const { return static_cast<double>(power) * theta0; }
  double translation() const { return static_cast<double>(power) * sigma; }
  PolarEvent operator()(const PolarEvent& e) const;
  EllipticIsometry operator*(const EllipticIsometry& o) const;
  bool operator==(const EllipticIsometry&) const = default;
};

EllipticIsometry develop(const ParticleModel& model, std::int64_t i);

/// Angle input: an exact rational multiple p/q of pi, an angle marked as an
/// irrational multiple of pi, or a plain float.
struct RationalPiAngle {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double value() const;
};
struct IrrationalPiAngle {
  double value = 0.0;
};
struct FloatAngle {
  double value = 0.0;
};
using AngleInput = std::variant<RationalPiAngle, IrrationalPiAngle, FloatAngle>;

/// Accepts `<p>/<q>pi`, `<p>pi`, `pi/<q>`, `pi`, `irrational:<expr>` and
/// plain numeric expressions (float). Returns nullopt on syntax errors.
std::optional<AngleInput> parse_angle(std::string_view text);
double angle_value(const AngleInput& a);

/// Whether 2 pi / theta0 is rational. Throws InexactAngle for float input.
bool is_finite_quotient(const AngleInput& theta0);

/// Nonzero m with |m| theta0 < pi - eps_angle, ascending.
std::vector<int> admissible_windings(const ParticleModel& model);
bool is_admissible(const ParticleModel& model, int m);

/// Observer worldline g(t) = (t sinh v, d, t cosh v) in (x, y, t) coordinates.
struct ObserverLine {
  double d = 0.0;
  double rapidity = 0.0;
};

/// Return time of the light ray winding m times, received at eigentime t.
/// Throws InadmissibleWinding, DegenerateGeometry (d = 0).
double return_time(const ParticleModel& model, const ObserverLine& obs, double t, int m);

/// m sigma + 2 d |sin(m theta0 / 2)|.
double return_time_static(const ParticleModel& model, double d, int m);

/// sgn(m) (pi - |m| theta0) / 2.
double return_direction(const ParticleModel& model, int m);

/// |m sigma / (2 sin(m theta0 / 2))|.
double positivity_threshold(const ParticleModel& model, int m);

/// Distance of the observer from the particle at reception, sqrt(t^2 sinh^2 v + d^2).
double observer_radius(const ObserverLine& obs, double t);

/// Minkowski events of a returning ray: emission on the m-th lift, reception on g.
struct ReturnEvents {
  double emission[3];   // x, y, t
  double reception[3];
};
ReturnEvents return_events(const ParticleModel& model, const ObserverLine& obs, double t, int m,
                           double delta);

/// Interval -dT^2 + dx^2 + dy^2 between the events, divided by the squared
/// Euclidean length of their separation.
double relative_null_interval(const ReturnEvents& e);

struct InferredParameters {
  double theta0 = 0.0;
  double sigma = 0.0;
  double d = 0.0;
};

/// Recovers (theta0, sigma, d) from the m = +1 and m = -1 return times and the
/// angle 2 alpha_1 between the two rays. Throws DegenerateGeometry.
InferredParameters infer_parameters(double dt_plus, double dt_minus, double angle_between_rays);

}  // namespace conetime
