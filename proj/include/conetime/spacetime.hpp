#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conetime/cone_surface.hpp"
#include "conetime/geodesics.hpp"
#include "conetime/one_form.hpp"
#include "conetime/one_particle.hpp"

namespace conetime {

struct CtcRadii {
  VertexId cone;
  double sigma = 0.0;
  double theta = 0.0;
  double r = 0.0;   // sigma / theta
  double rc = 0.0;  // pi |r| / 2
};

/// Stationary spacetime ds0^2 - (omega + dt)^2 over a cone surface. Holds a
/// non-owning reference to the surface.
class StationarySpacetime {
 public:
  StationarySpacetime(const ConeSurface& surface, EdgeCochain omega);

  const ConeSurface& surface() const { return *surface_; }
  const EdgeCochain& omega() const { return omega_; }
  /// One entry per cone point, in cone order.
  const std::vector<CtcRadii>& radii() const { return radii_; }

 private:
  const ConeSurface* surface_;
  EdgeCochain omega_;
  std::vector<CtcRadii> radii_;
};

std::vector<CtcRadii> ctc_radii(const StationarySpacetime& st);

enum class CausalCharacter { Timelike, Lightlike, Spacelike };
std::string_view to_string(CausalCharacter c);

/// Lift t(s) = t0 + lambda s - integral_0^s omega, sampled at the segment ends.
struct LiftedPath {
  std::vector<double> s;  // arclength at the start and after each segment
  std::vector<double> t;
  double lambda = 0.0;
  CausalCharacter character = CausalCharacter::Lightlike;
  /// ds0^2 - (omega + dt)^2 per unit arclength, recomputed segment by segment.
  std::vector<double> interval_density;
};

LiftedPath lift_geodesic(const StationarySpacetime& st, const TracedGeodesic& c, double lambda, double t0);

/// Time bookkeeping of a relayed light signal.
struct SignalTiming {
  std::vector<double> leg_length;
  std::vector<double> leg_omega;   // integral of omega over the leg
  std::vector<double> leg_delta;   // length - integral
  std::vector<double> times;       // t at each waypoint, starting at 0
  std::vector<bool> leg_grazes;    // leg touches a CTC surface within tolerance
  double length = 0.0;
  double omega_integral = 0.0;
  double elapsed = 0.0;
  bool closed = false;
};

struct LightSignal {
  std::vector<SurfacePoint> waypoints;
  std::vector<TracedGeodesic> legs;
  SignalTiming timing;
};

/// Leg j must run from waypoint j to waypoint j + 1. Throws DisconnectedLegs,
/// PathThroughVertex.
LightSignal signal_time(const StationarySpacetime& st, const std::vector<SurfacePoint>& waypoints,
                        const std::vector<TracedGeodesic>& legs);

/// Whether elapsed < 0. Throws NotClosed for open or constant signals.
bool is_paradoxical(const SignalTiming& timing);
bool is_paradoxical(const LightSignal& signal);

/// Whether every waypoint is farther than r_c from every cone point.
bool paradox_guard(const StationarySpacetime& st, const std::vector<SurfacePoint>& waypoints, long budget);
bool paradox_guard(const StationarySpacetime& st, const std::vector<SurfacePoint>& waypoints);

/// Signal in the single-particle plane: leg j is the geodesic from waypoint j
/// to j + 1 with winding windings[j]; omega = (sigma / theta0) dphi.
struct ConeSignal {
  std::vector<PolarPoint> waypoints;
  std::vector<int> windings;
  std::vector<ConeConnection> legs;
  SignalTiming timing;
};

/// Throws DisconnectedLegs when a requested leg does not exist.
ConeSignal signal_time(const ParticleModel& model, const std::vector<PolarPoint>& waypoints,
                       const std::vector<int>& windings);
bool paradox_guard(const ParticleModel& model, const std::vector<PolarPoint>& waypoints);

/// Corners of the inscribed k-gon at radius R around the apex of a cone of
/// angle theta0, starting at phi0; closed (k + 1 points) with zero windings
/// except the last leg, which wraps once.
struct Polygon {
  std::vector<PolarPoint> corners;
  std::vector<int> windings;
};
Polygon inscribed_polygon(double theta0, double radius, int k, double phi0 = 0.0);

enum class Verdict { Holds, HoldsUpToCutoff, Fails };
std::string_view to_string(Verdict v);

struct EmbeddingCheck {
  VertexId cone;
  double radius = 0.0;
  bool embedded = true;
};

struct DisjointnessCheck {
  VertexId a;
  VertexId b;
  double radius_sum = 0.0;
  double distance = 0.0;
  bool disjoint = true;
};

struct GHReport {
  std::vector<CtcRadii> radii;
  std::vector<EmbeddingCheck> condition1;
  std::vector<DisjointnessCheck> condition2;
  std::optional<LoopRatioReport> condition3;  // absent when conditions 1-2 fail or omega is exact
  bool omega_exact = false;
  Verdict verdict = Verdict::Holds;
  int failed_condition = 0;      // 1, 2 or 3 when the verdict is Fails
  std::vector<VertexId> witness_cones;
};

GHReport gh_check(const StationarySpacetime& st, double loop_cutoff, long budget);
GHReport gh_check(const StationarySpacetime& st, double loop_cutoff);

/// Whether omega is a coboundary (zero on every closed loop).
bool is_exact(const EdgeCochain& omega);

}  // namespace conetime
