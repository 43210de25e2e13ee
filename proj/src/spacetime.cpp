#include "conetime/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "conetime/errors.hpp"
#include "conetime/numeric.hpp"

namespace conetime {

StationarySpacetime::StationarySpacetime(const ConeSurface& surface, EdgeCochain omega)
    : surface_(&surface), omega_(std::move(omega)) {
  if (&omega_.surface() != surface_) {
    throw Error(ErrorCode::InvalidArgument, "cochain belongs to a different surface");
  }
  for (VertexId c : surface.cone_points()) {
    CtcRadii r;
    r.cone = c;
    r.sigma = omega_.residue(c);
    r.theta = surface.cone_angle(c);
    r.r = r.sigma / r.theta;
    r.rc = 0.5 * kPi * std::abs(r.r);
    radii_.push_back(r);
  }
}

std::vector<CtcRadii> ctc_radii(const StationarySpacetime& st) { return st.radii(); }

std::string_view to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Lightlike: return "lightlike";
    case CausalCharacter::Spacelike: return "spacelike";
  }
  return "unknown";
}

LiftedPath lift_geodesic(const StationarySpacetime& st, const TracedGeodesic& c, double lambda, double t0) {
  integrate(st.omega(), c);  // rejects paths through vertices
  LiftedPath out;
  out.lambda = lambda;
  const double a = std::abs(lambda);
  out.character = a > 1.0 ? CausalCharacter::Timelike
                          : (a == 1.0 ? CausalCharacter::Lightlike : CausalCharacter::Spacelike);
  CompensatedSum s;
  double crossed = 0.0;
  out.s.push_back(0.0);
  out.t.push_back(t0);
  for (const Segment& seg : c.segments) {
    const double len = seg.length();
    const double s_before = s.value();
    const double t_before = out.t.back();
    s += len;
    const double jump = seg.exit_slot >= 0 ? st.omega().jump(EdgeRef{seg.tri, seg.exit_slot}) : 0.0;
    crossed += jump;
    const double t_after = t0 + lambda * s.value() - crossed;
    out.s.push_back(s.value());
    out.t.push_back(t_after);
    if (len > 0.0) {
      const double rate = ((t_after - t_before) + jump) / (s.value() - s_before);
      out.interval_density.push_back(1.0 - rate * rate);
    }
  }
  return out;
}

namespace {

double star_radius(const ConeSurface& s, VertexId p) {
  double r = std::numeric_limits<double>::infinity();
  for (const Corner& c : s.vertex(p).ring) {
    const auto& v = s.triangle(c.tri).v;
    r = std::min(r, point_segment_distance(v[c.corner], v[(c.corner + 1) % 3], v[(c.corner + 2) % 3]));
  }
  return r;
}

/// Leg passes at distance |r| from the cone within tolerance (checked in the
/// cone's star, where chart distances are exact).
bool grazes(const ConeSurface& s, const TracedGeodesic& leg, const CtcRadii& c) {
  const double r = std::abs(c.r);
  if (r == 0.0 || r >= star_radius(s, c.cone)) return false;
  double closest = std::numeric_limits<double>::infinity();
  for (const Segment& seg : leg.segments) {
    const auto& v = s.triangle(seg.tri).v;
    for (int k = 0; k < 3; ++k) {
      if (s.vertex_of(Corner{seg.tri, k}) == c.cone) {
        closest = std::min(closest, point_segment_distance(v[k], seg.entry, seg.exit));
      }
    }
  }
  return std::abs(closest - r) <= s.eps_len();
}

}  // namespace

LightSignal signal_time(const StationarySpacetime& st, const std::vector<SurfacePoint>& waypoints,
                        const std::vector<TracedGeodesic>& legs) {
  const ConeSurface& s = st.surface();
  if (waypoints.empty() || legs.size() + 1 != waypoints.size()) {
    throw Error(ErrorCode::DisconnectedLegs, "need exactly one leg between consecutive waypoints");
  }
  LightSignal sig;
  sig.waypoints = waypoints;
  sig.legs = legs;
  SignalTiming& tm = sig.timing;
  CompensatedSum length;
  CompensatedSum elapsed;
  double omega_total = 0.0;
  tm.times.push_back(0.0);
  for (std::size_t j = 0; j < legs.size(); ++j) {
    const TracedGeodesic& leg = legs[j];
    const SurfacePoint from{leg.start.tri, leg.start.p};
    const SurfacePoint to{leg.end.tri, leg.end.p};
    if (!s.same_point(from, waypoints[j]) || !s.same_point(to, waypoints[j + 1])) {
      throw Error(ErrorCode::DisconnectedLegs,
                  "leg " + std::to_string(j) + " does not join waypoints " + std::to_string(j) + " and " +
                      std::to_string(j + 1));
    }
    if (leg.reason == Termination::ConeHit) {
      throw Error(ErrorCode::PathThroughVertex, "leg " + std::to_string(j) + " ends at a cone point");
    }
    const double w = integrate(st.omega(), leg);
    tm.leg_length.push_back(leg.length);
    tm.leg_omega.push_back(w);
    tm.leg_delta.push_back(leg.length - w);
    bool graze = false;
    for (const CtcRadii& c : st.radii()) graze = graze || grazes(s, leg, c);
    tm.leg_grazes.push_back(graze);
    length += leg.length;
    elapsed += leg.length - w;
    omega_total += w;
    tm.times.push_back(elapsed.value());
  }
  tm.length = length.value();
  tm.omega_integral = omega_total;
  tm.elapsed = elapsed.value();
  tm.closed = !legs.empty() && s.same_point(waypoints.front(), waypoints.back());
  return sig;
}

bool is_paradoxical(const SignalTiming& timing) {
  if (timing.leg_length.empty()) throw Error(ErrorCode::NotClosed, "constant signal has no legs");
  if (!timing.closed) throw Error(ErrorCode::NotClosed, "signal does not return to its first waypoint");
  return timing.elapsed < 0.0;
}

bool is_paradoxical(const LightSignal& signal) { return is_paradoxical(signal.timing); }

bool paradox_guard(const StationarySpacetime& st, const std::vector<SurfacePoint>& waypoints, long budget) {
  const ConeSurface& s = st.surface();
  const double eps = s.eps_len();
  double cap = 0.0;
  for (const CtcRadii& c : st.radii()) cap = std::max(cap, c.rc);
  for (const SurfacePoint& w : waypoints) {
    if (auto v = s.vertex_at(w); v && s.is_cone(*v)) return false;
    if (cap == 0.0) continue;
    const std::vector<double> d = cone_distances(s, w, cap + 2.0 * eps, budget);
    for (const CtcRadii& c : st.radii()) {
      if (!(d[c.cone.value] > c.rc + eps)) return false;
    }
  }
  return true;
}

bool paradox_guard(const StationarySpacetime& st, const std::vector<SurfacePoint>& waypoints) {
  return paradox_guard(st, waypoints, search_budget_from_env());
}

ConeSignal signal_time(const ParticleModel& model, const std::vector<PolarPoint>& waypoints,
                       const std::vector<int>& windings) {
  if (waypoints.empty() || windings.size() + 1 != waypoints.size()) {
    throw Error(ErrorCode::DisconnectedLegs, "need exactly one winding per leg");
  }
  ConeSignal sig;
  sig.waypoints = waypoints;
  sig.windings = windings;
  SignalTiming& tm = sig.timing;
  CompensatedSum length;
  CompensatedSum elapsed;
  double omega_total = 0.0;
  double scale = 0.0;
  tm.times.push_back(0.0);
  const double r0 = model.r0();
  for (std::size_t j = 0; j < windings.size(); ++j) {
    const ConeConnection leg = single_cone_connection(model.theta0(), waypoints[j], waypoints[j + 1], windings[j]);
    if (!leg.exists) {
      throw Error(ErrorCode::DisconnectedLegs, "no geodesic joins waypoints " + std::to_string(j) + " and " +
                                                   std::to_string(j + 1) + " with winding " +
                                                   std::to_string(windings[j]));
    }
    sig.legs.push_back(leg);
    const double w = r0 * leg.advance;
    tm.leg_length.push_back(leg.length);
    tm.leg_omega.push_back(w);
    tm.leg_delta.push_back(leg.length - w);
    const PolarPoint a = waypoints[j];
    const PolarPoint b = waypoints[j + 1];
    const Vec2 from{a.r, 0.0};
    const Vec2 to{b.r * std::cos(leg.advance), b.r * std::sin(leg.advance)};
    const double dmin = point_segment_distance(Vec2{}, from, to);
    scale = std::max({scale, a.r, b.r});
    tm.leg_grazes.push_back(r0 != 0.0 && std::abs(dmin - std::abs(r0)) <= Tolerances::relative_length * scale);
    length += leg.length;
    elapsed += leg.length - w;
    omega_total += w;
    tm.times.push_back(elapsed.value());
  }
  tm.length = length.value();
  tm.omega_integral = omega_total;
  tm.elapsed = elapsed.value();
  const PolarPoint f = waypoints.front();
  const PolarPoint l = waypoints.back();
  const double dphi = std::remainder(f.phi - l.phi, model.theta0());
  tm.closed = !windings.empty() && std::abs(f.r - l.r) <= Tolerances::relative_length * scale &&
              std::abs(dphi) <= Tolerances::angle;
  return sig;
}

bool paradox_guard(const ParticleModel& model, const std::vector<PolarPoint>& waypoints) {
  for (const PolarPoint& w : waypoints) {
    if (!(w.r > model.rc() * (1.0 + Tolerances::relative_length))) return false;
  }
  return true;
}

Polygon inscribed_polygon(double theta0, double radius, int k, double phi0) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "polygon needs at least one side");
  if (!(radius > 0.0)) throw Error(ErrorCode::NonpositiveRadius, "radius must be positive");
  Polygon p;
  for (int j = 0; j <= k; ++j) {
    const double phi = j == k ? phi0 : phi0 + theta0 * static_cast<double>(j) / k;
    p.corners.push_back(PolarPoint{radius, phi});
    if (j < k) p.windings.push_back(j == k - 1 ? 1 : 0);
  }
  return p;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::HoldsUpToCutoff: return "holds-up-to-cutoff";
    case Verdict::Fails: return "fails";
  }
  return "unknown";
}

bool is_exact(const EdgeCochain& omega) {
  const ConeSurface& s = omega.surface();
  std::vector<double> f(s.triangle_count(), std::numeric_limits<double>::quiet_NaN());
  f[0] = 0.0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    for (int k = 0; k < 3; ++k) {
      const EdgeRef nb = s.neighbor(EdgeRef{t, k});
      if (std::isnan(f[nb.tri])) {
        f[nb.tri] = f[t] + omega.jump(EdgeRef{t, k});
        queue.push_back(nb.tri);
      }
    }
  }
  for (int t = 0; t < s.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int n = s.neighbor(EdgeRef{t, k}).tri;
      if (std::abs(f[n] - f[t] - omega.jump(EdgeRef{t, k})) > Tolerances::residue) return false;
    }
  }
  return true;
}

GHReport gh_check(const StationarySpacetime& st, double loop_cutoff, long budget) {
  if (!(loop_cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "loop cutoff must be positive");
  const ConeSurface& s = st.surface();
  const double eps = s.eps_len();
  GHReport report;
  report.radii = st.radii();
  for (const CtcRadii& c : report.radii) {
    const double r = std::abs(c.r);
    report.condition1.push_back(EmbeddingCheck{c.cone, r, disk_embedded(s, c.cone, r, budget)});
  }
  for (std::size_t i = 0; i < report.radii.size(); ++i) {
    for (std::size_t j = i + 1; j < report.radii.size(); ++j) {
      const CtcRadii& a = report.radii[i];
      const CtcRadii& b = report.radii[j];
      DisjointnessCheck d;
      d.a = a.cone;
      d.b = b.cone;
      d.radius_sum = std::abs(a.r) + std::abs(b.r);
      d.distance = saddle_distance(s, a.cone, b.cone, budget);
      d.disjoint = d.radius_sum < d.distance - eps;
      report.condition2.push_back(d);
    }
  }
  report.omega_exact = is_exact(st.omega());
  for (const EmbeddingCheck& e : report.condition1) {
    if (!e.embedded) {
      report.verdict = Verdict::Fails;
      report.failed_condition = 1;
      report.witness_cones = {e.cone};
      return report;
    }
  }
  for (const DisjointnessCheck& d : report.condition2) {
    if (!d.disjoint) {
      report.verdict = Verdict::Fails;
      report.failed_condition = 2;
      report.witness_cones = {d.a, d.b};
      return report;
    }
  }
  if (report.omega_exact) {
    report.verdict = Verdict::Holds;
    return report;
  }
  std::map<VertexId, double> disks;
  for (const CtcRadii& c : report.radii) disks[c.cone] = std::abs(c.r);
  report.condition3 = loop_ratio_report(s, st.omega(), disks, loop_cutoff, budget);
  if (report.condition3->worst_ratio >= 1.0 - Tolerances::residue) {
    report.verdict = Verdict::Fails;
    report.failed_condition = 3;
  } else {
    report.verdict = Verdict::HoldsUpToCutoff;
  }
  return report;
}

GHReport gh_check(const StationarySpacetime& st, double loop_cutoff) {
  return gh_check(st, loop_cutoff, search_budget_from_env());
}

}  // namespace conetime
