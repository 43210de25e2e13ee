#include "conetime/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conetime/errors.hpp"
#include "conetime/numeric.hpp"
#include "conetime/unfolding.hpp"

namespace conetime {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::LengthBudget: return "length-budget";
    case Termination::ConeHit: return "cone-hit";
    case Termination::LoopClosure: return "loop-closure";
  }
  return "unknown";
}

namespace {

double wrap_angle(double a, double period) {
  a = std::fmod(a, period);
  if (a < 0.0) a += period;
  return a;
}

double wrap_signed(double a) {
  a = wrap_angle(a + kPi, kTwoPi) - kPi;
  return a == -kPi ? kPi : a;
}

bool near_on_circle(double a, double b, double period, double tol) {
  const double d = wrap_angle(a - b, period);
  return d <= tol || period - d <= tol;
}

Vec2 rotate_by(Vec2 v, double angle) { return RigidMotion::rotation(angle).rotate(v); }

struct Event {
  enum Kind { None, Exit, ConeHit, RegularVertex, Closure, Budget } kind = None;
  double s = std::numeric_limits<double>::infinity();
  int index = -1;  // slot or corner
};

/// Continues a straight line through a regular vertex: picks the ring corner
/// containing the direction opposite to the incoming one.
DirectionState pass_vertex(const ConeSurface& s, Corner at, Vec2 dir) {
  const VertexClass& vc = s.vertex(s.vertex_of(at));
  const auto& v = s.triangle(at.tri).v;
  double back = signed_angle(v[(at.corner + 1) % 3] - v[at.corner], -dir);
  back = std::clamp(back, 0.0, s.corner_angle(at));
  const double out = wrap_angle(vc.ring_offsets[s.ring_position(at)] + back + 0.5 * vc.angle, vc.angle);
  int k = static_cast<int>(vc.ring.size()) - 1;
  for (int i = 0; i + 1 < static_cast<int>(vc.ring.size()); ++i) {
    if (out < vc.ring_offsets[i + 1]) {
      k = i;
      break;
    }
  }
  const Corner c = vc.ring[k];
  const auto& w = s.triangle(c.tri).v;
  const Vec2 first = normalized(w[(c.corner + 1) % 3] - w[c.corner]);
  return DirectionState{c.tri, w[c.corner], rotate_by(first, out - vc.ring_offsets[k])};
}

std::vector<DirectionState> start_representations(const ConeSurface& s, const DirectionState& st) {
  std::vector<DirectionState> reps{st};
  const auto& v = s.triangle(st.tri).v;
  for (int e = 0; e < 3; ++e) {
    if (point_segment_distance(st.p, v[e], v[(e + 1) % 3]) <= s.eps_len()) {
      const EdgeRef edge{st.tri, e};
      const RigidMotion& m = s.crossing_motion(edge);
      reps.push_back(DirectionState{s.neighbor(edge).tri, m(st.p), m.rotate(st.dir)});
    }
  }
  return reps;
}

}  // namespace

TracedGeodesic trace(const ConeSurface& surface, const DirectionState& start, double max_length) {
  if (start.tri < 0 || start.tri >= surface.triangle_count()) {
    throw Error(ErrorCode::InvalidStart, "unknown triangle index " + std::to_string(start.tri));
  }
  if (!(max_length > 0.0)) throw Error(ErrorCode::InvalidStart, "max_length must be positive");
  if (std::abs(norm(start.dir) - 1.0) > Tolerances::angle) {
    throw Error(ErrorCode::InvalidStart, "direction is not a unit vector");
  }
  const double eps = surface.eps_len();
  if (!surface.contains(start.tri, start.p, eps)) {
    throw Error(ErrorCode::InvalidStart, "start point lies outside its triangle");
  }
  if (surface.vertex_at(SurfacePoint{start.tri, start.p})) {
    throw Error(ErrorCode::InvalidStart, "start point lies on a vertex");
  }

  TracedGeodesic g;
  g.start = start;
  const auto reps = start_representations(surface, start);
  DirectionState cur = start;
  int entry_slot = -1;
  int from_corner = -1;
  CompensatedSum travelled;
  long steps = search_budget_from_env();

  for (;;) {
    if (--steps < 0) throw Error(ErrorCode::SearchBudgetExceeded, "trace exceeded the step budget");
    const auto& v = surface.triangle(cur.tri).v;
    Event ev;
    for (int k = 0; k < 3; ++k) {
      if (k == entry_slot) continue;
      if (from_corner >= 0 && (k == from_corner || k == (from_corner + 2) % 3)) continue;
      const Vec2 e = v[(k + 1) % 3] - v[k];
      const double gk = cross(e, cur.dir);
      if (gk >= -1e-14 * norm(e)) continue;
      const double t = std::max(0.0, cross(e, cur.p - v[k]) / -gk);
      if (t < ev.s) ev = Event{Event::Exit, t, k};
    }
    if (ev.kind == Event::None) throw Error(ErrorCode::InvalidStart, "trace lost its triangle");
    if (ev.s <= eps * 1e-3 && g.segments.empty() && entry_slot < 0 && from_corner < 0) {
      // Starting on an edge and pointing out of the chart: switch charts.
      const EdgeRef edge{cur.tri, ev.index};
      const RigidMotion& m = surface.crossing_motion(edge);
      cur = DirectionState{surface.neighbor(edge).tri, m(cur.p), m.rotate(cur.dir)};
      entry_slot = surface.neighbor(edge).slot;
      continue;
    }
    const Vec2 exit = cur.p + cur.dir * ev.s;
    for (int c = 0; c < 3; ++c) {
      if (c == from_corner) continue;
      if (point_segment_distance(v[c], cur.p, exit) > eps) continue;
      const double s = std::clamp(dot(v[c] - cur.p, cur.dir), 0.0, ev.s);
      const bool cone = surface.is_cone(surface.vertex_of(Corner{cur.tri, c}));
      if (s < ev.s || (s == ev.s && ev.kind == Event::Exit)) {
        ev = Event{cone ? Event::ConeHit : Event::RegularVertex, s, c};
      }
    }
    for (const DirectionState& r : reps) {
      if (r.tri != cur.tri || std::abs(cross(r.dir, cur.dir)) > Tolerances::angle ||
          dot(r.dir, cur.dir) <= 0.0) {
        continue;
      }
      const double s = dot(r.p - cur.p, cur.dir);
      const double already = travelled.value();
      if (s < -eps || s > ev.s + eps || already + s <= eps) continue;
      if (distance(cur.p + cur.dir * s, r.p) > eps) continue;
      if (s <= ev.s) ev = Event{Event::Closure, std::max(s, 0.0), -1};
    }
    const double remaining = max_length - travelled.value();
    if (remaining <= ev.s) ev = Event{Event::Budget, remaining, -1};

    Segment seg{cur.tri, cur.p, cur.p + cur.dir * ev.s, -1, -1};
    if (ev.kind == Event::ConeHit || ev.kind == Event::RegularVertex) seg.exit = v[ev.index];
    if (ev.kind == Event::Closure) {
      for (const DirectionState& r : reps) {
        if (r.tri == cur.tri && distance(r.p, seg.exit) <= eps) seg.exit = r.p;
      }
    }
    if (ev.kind == Event::Exit) seg.exit_slot = ev.index;
    if (ev.kind == Event::RegularVertex) seg.exit_corner = ev.index;
    g.segments.push_back(seg);
    travelled += seg.length();

    if (ev.kind == Event::Exit) {
      const EdgeRef edge{cur.tri, ev.index};
      const RigidMotion& m = surface.crossing_motion(edge);
      const EdgeRef nb = surface.neighbor(edge);
      cur = DirectionState{nb.tri, m(seg.exit), normalized(m.rotate(cur.dir))};
      entry_slot = nb.slot;
      from_corner = -1;
      continue;
    }
    if (ev.kind == Event::RegularVertex) {
      cur = pass_vertex(surface, Corner{cur.tri, ev.index}, cur.dir);
      entry_slot = -1;
      const auto& w = surface.triangle(cur.tri).v;
      for (int c = 0; c < 3; ++c) {
        if (distance(w[c], cur.p) <= eps) from_corner = c;
      }
      continue;
    }
    g.end = DirectionState{cur.tri, seg.exit, cur.dir};
    if (ev.kind == Event::ConeHit) {
      g.reason = Termination::ConeHit;
      g.hit_cone = surface.vertex_of(Corner{cur.tri, ev.index});
    } else if (ev.kind == Event::Closure) {
      g.reason = Termination::LoopClosure;
    } else {
      g.reason = Termination::LengthBudget;
    }
    break;
  }
  g.length = travelled.value();
  return g;
}

std::vector<EdgeRef> crossing_word(const TracedGeodesic& g) {
  std::vector<EdgeRef> word;
  for (const Segment& s : g.segments) {
    if (s.exit_corner >= 0) throw Error(ErrorCode::PathThroughVertex, "path passes through a vertex");
    if (s.exit_slot >= 0) word.push_back(EdgeRef{s.tri, s.exit_slot});
  }
  return word;
}

std::vector<EdgeRef> reversed_word(const ConeSurface& surface, const std::vector<EdgeRef>& word) {
  std::vector<EdgeRef> out;
  out.reserve(word.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it) out.push_back(surface.neighbor(*it));
  return out;
}

TracedGeodesic reversed(const ConeSurface& surface, const TracedGeodesic& g) {
  TracedGeodesic r;
  r.length = g.length;
  r.reason = g.reason;
  r.start = DirectionState{g.end.tri, g.end.p, -g.end.dir};
  r.end = DirectionState{g.start.tri, g.start.p, -g.start.dir};
  const int n = static_cast<int>(g.segments.size());
  for (int j = n - 1; j >= 0; --j) {
    const Segment& s = g.segments[j];
    Segment t{s.tri, s.exit, s.entry, -1, -1};
    if (j > 0) {
      const Segment& prev = g.segments[j - 1];
      if (prev.exit_slot >= 0) {
        t.exit_slot = surface.neighbor(EdgeRef{prev.tri, prev.exit_slot}).slot;
      } else {
        const auto& v = surface.triangle(s.tri).v;
        for (int c = 0; c < 3; ++c) {
          if (distance(v[c], s.entry) <= surface.eps_len()) t.exit_corner = c;
        }
      }
    }
    r.segments.push_back(t);
  }
  for (const ConeWinding& w : g.windings) r.windings.push_back(ConeWinding{w.cone, -w.winding});
  return r;
}

TracedGeodesic concatenated(const TracedGeodesic& a, const TracedGeodesic& b) {
  TracedGeodesic c = a;
  c.segments.insert(c.segments.end(), b.segments.begin(), b.segments.end());
  CompensatedSum len;
  len += a.length;
  len += b.length;
  c.length = len.value();
  c.end = b.end;
  c.reason = b.reason;
  c.hit_cone = b.hit_cone;
  c.windings.clear();
  return c;
}

namespace {

struct RawLoop {
  int node = -1;
  Vec2 image{};
  double length = 0.0;
  double out = 0.0;
  double back = 0.0;
  std::vector<EdgeRef> word;
};

TracedGeodesic corridor_path(const ConeSurface& s, const Unfolding& u, int node, Vec2 image,
                             const SurfacePoint& base) {
  std::vector<int> chain;
  for (int i = node; i >= 0; i = u.node(i).parent) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());
  const double len = norm(image);
  const Vec2 dir = image / len;
  TracedGeodesic g;
  double s_in = 0.0;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const UnfoldNode& n = u.node(chain[k]);
    const RigidMotion back = n.to_plane.inverse();
    double s_out = len;
    int slot = -1;
    if (k + 1 < chain.size()) {
      const EdgeRef via = u.node(chain[k + 1]).via;
      const auto& v = s.triangle(n.tri).v;
      const Vec2 p = n.to_plane(v[via.slot]);
      const Vec2 q = n.to_plane(v[(via.slot + 1) % 3]);
      const double denom = cross(dir, q - p);
      s_out = denom != 0.0 ? std::clamp(cross(p, q - p) / denom, s_in, len) : s_in;
      slot = via.slot;
    }
    g.segments.push_back(Segment{n.tri, back(dir * s_in), back(dir * s_out), slot, -1});
    s_in = s_out;
  }
  const UnfoldNode& root = u.node(chain.front());
  const UnfoldNode& last = u.node(chain.back());
  g.start = DirectionState{root.tri, base.p, root.to_plane.inverse().rotate(dir)};
  g.end = DirectionState{last.tri, last.to_plane.inverse()(image), last.to_plane.inverse().rotate(dir)};
  g.segments.front().entry = base.p;
  g.segments.back().exit = g.end.p;
  g.length = len;
  g.reason = Termination::LoopClosure;
  return g;
}

}  // namespace

std::vector<GeodesicLoop> loops_at(const ConeSurface& surface, const SurfacePoint& base,
                                   double max_length, long budget) {
  if (!(max_length > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_length must be positive");
  if (base.tri < 0 || base.tri >= surface.triangle_count() ||
      !surface.contains(base.tri, base.p, surface.eps_len())) {
    throw Error(ErrorCode::InvalidStart, "base point lies outside its triangle");
  }
  const double eps = surface.eps_len();
  const auto at_vertex = surface.vertex_at(base);
  SurfacePoint root_point = base;
  double period = kTwoPi;
  std::optional<Unfolding> search;
  if (at_vertex) {
    search.emplace(Unfolding::from_cone(surface, *at_vertex, budget));
    period = surface.cone_angle(*at_vertex);
  } else {
    const auto& v = surface.triangle(base.tri).v;
    bool on_edge = false;
    for (int e = 0; e < 3; ++e) {
      if (point_segment_distance(base.p, v[e], v[(e + 1) % 3]) <= eps) on_edge = true;
    }
    if (on_edge) {
      const Vec2 centroid = (v[0] + v[1] + v[2]) / 3.0;
      root_point.p = base.p + (centroid - base.p) * (4.0 * eps / distance(centroid, base.p));
    }
    search.emplace(Unfolding::from_point(surface, root_point, budget));
  }
  Unfolding& u = *search;

  std::vector<RawLoop> raw;
  auto record = [&](int node, Vec2 image, Vec2 back_dir_chart, std::optional<Corner> corner) {
    RawLoop r;
    r.node = node;
    r.image = image;
    r.length = norm(image);
    r.out = wrap_angle(u.source_coordinate(node, image), period);
    r.back = corner ? u.corner_coordinate(*corner, back_dir_chart)
                    : wrap_angle(std::atan2(back_dir_chart.y, back_dir_chart.x), period);
    r.back = wrap_angle(r.back, period);
    r.word = u.crossings(node);
    raw.push_back(std::move(r));
  };
  u.run(
      max_length,
      [&](const VertexHit& h, double&) {
        if (!at_vertex || h.vertex != *at_vertex || h.length <= eps) return;
        const Vec2 back = u.node(h.node).to_plane.inverse().rotate(-h.image / h.length);
        record(h.node, h.image, back, h.corner);
      },
      [&](const BaseHit& h, double&) {
        const Vec2 back = u.node(h.node).to_plane.inverse().rotate(-h.image / h.length);
        record(h.node, h.image, back, std::nullopt);
      });

  std::vector<GeodesicLoop> loops;
  std::vector<RawLoop> kept;
  const double angle_tol = 1e-7;
  for (RawLoop& r : raw) {
    const auto rw = reversed_word(surface, r.word);
    if (rw < r.word) r.word = rw;
    bool merged = false;
    for (RawLoop& k : kept) {
      if (std::abs(k.length - r.length) > eps) continue;
      const bool same = near_on_circle(k.out, r.out, period, angle_tol) &&
                        near_on_circle(k.back, r.back, period, angle_tol);
      const bool swapped = near_on_circle(k.out, r.back, period, angle_tol) &&
                           near_on_circle(k.back, r.out, period, angle_tol);
      if (same || swapped) {
        if (r.word < k.word) k = r;
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(r);
  }
  for (const RawLoop& k : kept) {
    GeodesicLoop loop;
    loop.path = corridor_path(surface, u, k.node, k.image, root_point);
    loop.base = base;
    loop.word = k.word;
    loop.length = k.length;
    loop.out_coordinate = k.out;
    loop.return_coordinate = k.back;
    loop.holonomy = wrap_signed(k.back + 0.5 * period - k.out);
    loops.push_back(std::move(loop));
  }
  std::sort(loops.begin(), loops.end(), [&](const GeodesicLoop& a, const GeodesicLoop& b) {
    if (std::abs(a.length - b.length) > eps) return a.length < b.length;
    return a.word < b.word;
  });
  return loops;
}

std::vector<GeodesicLoop> loops_at(const ConeSurface& surface, const SurfacePoint& base,
                                   double max_length) {
  return loops_at(surface, base, max_length, search_budget_from_env());
}

ConeConnection single_cone_connection(double theta, PolarPoint a, PolarPoint b, int m) {
  if (!(a.r > 0.0) || !(b.r > 0.0)) throw Error(ErrorCode::NonpositiveRadius, "radii must be positive");
  if (!(theta > 0.0)) throw Error(ErrorCode::AngleOutOfRange, "cone angle must be positive");
  ConeConnection c;
  c.advance = (b.phi - a.phi) + m * theta;
  if (!(std::abs(c.advance) < kPi)) return c;
  c.exists = true;
  const double h = std::sin(0.5 * c.advance);
  c.length = std::sqrt((a.r - b.r) * (a.r - b.r) + 4.0 * a.r * b.r * h * h);
  return c;
}

double chord_in_disk(double r_c, double alpha) {
  if (!(r_c > 0.0)) throw Error(ErrorCode::NonpositiveRadius, "disk radius must be positive");
  if (!(alpha > 0.0) || !(alpha < kPi)) {
    throw Error(ErrorCode::AngleOutOfRange, "chord angle must lie in (0, pi)");
  }
  return 2.0 * r_c * std::sin(0.5 * alpha);
}

}  // namespace conetime
