#include "conetime/cone_surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <limits>
#include <queue>

#include "conetime/errors.hpp"
#include "conetime/numeric.hpp"
#include "conetime/unfolding.hpp"

namespace conetime {

namespace {

std::string line_context(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

/// Natural order: digit runs compare numerically.
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      std::string_view na(a.data() + i, ie - i);
      std::string_view nb(b.data() + j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
      continue;
    }
    if (a[i] != b[j]) return a[i] < b[j];
    ++i;
    ++j;
  }
  return a.size() - i < b.size() - j;
}

double interior_angle(const std::array<Vec2, 3>& v, int c) {
  const Vec2 a = v[(c + 1) % 3] - v[c];
  const Vec2 b = v[(c + 2) % 3] - v[c];
  return std::atan2(cross(a, b), dot(a, b));
}

}  // namespace

ConeSurface ConeSurface::build(const SurfaceSpec& spec) {
  if (spec.triangles.empty()) throw Error(ErrorCode::Parse, "surface has no triangles");
  ConeSurface s;
  s.spec_ = spec;
  const int n = static_cast<int>(spec.triangles.size());

  std::map<long, int> index_of;
  for (int t = 0; t < n; ++t) {
    const auto& entry = spec.triangles[t];
    if (!index_of.emplace(entry.id, t).second) {
      throw Error(ErrorCode::Parse,
                  line_context(entry.line) + "duplicate triangle id " + std::to_string(entry.id));
    }
    s.triangles_.push_back(Triangle{entry.id, entry.v});
    for (int e = 0; e < 3; ++e) {
      s.longest_edge_ = std::max(s.longest_edge_, distance(entry.v[e], entry.v[(e + 1) % 3]));
    }
  }
  s.eps_len_ = Tolerances::relative_length * s.longest_edge_;

  for (int t = 0; t < n; ++t) {
    const auto& v = s.triangles_[t].v;
    double longest = 0.0;
    for (int e = 0; e < 3; ++e) longest = std::max(longest, distance(v[e], v[(e + 1) % 3]));
    const double area2 = cross(v[1] - v[0], v[2] - v[0]);
    if (std::abs(area2) <= 1e-12 * longest * longest) {
      throw Error(ErrorCode::DegenerateTriangle, line_context(spec.triangles[t].line) + "triangle " +
                                                     std::to_string(s.triangles_[t].id) +
                                                     " has collinear vertices");
    }
    if (area2 < 0.0) {
      throw Error(ErrorCode::InconsistentOrientation,
                  line_context(spec.triangles[t].line) + "triangle " +
                      std::to_string(s.triangles_[t].id) + " is clockwise");
    }
    s.area_ += 0.5 * area2;
  }

  s.neighbor_.assign(n, {EdgeRef{}, EdgeRef{}, EdgeRef{}});
  s.motion_.assign(n, {});
  s.gluing_of_.assign(n, {-1, -1, -1});
  auto index = [&](long id, int line) {
    const auto it = index_of.find(id);
    if (it == index_of.end()) {
      throw Error(ErrorCode::Parse, line_context(line) + "unknown triangle " + std::to_string(id));
    }
    return it->second;
  };
  for (const auto& g : spec.gluings) {
    const EdgeRef a{index(g.tri_a, g.line), g.slot_a};
    const EdgeRef b{index(g.tri_b, g.line), g.slot_b};
    const std::string where = line_context(g.line) + "glue " + std::to_string(g.tri_a) + " " +
                              std::to_string(g.slot_a) + " " + std::to_string(g.tri_b) + " " +
                              std::to_string(g.slot_b);
    if (a.slot < 0 || a.slot > 2 || b.slot < 0 || b.slot > 2) {
      throw Error(ErrorCode::Parse, where + ": edge slot must be 0, 1 or 2");
    }
    if (a == b || s.gluing_of_[a.tri][a.slot] >= 0 || s.gluing_of_[b.tri][b.slot] >= 0) {
      throw Error(ErrorCode::DuplicateGluing, where + ": edge slot already glued");
    }
    const auto& va = s.triangles_[a.tri].v;
    const auto& vb = s.triangles_[b.tri].v;
    const double la = distance(va[a.slot], va[(a.slot + 1) % 3]);
    const double lb = distance(vb[b.slot], vb[(b.slot + 1) % 3]);
    if (std::abs(la - lb) > s.eps_len_) {
      throw Error(ErrorCode::MismatchedEdgeLength, where + ": lengths " + format_sig(la) + " and " +
                                                       format_sig(lb) + " differ");
    }
    const int gi = static_cast<int>(s.gluings_.size());
    s.gluings_.push_back(Gluing{a, b});
    s.gluing_of_[a.tri][a.slot] = gi;
    s.gluing_of_[b.tri][b.slot] = gi;
    s.neighbor_[a.tri][a.slot] = b;
    s.neighbor_[b.tri][b.slot] = a;
    s.motion_[a.tri][a.slot] = RigidMotion::matching(va[a.slot], va[(a.slot + 1) % 3],
                                                     vb[(b.slot + 1) % 3], vb[b.slot]);
    s.motion_[b.tri][b.slot] = s.motion_[a.tri][a.slot].inverse();
  }
  for (int t = 0; t < n; ++t) {
    for (int e = 0; e < 3; ++e) {
      if (s.gluing_of_[t][e] < 0) {
        throw Error(ErrorCode::UnpairedEdge, line_context(spec.triangles[t].line) + "edge " +
                                                 std::to_string(e) + " of triangle " +
                                                 std::to_string(s.triangles_[t].id) +
                                                 " is not glued");
      }
    }
  }

  DisjointSets sets(3 * n);
  for (const auto& g : s.gluings_) {
    sets.unite(3 * g.a.tri + g.a.slot, 3 * g.b.tri + (g.b.slot + 1) % 3);
    sets.unite(3 * g.a.tri + (g.a.slot + 1) % 3, 3 * g.b.tri + g.b.slot);
  }
  std::map<int, int> class_of_root;
  s.vertex_of_.assign(n, {-1, -1, -1});
  for (int t = 0; t < n; ++t) {
    for (int c = 0; c < 3; ++c) {
      const int root = sets.find(3 * t + c);
      const auto [it, inserted] = class_of_root.emplace(root, static_cast<int>(class_of_root.size()));
      s.vertex_of_[t][c] = it->second;
    }
  }
  const int vcount = static_cast<int>(class_of_root.size());
  s.vertices_.assign(vcount, VertexClass{});
  s.ring_pos_.assign(n, {-1, -1, -1});
  std::vector<Corner> first(vcount);
  std::vector<int> corner_count(vcount, 0);
  for (int t = n - 1; t >= 0; --t) {
    for (int c = 2; c >= 0; --c) {
      first[s.vertex_of_[t][c]] = Corner{t, c};
      ++corner_count[s.vertex_of_[t][c]];
    }
  }
  for (int v = 0; v < vcount; ++v) {
    auto& vc = s.vertices_[v];
    Corner cur = first[v];
    CompensatedSum angle;
    do {
      s.ring_pos_[cur.tri][cur.corner] = static_cast<int>(vc.ring.size());
      vc.ring.push_back(cur);
      vc.ring_offsets.push_back(angle.value());
      angle += interior_angle(s.triangles_[cur.tri].v, cur.corner);
      const EdgeRef across = s.neighbor_[cur.tri][(cur.corner + 2) % 3];
      cur = Corner{across.tri, across.slot};
    } while (!(cur == first[v]) && static_cast<int>(vc.ring.size()) <= corner_count[v]);
    if (static_cast<int>(vc.ring.size()) != corner_count[v]) {
      throw Error(ErrorCode::NonManifoldVertex,
                  "corners of vertex " + std::to_string(v) + " do not form a single cycle");
    }
    vc.angle = angle.value();
    vc.is_cone = std::abs(vc.angle - kTwoPi) > Tolerances::angle;
    vc.label = "v" + std::to_string(v);
  }

  std::vector<bool> explicit_label(vcount, false);
  std::map<std::string, int> label_owner;
  for (const auto& l : spec.labels) {
    const int t = index(l.tri, l.line);
    if (l.corner < 0 || l.corner > 2) {
      throw Error(ErrorCode::Parse, line_context(l.line) + "corner must be 0, 1 or 2");
    }
    const int v = s.vertex_of_[t][l.corner];
    if (explicit_label[v] && s.vertices_[v].label != l.name) {
      throw Error(ErrorCode::Parse, line_context(l.line) + "vertex already labelled " +
                                        s.vertices_[v].label);
    }
    const auto [it, inserted] = label_owner.emplace(l.name, v);
    if (!inserted && it->second != v) {
      throw Error(ErrorCode::Parse, line_context(l.line) + "label " + l.name + " used twice");
    }
    explicit_label[v] = true;
    s.vertices_[v].label = l.name;
  }
  for (int v = 0; v < vcount; ++v) {
    if (explicit_label[v]) continue;
    if (label_owner.count(s.vertices_[v].label) != 0) {
      throw Error(ErrorCode::Parse, "label " + s.vertices_[v].label + " collides with a default label");
    }
  }

  for (int v = 0; v < vcount; ++v) {
    if (s.vertices_[v].is_cone) s.cones_.push_back(VertexId{v});
  }
  std::sort(s.cones_.begin(), s.cones_.end(), [&](VertexId a, VertexId b) {
    return natural_less(s.vertices_[a.value].label, s.vertices_[b.value].label);
  });

  s.euler_ = vcount - static_cast<int>(s.gluings_.size()) + n;
  CompensatedSum curvature;
  for (const auto& vc : s.vertices_) curvature += kTwoPi - vc.angle;
  s.gb_residual_ = std::abs(kTwoPi * s.euler_ - curvature.value());
  if (s.gb_residual_ >= Tolerances::gauss_bonnet) {
    throw Error(ErrorCode::GaussBonnetViolation,
                "residual " + format_sig(s.gb_residual_) + " exceeds tolerance");
  }
  return s;
}

ConeSurface build_surface(const SurfaceSpec& spec) { return ConeSurface::build(spec); }

int ConeSurface::triangle_index(long id) const {
  for (int t = 0; t < triangle_count(); ++t) {
    if (triangles_[t].id == id) return t;
  }
  return -1;
}

int ConeSurface::gluing_sign(EdgeRef e) const {
  return gluings_[gluing_of_[e.tri][e.slot]].a == e ? 1 : -1;
}

const VertexClass& ConeSurface::vertex(VertexId v) const {
  if (v.value < 0 || v.value >= vertex_count()) {
    throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v.value));
  }
  return vertices_[v.value];
}

std::optional<VertexId> ConeSurface::find_vertex(std::string_view label) const {
  for (int v = 0; v < vertex_count(); ++v) {
    if (vertices_[v].label == label) return VertexId{v};
  }
  return std::nullopt;
}

double ConeSurface::cone_angle(VertexId v) const { return vertex(v).angle; }

double ConeSurface::corner_angle(Corner c) const { return interior_angle(triangles_[c.tri].v, c.corner); }

bool ConeSurface::contains(int tri, Vec2 p, double tol) const {
  const auto& v = triangles_[tri].v;
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = v[e];
    const Vec2 b = v[(e + 1) % 3];
    if (cross(b - a, p - a) / distance(a, b) < -tol) return false;
  }
  return true;
}

std::optional<VertexId> ConeSurface::vertex_at(const SurfacePoint& q) const {
  for (int c = 0; c < 3; ++c) {
    if (distance(q.p, triangles_[q.tri].v[c]) <= eps_len_) return VertexId{vertex_of_[q.tri][c]};
  }
  return std::nullopt;
}

std::vector<SurfacePoint> ConeSurface::representations(const SurfacePoint& q) const {
  const auto& v = triangles_[q.tri].v;
  for (int c = 0; c < 3; ++c) {
    if (distance(q.p, v[c]) <= eps_len_) {
      std::vector<SurfacePoint> out;
      for (const Corner& k : vertices_[vertex_of_[q.tri][c]].ring) {
        out.push_back(SurfacePoint{k.tri, triangles_[k.tri].v[k.corner]});
      }
      return out;
    }
  }
  std::vector<SurfacePoint> out{q};
  for (int e = 0; e < 3; ++e) {
    if (point_segment_distance(q.p, v[e], v[(e + 1) % 3]) <= eps_len_) {
      const EdgeRef nb = neighbor_[q.tri][e];
      out.push_back(SurfacePoint{nb.tri, motion_[q.tri][e](q.p)});
    }
  }
  return out;
}

bool ConeSurface::same_point(const SurfacePoint& a, const SurfacePoint& b) const {
  for (const auto& r : representations(a)) {
    if (r.tri == b.tri && distance(r.p, b.p) <= eps_len_) return true;
  }
  return false;
}

std::optional<SurfacePoint> ConeSurface::locate(Vec2 p) const {
  for (int t = 0; t < triangle_count(); ++t) {
    if (contains(t, p, eps_len_)) return SurfacePoint{t, p};
  }
  return std::nullopt;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Shortest path lengths along triangulation edges; an upper bound on the
/// metric distance.
std::vector<double> edge_graph_distances(const ConeSurface& s, VertexId from) {
  std::vector<double> dist(s.vertex_count(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[from.value] = 0.0;
  queue.emplace(0.0, from.value);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const Corner& c : s.vertex(VertexId{v}).ring) {
      const Corner next{c.tri, (c.corner + 1) % 3};
      const int w = s.vertex_of(next).value;
      const double nd = d + distance(s.vertex_position(c), s.vertex_position(next));
      if (nd < dist[w]) {
        dist[w] = nd;
        queue.emplace(nd, w);
      }
    }
  }
  return dist;
}

/// Metric distances from seeded cone points, relaxing through saddle
/// connections. Entries above `cap` are left infinite. Stops early once
/// `target` is settled.
std::vector<double> cone_dijkstra(const ConeSurface& s, std::vector<double> dist, double cap,
                                  std::optional<VertexId> target, long& budget) {
  std::vector<bool> settled(s.vertex_count(), false);
  const double eps = s.eps_len();
  for (;;) {
    int u = -1;
    for (VertexId c : s.cone_points()) {
      if (!settled[c.value] && dist[c.value] <= cap + eps &&
          (u < 0 || dist[c.value] < dist[u])) {
        u = c.value;
      }
    }
    if (u < 0) break;
    settled[u] = true;
    if (target && target->value == u) break;
    double limit = cap;
    if (target) limit = std::min(limit, dist[target->value]);
    if (limit - dist[u] <= eps) continue;
    Unfolding search = Unfolding::from_cone(s, VertexId{u}, budget);
    const double base = dist[u];
    search.run(limit - base, [&](const VertexHit& h, double& cutoff) {
      if (!s.is_cone(h.vertex) || h.vertex.value == u) return;
      const double nd = base + h.length;
      if (nd < dist[h.vertex.value]) dist[h.vertex.value] = nd;
      if (target && h.vertex == *target) cutoff = std::min(cutoff, h.length);
    });
  }
  for (double& d : dist) {
    if (d > cap + eps) d = kInf;
  }
  return dist;
}

void require_cone(const ConeSurface& s, VertexId v) {
  if (!s.vertex(v).is_cone) {
    throw Error(ErrorCode::UnknownVertex, "vertex " + s.vertex(v).label + " is not a cone point");
  }
}

}  // namespace

double saddle_distance(const ConeSurface& surface, VertexId i, VertexId j, long budget) {
  require_cone(surface, i);
  require_cone(surface, j);
  if (i == j) throw Error(ErrorCode::InvalidArgument, "saddle distance needs two distinct cone points");
  const VertexId from = std::min(i, j);
  const VertexId to = std::max(i, j);
  const double bound = edge_graph_distances(surface, from)[to.value];
  std::vector<double> dist(surface.vertex_count(), kInf);
  dist[from.value] = 0.0;
  dist[to.value] = bound;
  return cone_dijkstra(surface, std::move(dist), bound, to, budget)[to.value];
}

double saddle_distance(const ConeSurface& surface, VertexId i, VertexId j) {
  return saddle_distance(surface, i, j, search_budget_from_env());
}

RadiusBound injectivity_radius_at_cone(const ConeSurface& surface, VertexId i, long budget) {
  require_cone(surface, i);
  double best = kInf;
  Unfolding search = Unfolding::from_cone(surface, i, budget);
  search.run(kInf, [&](const VertexHit& h, double& cutoff) {
    if (!surface.is_cone(h.vertex)) return;
    const double r = h.vertex == i ? 0.5 * h.length : h.length;
    best = std::min(best, r);
    cutoff = 2.0 * best;  // a self connection of length 2 best may still lower it
  });
  return RadiusBound{best, false};
}

RadiusBound injectivity_radius_at_cone(const ConeSurface& surface, VertexId i) {
  return injectivity_radius_at_cone(surface, i, search_budget_from_env());
}

bool disk_embedded(const ConeSurface& surface, VertexId i, double r, long budget) {
  require_cone(surface, i);
  if (r < 0.0) throw Error(ErrorCode::InvalidArgument, "radius must be nonnegative");
  const double eps = surface.eps_len();
  bool embedded = true;
  Unfolding search = Unfolding::from_cone(surface, i, budget);
  search.run(2.0 * (r + eps), [&](const VertexHit& h, double& cutoff) {
    if (!surface.is_cone(h.vertex)) return;
    const double limit = h.vertex == i ? 0.5 * h.length : h.length;
    if (limit <= r + eps) {
      embedded = false;
      cutoff = 0.0;
    }
  });
  return embedded;
}

bool disk_embedded(const ConeSurface& surface, VertexId i, double r) {
  return disk_embedded(surface, i, r, search_budget_from_env());
}

std::vector<double> cone_distances(const ConeSurface& surface, const SurfacePoint& from, double cap,
                                   long budget) {
  std::vector<double> dist(surface.vertex_count(), kInf);
  if (const auto v = surface.vertex_at(from)) {
    if (surface.is_cone(*v)) {
      dist[v->value] = 0.0;
    } else {
      Unfolding search = Unfolding::from_cone(surface, *v, budget);
      search.run(cap, [&](const VertexHit& h, double&) {
        if (surface.is_cone(h.vertex)) dist[h.vertex.value] = std::min(dist[h.vertex.value], h.length);
      });
    }
  } else {
    SurfacePoint base = from;
    for (const SurfacePoint& rep : surface.representations(from)) {
      bool interior = true;
      const auto& v = surface.triangle(rep.tri).v;
      for (int e = 0; e < 3; ++e) {
        if (point_segment_distance(rep.p, v[e], v[(e + 1) % 3]) <= surface.eps_len()) interior = false;
      }
      if (interior) base = rep;
    }
    if (surface.representations(from).size() > 1) {
      // On an edge: start from a point pushed inside by a negligible amount.
      const auto& v = surface.triangle(base.tri).v;
      const Vec2 centroid = (v[0] + v[1] + v[2]) / 3.0;
      base.p = base.p + (centroid - base.p) * (4.0 * surface.eps_len() / distance(centroid, base.p));
    }
    Unfolding search = Unfolding::from_point(surface, base, budget);
    search.run(cap, [&](const VertexHit& h, double&) {
      if (surface.is_cone(h.vertex)) dist[h.vertex.value] = std::min(dist[h.vertex.value], h.length);
    });
  }
  return cone_dijkstra(surface, std::move(dist), cap, std::nullopt, budget);
}

std::optional<double> distance_to_cone(const ConeSurface& surface, const SurfacePoint& from,
                                       VertexId cone, double cap, long budget) {
  require_cone(surface, cone);
  const double d = cone_distances(surface, from, cap, budget)[cone.value];
  if (d == kInf) return std::nullopt;
  return d;
}

RadiusBound injectivity_radius_at_cone(const ConePlane& plane) {
  if (!(plane.theta > 0.0)) throw Error(ErrorCode::AngleOutOfRange, "cone angle must be positive");
  return RadiusBound{kInf, true};
}

}  // namespace conetime
