#include "conetime/one_form.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "conetime/errors.hpp"
#include "conetime/numeric.hpp"

namespace conetime {

namespace {

/// Spanning structure used to solve vertex sums: values live on gluings as
/// the jump of side `a`.
struct TreeCotree {
  std::vector<int> primal_order;     // vertices in BFS order from the root
  std::vector<int> parent_gluing;    // primal tree edge to the parent, -1 at the root
  std::vector<int> leftover;         // gluings in neither tree
  std::vector<bool> dual_tree;
};

TreeCotree decompose(const ConeSurface& s) {
  TreeCotree tc;
  const int g = s.gluing_count();
  tc.dual_tree.assign(g, false);
  std::vector<bool> seen(s.triangle_count(), false);
  std::deque<int> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    for (int k = 0; k < 3; ++k) {
      const EdgeRef nb = s.neighbor(EdgeRef{t, k});
      if (seen[nb.tri]) continue;
      seen[nb.tri] = true;
      tc.dual_tree[s.gluing_index(EdgeRef{t, k})] = true;
      queue.push_back(nb.tri);
    }
  }
  std::vector<std::vector<std::pair<int, int>>> adjacency(s.vertex_count());
  for (int i = 0; i < g; ++i) {
    if (tc.dual_tree[i]) continue;
    const EdgeRef a = s.gluing(i).a;
    const int u = s.vertex_of(Corner{a.tri, a.slot}).value;
    const int w = s.vertex_of(Corner{a.tri, (a.slot + 1) % 3}).value;
    if (u == w) continue;
    adjacency[u].emplace_back(w, i);
    adjacency[w].emplace_back(u, i);
  }
  tc.parent_gluing.assign(s.vertex_count(), -1);
  std::vector<bool> reached(s.vertex_count(), false);
  std::vector<bool> in_tree(g, false);
  reached[0] = true;
  tc.primal_order.push_back(0);
  for (std::size_t head = 0; head < tc.primal_order.size(); ++head) {
    const int u = tc.primal_order[head];
    for (const auto& [w, i] : adjacency[u]) {
      if (reached[w]) continue;
      reached[w] = true;
      in_tree[i] = true;
      tc.parent_gluing[w] = i;
      tc.primal_order.push_back(w);
    }
  }
  for (int i = 0; i < g; ++i) {
    if (!tc.dual_tree[i] && !in_tree[i]) tc.leftover.push_back(i);
  }
  return tc;
}

double slot_value(const ConeSurface& s, const std::vector<double>& gluing_values, EdgeRef e) {
  return s.gluing_sign(e) * gluing_values[s.gluing_index(e)];
}

std::vector<double> solve_tree(const ConeSurface& s, const TreeCotree& tc,
                               const std::vector<double>& residues, const std::vector<double>& free) {
  std::vector<double> values(s.gluing_count(), 0.0);
  for (std::size_t k = 0; k < tc.leftover.size(); ++k) values[tc.leftover[k]] = free[k];
  for (auto it = tc.primal_order.rbegin(); it != tc.primal_order.rend(); ++it) {
    const int w = *it;
    const int pg = tc.parent_gluing[w];
    if (pg < 0) continue;
    double known = 0.0;
    int coefficient = 0;
    for (const Corner& c : s.vertex(VertexId{w}).ring) {
      const EdgeRef e{c.tri, (c.corner + 2) % 3};
      if (s.gluing_index(e) == pg) {
        coefficient += s.gluing_sign(e);
      } else {
        known += slot_value(s, values, e);
      }
    }
    values[pg] = (residues[w] - known) / coefficient;
  }
  return values;
}

std::vector<std::array<double, 3>> to_slots(const ConeSurface& s, const std::vector<double>& values) {
  std::vector<std::array<double, 3>> jumps(s.triangle_count());
  for (int t = 0; t < s.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) jumps[t][k] = slot_value(s, values, EdgeRef{t, k});
  }
  return jumps;
}

/// Least-squares-free elimination: returns a solution with free variables set
/// to zero, or nullopt when the rows are inconsistent.
std::optional<std::vector<double>> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                                                int unknowns) {
  const int rows = static_cast<int>(a.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < unknowns && r < rows; ++c) {
    int best = r;
    for (int i = r + 1; i < rows; ++i) {
      if (std::abs(a[i][c]) > std::abs(a[best][c])) best = i;
    }
    if (std::abs(a[best][c]) <= 1e-12) continue;
    std::swap(a[r], a[best]);
    std::swap(b[r], b[best]);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = a[i][c] / a[r][c];
      if (f == 0.0) continue;
      for (int j = c; j < unknowns; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i) {
    if (std::abs(b[i]) > Tolerances::residue) return std::nullopt;
  }
  std::vector<double> x(unknowns, 0.0);
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
  return x;
}

std::vector<double> residue_vector(const ConeSurface& s, const std::map<VertexId, double>& residues) {
  std::vector<double> out(s.vertex_count(), 0.0);
  for (const auto& [v, value] : residues) {
    if (!s.vertex(v).is_cone) {
      throw Error(ErrorCode::InvalidArgument, "residue given for regular vertex " + s.vertex(v).label);
    }
    out[v.value] = value;
  }
  for (VertexId c : s.cone_points()) {
    if (residues.count(c) == 0) {
      throw Error(ErrorCode::InvalidArgument, "missing residue for cone point " + s.vertex(c).label);
    }
  }
  return out;
}

void check_vertex_sums(const EdgeCochain& omega, const std::vector<double>& residues) {
  const ConeSurface& s = omega.surface();
  for (int v = 0; v < s.vertex_count(); ++v) {
    const double sum = omega.vertex_sum(VertexId{v});
    if (std::abs(sum - residues[v]) > Tolerances::residue) {
      throw Error(ErrorCode::ResidueMismatch, "jump sum " + format_sig(sum) + " around " +
                                                  s.vertex(VertexId{v}).label + " differs from residue " +
                                                  format_sig(residues[v]));
    }
  }
}

}  // namespace

double EdgeCochain::vertex_sum(VertexId v) const {
  double sum = 0.0;
  for (const Corner& c : surface_->vertex(v).ring) sum += jumps_[c.tri][(c.corner + 2) % 3];
  return sum;
}

EdgeCochain EdgeCochain::from_jumps(const ConeSurface& surface, std::vector<std::array<double, 3>> jumps,
                                    const std::map<VertexId, double>& residues) {
  if (static_cast<int>(jumps.size()) != surface.triangle_count()) {
    throw Error(ErrorCode::InvalidArgument, "one jump triple per triangle required");
  }
  for (int i = 0; i < surface.gluing_count(); ++i) {
    const Gluing& g = surface.gluing(i);
    const double a = jumps[g.a.tri][g.a.slot];
    const double b = jumps[g.b.tri][g.b.slot];
    if (a != -b) {
      throw Error(ErrorCode::ResidueMismatch, "jumps across a glued edge must be opposite");
    }
  }
  EdgeCochain omega;
  omega.surface_ = &surface;
  omega.jumps_ = std::move(jumps);
  omega.residues_ = residue_vector(surface, residues);
  check_vertex_sums(omega, omega.residues_);
  return omega;
}

EdgeCochain build_cochain(const ConeSurface& surface, const std::map<VertexId, double>& residues,
                          const std::vector<PeriodConstraint>& periods) {
  const std::vector<double> res = residue_vector(surface, residues);
  double total = 0.0;
  for (double r : res) total += r;
  if (std::abs(total) > Tolerances::residue) {
    throw Error(ErrorCode::ResidueSumNonzero, "residues sum to " + format_sig(total));
  }
  const TreeCotree tc = decompose(surface);
  const int free_count = static_cast<int>(tc.leftover.size());
  std::vector<double> values = solve_tree(surface, tc, res, std::vector<double>(free_count, 0.0));

  if (!periods.empty() && free_count > 0) {
    EdgeCochain base;
    base.surface_ = &surface;
    base.jumps_ = to_slots(surface, values);
    base.residues_ = res;
    std::vector<std::vector<double>> a(periods.size(), std::vector<double>(free_count, 0.0));
    std::vector<std::vector<double>> basis;
    for (int k = 0; k < free_count; ++k) {
      std::vector<double> unit(free_count, 0.0);
      unit[k] = 1.0;
      basis.push_back(solve_tree(surface, tc, std::vector<double>(surface.vertex_count(), 0.0), unit));
    }
    std::vector<double> b(periods.size(), 0.0);
    for (std::size_t i = 0; i < periods.size(); ++i) {
      b[i] = periods[i].value - integrate(base, periods[i].loop);
      for (int k = 0; k < free_count; ++k) {
        EdgeCochain beta;
        beta.surface_ = &surface;
        beta.jumps_ = to_slots(surface, basis[k]);
        beta.residues_.assign(surface.vertex_count(), 0.0);
        a[i][k] = integrate(beta, periods[i].loop);
      }
    }
    const auto x = solve_linear(a, b, free_count);
    if (!x) throw Error(ErrorCode::InconsistentPeriods, "period constraints admit no solution");
    for (int k = 0; k < free_count; ++k) {
      for (int i = 0; i < surface.gluing_count(); ++i) values[i] += (*x)[k] * basis[k][i];
    }
  } else if (!periods.empty()) {
    EdgeCochain base;
    base.surface_ = &surface;
    base.jumps_ = to_slots(surface, values);
    base.residues_ = res;
    for (const PeriodConstraint& p : periods) {
      if (std::abs(integrate(base, p.loop) - p.value) > Tolerances::residue) {
        throw Error(ErrorCode::InconsistentPeriods, "period fixed by the residues differs from the request");
      }
    }
  }

  EdgeCochain omega;
  omega.surface_ = &surface;
  omega.jumps_ = to_slots(surface, values);
  omega.residues_ = res;
  check_vertex_sums(omega, res);
  return omega;
}

double integrate(const EdgeCochain& omega, const std::vector<EdgeRef>& word) {
  double sum = 0.0;
  for (const EdgeRef& e : word) sum += omega.jump(e);
  return sum;
}

double integrate(const EdgeCochain& omega, const TracedGeodesic& path) {
  const ConeSurface& s = omega.surface();
  const double eps = s.eps_len();
  double sum = 0.0;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const Segment& seg = path.segments[i];
    if (seg.exit_corner >= 0) throw Error(ErrorCode::PathThroughVertex, "path passes through a vertex");
    const auto& v = s.triangle(seg.tri).v;
    for (int c = 0; c < 3; ++c) {
      if (point_segment_distance(v[c], seg.entry, seg.exit) <= eps) {
        throw Error(ErrorCode::PathThroughVertex, "path meets a vertex within tolerance");
      }
    }
    if (seg.exit_slot >= 0) sum += omega.jump(EdgeRef{seg.tri, seg.exit_slot});
  }
  return sum;
}

EdgeCochain add_coboundary(const EdgeCochain& omega, const std::vector<double>& f) {
  const ConeSurface& s = omega.surface();
  if (static_cast<int>(f.size()) != s.triangle_count()) {
    throw Error(ErrorCode::InvalidArgument, "gauge function needs one value per triangle");
  }
  EdgeCochain out = omega;
  for (int t = 0; t < s.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int n = s.neighbor(EdgeRef{t, k}).tri;
      out.jumps_[t][k] = omega.jumps_[t][k] + (f[n] - f[t]);
    }
  }
  return out;
}

WindingCounter::WindingCounter(const ConeSurface& surface) : surface_(&surface) {
  const auto cones = surface.cone_points();
  if (cones.size() < 2) return;
  for (std::size_t i = 0; i < cones.size(); ++i) {
    const VertexId reference = cones[i == 0 ? 1 : 0];
    std::map<VertexId, double> residues;
    for (VertexId c : cones) residues[c] = 0.0;
    residues[cones[i]] = 1.0;
    residues[reference] = -1.0;
    indicators_.emplace(cones[i], build_cochain(surface, residues));
  }
}

int WindingCounter::winding(const TracedGeodesic& loop, VertexId cone) const {
  const auto it = indicators_.find(cone);
  if (it == indicators_.end()) {
    throw Error(ErrorCode::InvalidArgument, "winding needs a cone point and a second reference cone");
  }
  return static_cast<int>(std::lround(integrate(it->second, loop)));
}

void WindingCounter::record(TracedGeodesic& loop) const {
  loop.windings.clear();
  for (const auto& [cone, omega] : indicators_) {
    loop.windings.push_back(ConeWinding{cone, static_cast<int>(std::lround(integrate(omega, loop)))});
  }
}

std::vector<SurfacePoint> base_point_net(const ConeSurface& surface) {
  // Interior barycentric grid points (i, j, k) / n with i, j, k >= 1.
  constexpr int n = 8;
  std::vector<SurfacePoint> net;
  for (int t = 0; t < surface.triangle_count(); ++t) {
    const auto& v = surface.triangle(t).v;
    for (int i = 1; i < n - 1; ++i) {
      for (int j = 1; i + j < n; ++j) {
        const int k = n - i - j;
        net.push_back(SurfacePoint{t, (v[0] * static_cast<double>(i) + v[1] * static_cast<double>(j) +
                                       v[2] * static_cast<double>(k)) / static_cast<double>(n)});
      }
    }
  }
  return net;
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

bool enters_disk(const ConeSurface& s, const GeodesicLoop& loop, VertexId p, double r, long budget) {
  if (r <= 0.0) return false;
  if (r < star_radius(s, p)) {
    for (const Segment& seg : loop.path.segments) {
      const auto& v = s.triangle(seg.tri).v;
      for (int c = 0; c < 3; ++c) {
        if (s.vertex_of(Corner{seg.tri, c}) == p && point_segment_distance(v[c], seg.entry, seg.exit) <= r) {
          return true;
        }
      }
    }
    return false;
  }
  const double h = r / 8.0;
  for (const Segment& seg : loop.path.segments) {
    const int samples = std::max(1, static_cast<int>(std::ceil(seg.length() / h)));
    for (int i = 0; i <= samples; ++i) {
      Vec2 q = seg.entry + (seg.exit - seg.entry) * (static_cast<double>(i) / samples);
      const auto& v = s.triangle(seg.tri).v;
      const Vec2 centroid = (v[0] + v[1] + v[2]) / 3.0;
      q = q + (centroid - q) * 1e-6;
      if (cone_distances(s, SurfacePoint{seg.tri, q}, r, budget)[p.value] <= r) return true;
    }
  }
  return false;
}

}  // namespace

LoopRatioReport loop_ratio_report(const ConeSurface& surface, const EdgeCochain& omega,
                                  const std::map<VertexId, double>& excluded_disks, double max_length,
                                  long budget) {
  if (!(max_length > 0.0)) throw Error(ErrorCode::InvalidArgument, "loop cutoff must be positive");
  LoopRatioReport report;
  report.cutoff = max_length;
  double cap = 0.0;
  for (const auto& [p, r] : excluded_disks) cap = std::max(cap, r);
  for (const SurfacePoint& base : base_point_net(surface)) {
    if (cap > 0.0) {
      const auto d = cone_distances(surface, base, cap, budget);
      bool inside = false;
      for (const auto& [p, r] : excluded_disks) {
        if (d[p.value] <= r) inside = true;
      }
      if (inside) continue;
    }
    ++report.base_points;
    for (GeodesicLoop& loop : loops_at(surface, base, max_length, budget)) {
      bool excluded = false;
      for (const auto& [p, r] : excluded_disks) {
        if (enters_disk(surface, loop, p, r, budget)) excluded = true;
      }
      double value = 0.0;
      try {
        value = integrate(omega, loop.path);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PathThroughVertex) throw;
        excluded = true;
      }
      if (excluded) {
        ++report.loops_skipped;
        continue;
      }
      ++report.loops_sampled;
      const double ratio = std::abs(value) / loop.length;
      // Ties within rounding keep the shorter loop as witness.
      const double tie = 1e-12 * std::max(1.0, report.worst_ratio);
      const bool better = ratio > report.worst_ratio + tie ||
                          (ratio >= report.worst_ratio - tie && report.witness && loop.length < report.witness->length);
      if (better || !report.witness) {
        report.worst_ratio = std::max(ratio, report.worst_ratio);
        report.witness = std::move(loop);
      }
    }
  }
  return report;
}

LoopRatioReport loop_ratio_report(const ConeSurface& surface, const EdgeCochain& omega,
                                  const std::map<VertexId, double>& excluded_disks, double max_length) {
  return loop_ratio_report(surface, omega, excluded_disks, max_length, search_budget_from_env());
}

}  // namespace conetime
