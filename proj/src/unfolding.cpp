#include "conetime/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conetime/errors.hpp"

namespace conetime {

namespace {

double side(Vec2 a, Vec2 b) { return cross(a, b) / std::max(norm(a), norm(b)); }

}  // namespace

Unfolding Unfolding::from_cone(const ConeSurface& surface, VertexId cone, long& budget) {
  Unfolding u(surface, budget);
  u.cone_source_ = true;
  u.source_ = cone;
  const VertexClass& vc = surface.vertex(cone);
  for (int k = 0; k < static_cast<int>(vc.ring.size()); ++k) {
    const Corner c = vc.ring[k];
    const auto& v = surface.triangle(c.tri).v;
    UnfoldNode root;
    root.tri = c.tri;
    root.to_plane = RigidMotion::translation(-v[c.corner]);
    root.root_corner = k;
    root.entry_slot = (c.corner + 2) % 3;  // excluded together with slot c.corner
    const Corner a{c.tri, (c.corner + 1) % 3};
    const Corner b{c.tri, (c.corner + 2) % 3};
    root.window.right = v[a.corner] - v[c.corner];
    root.window.left = v[b.corner] - v[c.corner];
    root.window.right_open = surface.is_cone(surface.vertex_of(a));
    root.window.left_open = surface.is_cone(surface.vertex_of(b));
    const int index = static_cast<int>(u.nodes_.size());
    u.nodes_.push_back(root);
    u.roots_.push_back(index);
    for (const Corner& h : {a, b}) {
      const Vec2 image = root.to_plane(v[h.corner]);
      u.root_hits_.push_back(VertexHit{surface.vertex_of(h), h, norm(image), image, index});
    }
  }
  return u;
}

Unfolding Unfolding::from_point(const ConeSurface& surface, const SurfacePoint& base, long& budget) {
  const auto& v = surface.triangle(base.tri).v;
  for (int e = 0; e < 3; ++e) {
    if (point_segment_distance(base.p, v[e], v[(e + 1) % 3]) <= surface.eps_len() ||
        !surface.contains(base.tri, base.p, 0.0)) {
      throw Error(ErrorCode::InvalidStart, "base point must lie strictly inside its triangle");
    }
  }
  Unfolding u(surface, budget);
  u.base_reps_.push_back(base);
  UnfoldNode root;
  root.tri = base.tri;
  root.to_plane = RigidMotion::translation(-base.p);
  root.window.full = true;
  u.nodes_.push_back(root);
  u.roots_.push_back(0);
  for (int c = 0; c < 3; ++c) {
    const Vec2 image = root.to_plane(v[c]);
    const Corner h{base.tri, c};
    u.root_hits_.push_back(VertexHit{surface.vertex_of(h), h, norm(image), image, 0});
  }
  return u;
}

bool Unfolding::visible(const Window& w, Vec2 x) const {
  if (w.full) return true;
  const double eps = surface_->eps_len();
  const double r = side(w.right, x);
  const double l = side(x, w.left);
  const bool right_ok = w.right_open ? r > eps : r >= -eps;
  const bool left_ok = w.left_open ? l > eps : l >= -eps;
  return right_ok && left_ok;
}

bool Unfolding::clip(const Window& w, Vec2 p, bool p_open, Vec2 q, bool q_open, Window& out) const {
  const double eps = surface_->eps_len();
  out = Window{p, q, p_open, q_open, false};
  if (!w.full) {
    const double s = side(w.right, p);
    if (s < -eps) {
      out.right = w.right;
      out.right_open = w.right_open;
    } else if (s <= eps) {
      out.right_open = p_open || w.right_open;
      if (norm(w.right) < norm(p)) out.right = w.right;
    }
    const double t = side(q, w.left);
    if (t < -eps) {
      out.left = w.left;
      out.left_open = w.left_open;
    } else if (t <= eps) {
      out.left_open = q_open || w.left_open;
      if (norm(w.left) < norm(q)) out.left = w.left;
    }
  }
  const double width = side(out.right, out.left);
  if (width < -eps) return false;
  if ((out.right_open || out.left_open) && width <= eps) return false;
  return true;
}

double Unfolding::edge_reach(const Window& w, Vec2 p, Vec2 q) const {
  double lo = 0.0;
  double hi = 1.0;
  if (!w.full) {
    const Vec2 pq = q - p;
    const double f0 = cross(w.right, p);
    const double f1 = cross(w.right, q);
    if (f0 < 0.0 && f1 > f0) lo = std::clamp(-f0 / (f1 - f0), 0.0, 1.0);
    const double g0 = cross(p, w.left);
    const double g1 = cross(q, w.left);
    if (g1 < 0.0 && g0 > g1) hi = std::clamp(g0 / (g0 - g1), 0.0, 1.0);
    if (lo > hi) lo = hi = 0.5 * (lo + hi);
    return point_segment_distance({}, p + pq * lo, p + pq * hi);
  }
  return point_segment_distance({}, p, q);
}

void Unfolding::push_children(int index, double cutoff) {
  const UnfoldNode parent = nodes_[index];
  const auto& v = surface_->triangle(parent.tri).v;
  const double eps = surface_->eps_len();
  for (int k = 0; k < 3; ++k) {
    if (k == parent.entry_slot) continue;
    if (parent.root_corner >= 0 && parent.parent < 0 && k != (parent.entry_slot + 2) % 3) {
      continue;  // cone root: only the edge opposite the source corner
    }
    const Vec2 p = parent.to_plane(v[k]);
    const Vec2 q = parent.to_plane(v[(k + 1) % 3]);
    if (side(p, q) <= eps) continue;
    const bool p_open = surface_->is_cone(surface_->vertex_of(Corner{parent.tri, k}));
    const bool q_open = surface_->is_cone(surface_->vertex_of(Corner{parent.tri, (k + 1) % 3}));
    UnfoldNode child;
    if (!clip(parent.window, p, p_open, q, q_open, child.window)) continue;
    child.reach = edge_reach(child.window, p, q);
    if (child.reach > cutoff + eps) continue;
    const EdgeRef via{parent.tri, k};
    const EdgeRef nb = surface_->neighbor(via);
    child.tri = nb.tri;
    child.via = via;
    child.entry_slot = nb.slot;
    child.parent = index;
    child.root_corner = parent.root_corner;
    child.to_plane = parent.to_plane * surface_->crossing_motion(nb);
    nodes_.push_back(child);
    pending_.push_back(static_cast<int>(nodes_.size()) - 1);
    std::push_heap(pending_.begin(), pending_.end(), [this](int a, int b) {
      return nodes_[a].reach != nodes_[b].reach ? nodes_[a].reach > nodes_[b].reach : a > b;
    });
  }
}

void Unfolding::run(double cutoff, const VertexCallback& on_vertex, const BaseCallback& on_base) {
  const double eps = surface_->eps_len();
  for (const VertexHit& h : root_hits_) {
    if (h.length <= cutoff + eps && on_vertex) on_vertex(h, cutoff);
  }
  const auto later = [this](int a, int b) {
    return nodes_[a].reach != nodes_[b].reach ? nodes_[a].reach > nodes_[b].reach : a > b;
  };
  for (int r : roots_) push_children(r, cutoff);
  while (!pending_.empty()) {
    std::pop_heap(pending_.begin(), pending_.end(), later);
    const int index = pending_.back();
    pending_.pop_back();
    if (nodes_[index].reach > cutoff + eps) break;
    if (--*budget_ < 0) {
      throw Error(ErrorCode::SearchBudgetExceeded, "unfolding exceeded the chart expansion budget");
    }
    const UnfoldNode& n = nodes_[index];
    const auto& v = surface_->triangle(n.tri).v;
    const Corner far{n.tri, (n.entry_slot + 2) % 3};
    const Vec2 f = n.to_plane(v[far.corner]);
    if (visible(n.window, f) && norm(f) <= cutoff + eps && on_vertex) {
      on_vertex(VertexHit{surface_->vertex_of(far), far, norm(f), f, index}, cutoff);
    }
    for (const SurfacePoint& b : base_reps_) {
      if (b.tri != n.tri || !on_base) continue;
      const Vec2 image = n.to_plane(b.p);
      if (norm(image) > eps && norm(image) <= cutoff + eps && visible(nodes_[index].window, image)) {
        on_base(BaseHit{norm(image), image, index, n.tri}, cutoff);
      }
    }
    push_children(index, cutoff);
  }
  pending_.clear();
}

std::vector<EdgeRef> Unfolding::crossings(int node) const {
  std::vector<EdgeRef> out;
  for (int i = node; nodes_[i].parent >= 0; i = nodes_[i].parent) out.push_back(nodes_[i].via);
  std::reverse(out.begin(), out.end());
  return out;
}

double Unfolding::corner_coordinate(Corner c, Vec2 chart_direction) const {
  const VertexClass& vc = surface_->vertex(surface_->vertex_of(c));
  const auto& v = surface_->triangle(c.tri).v;
  double a = signed_angle(v[(c.corner + 1) % 3] - v[c.corner], chart_direction);
  if (a < 0.0) a = 0.0;
  return vc.ring_offsets[surface_->ring_position(c)] + a;
}

double Unfolding::source_coordinate(int node, Vec2 developed_direction) const {
  if (!cone_source_) return std::atan2(developed_direction.y, developed_direction.x);
  const UnfoldNode& n = nodes_[node];
  const Corner c = surface_->vertex(source_).ring[n.root_corner];
  return corner_coordinate(c, developed_direction);
}

}  // namespace conetime
