#pragma once

#include <functional>
#include <vector>

#include "conetime/cone_surface.hpp"

namespace conetime {

/// Angular sector seen from the origin of the developed plane, bounded by
/// rays through two anchor vertices. An open boundary is anchored at a cone
/// point: rays through it stop there.
struct Window {
  Vec2 right{};
  Vec2 left{};
  bool right_open = false;
  bool left_open = false;
  bool full = false;
};

struct UnfoldNode {
  int tri = -1;
  RigidMotion to_plane;  // chart of tri -> developed plane with the source at the origin
  EdgeRef via;           // edge of the parent chart crossed to reach this node
  int entry_slot = -1;   // slot of tri glued to `via`
  int parent = -1;
  Window window;
  double reach = 0.0;    // distance from the origin to the visible part of the entry edge
  int root_corner = -1;  // ring position of the source corner for cone sources
};

struct VertexHit {
  VertexId vertex;
  Corner corner;  // corner of the node's triangle that was hit
  double length = 0.0;
  Vec2 image{};   // developed position of the hit vertex
  int node = -1;
};

struct BaseHit {
  double length = 0.0;
  Vec2 image{};   // developed position of the base point image
  int node = -1;
  int tri = -1;   // chart in which the image was found
};

/// Best-first development of triangle charts along straight rays from a
/// source. Nodes are expanded in order of reach; each expansion counts
/// against a shared budget.
class Unfolding {
 public:
  using VertexCallback = std::function<void(const VertexHit&, double& cutoff)>;
  using BaseCallback = std::function<void(const BaseHit&, double& cutoff)>;

  static Unfolding from_cone(const ConeSurface& surface, VertexId cone, long& budget);
  static Unfolding from_point(const ConeSurface& surface, const SurfacePoint& base, long& budget);

  /// Expands nodes while their reach does not exceed cutoff + eps_len.
  /// Callbacks may lower the cutoff. Throws SearchBudgetExceeded.
  void run(double cutoff, const VertexCallback& on_vertex, const BaseCallback& on_base = {});

  const UnfoldNode& node(int i) const { return nodes_[i]; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  /// Edges crossed from the source to the node, in order.
  std::vector<EdgeRef> crossings(int node) const;

  /// Angular coordinate at the source of a developed direction, in [0, theta)
  /// for cone sources and (-pi, pi] in the base chart otherwise.
  double source_coordinate(int node, Vec2 developed_direction) const;
  /// Angular coordinate at a vertex of a chart direction leaving corner c.
  double corner_coordinate(Corner c, Vec2 chart_direction) const;

  bool visible(const Window& w, Vec2 x) const;

 private:
  Unfolding(const ConeSurface& surface, long& budget) : surface_(&surface), budget_(&budget) {}

  double edge_reach(const Window& w, Vec2 p, Vec2 q) const;
  bool clip(const Window& w, Vec2 p, bool p_open, Vec2 q, bool q_open, Window& out) const;
  void push_children(int index, double cutoff);

  const ConeSurface* surface_;
  long* budget_;
  bool cone_source_ = false;
  VertexId source_;
  std::vector<SurfacePoint> base_reps_;
  std::vector<UnfoldNode> nodes_;
  std::vector<int> roots_;
  std::vector<int> pending_;  // heap of node indices ordered by reach
  std::vector<VertexHit> root_hits_;
};

}  // namespace conetime
