#pragma once

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conetime/vec2.hpp"

namespace conetime {

/// Vertex class of a triangulated surface (an equivalence class of corners).
struct VertexId {
  int value = -1;
  auto operator<=>(const VertexId&) const = default;
};

struct EdgeRef {
  int tri = -1;
  int slot = -1;  // edge `slot` runs from corner slot to corner (slot + 1) % 3
  auto operator<=>(const EdgeRef&) const = default;
};

struct Corner {
  int tri = -1;
  int corner = -1;
  auto operator<=>(const Corner&) const = default;
};

/// A point on the surface, given in the chart of one triangle.
struct SurfacePoint {
  int tri = -1;
  Vec2 p{};
};

/// Unvalidated contents of a surface document.
struct SurfaceSpec {
  struct TriangleEntry {
    long id = 0;
    std::array<Vec2, 3> v{};
    int line = 0;
  };
  struct GluingEntry {
    long tri_a = 0;
    int slot_a = 0;
    long tri_b = 0;
    int slot_b = 0;
    int line = 0;
  };
  struct LabelEntry {
    long tri = 0;
    int corner = 0;
    std::string name;
    int line = 0;
  };
  std::vector<TriangleEntry> triangles;
  std::vector<GluingEntry> gluings;
  std::vector<LabelEntry> labels;
};

struct Triangle {
  long id = 0;
  std::array<Vec2, 3> v{};
};

struct VertexClass {
  std::string label;
  double angle = 0.0;  // cone angle, radians
  bool is_cone = false;
  std::vector<Corner> ring;           // incident corners in counterclockwise order
  std::vector<double> ring_offsets;   // cumulative angle at the start of each ring corner
};

struct Gluing {
  EdgeRef a;
  EdgeRef b;
};

/// Closed oriented Euclidean surface with cone singularities, given as
/// triangle charts glued isometrically along edges. Immutable after build.
class ConeSurface {
 public:
  static ConeSurface build(const SurfaceSpec& spec);

  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  const Triangle& triangle(int t) const { return triangles_[t]; }
  Vec2 vertex_position(Corner c) const { return triangles_[c.tri].v[c.corner]; }
  int triangle_index(long id) const;  // -1 when absent

  EdgeRef neighbor(EdgeRef e) const { return neighbor_[e.tri][e.slot]; }
  /// Maps the chart of e.tri to the chart of the triangle across e.
  const RigidMotion& crossing_motion(EdgeRef e) const { return motion_[e.tri][e.slot]; }

  int gluing_count() const { return static_cast<int>(gluings_.size()); }
  const Gluing& gluing(int g) const { return gluings_[g]; }
  int gluing_index(EdgeRef e) const { return gluing_of_[e.tri][e.slot]; }
  /// +1 when e is the `a` side of its gluing, -1 otherwise.
  int gluing_sign(EdgeRef e) const;

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const VertexClass& vertex(VertexId v) const;
  VertexId vertex_of(Corner c) const { return VertexId{vertex_of_[c.tri][c.corner]}; }
  std::optional<VertexId> find_vertex(std::string_view label) const;
  bool is_cone(VertexId v) const { return vertex(v).is_cone; }

  /// Cone points ordered by label (natural order: p2 before p10).
  std::span<const VertexId> cone_points() const { return cones_; }

  /// Sum of incident corner angles; throws UnknownVertex.
  double cone_angle(VertexId v) const;
  double corner_angle(Corner c) const;
  /// Index of c in its vertex ring.
  int ring_position(Corner c) const { return ring_pos_[c.tri][c.corner]; }

  int euler_characteristic() const { return euler_; }
  double area() const { return area_; }
  double longest_edge() const { return longest_edge_; }
  double eps_len() const { return eps_len_; }
  /// |2 pi chi - sum (2 pi - theta_i)| over all vertex classes.
  double gauss_bonnet_residual() const { return gb_residual_; }

  /// All chart representations of a point: one for interior points, two on
  /// edges, one per ring corner at vertices.
  std::vector<SurfacePoint> representations(const SurfacePoint& q) const;
  bool same_point(const SurfacePoint& a, const SurfacePoint& b) const;
  /// Vertex within eps_len of q, if any.
  std::optional<VertexId> vertex_at(const SurfacePoint& q) const;
  bool contains(int tri, Vec2 p, double tol) const;
  /// Triangle containing p among the charts; std::nullopt if none.
  std::optional<SurfacePoint> locate(Vec2 p) const;

  const SurfaceSpec& spec() const { return spec_; }

 private:
  SurfaceSpec spec_;
  std::vector<Triangle> triangles_;
  std::vector<std::array<EdgeRef, 3>> neighbor_;
  std::vector<std::array<RigidMotion, 3>> motion_;
  std::vector<std::array<int, 3>> gluing_of_;
  std::vector<Gluing> gluings_;
  std::vector<std::array<int, 3>> vertex_of_;
  std::vector<std::array<int, 3>> ring_pos_;
  std::vector<VertexClass> vertices_;
  std::vector<VertexId> cones_;
  int euler_ = 0;
  double area_ = 0.0;
  double longest_edge_ = 0.0;
  double eps_len_ = 0.0;
  double gb_residual_ = 0.0;
};

ConeSurface build_surface(const SurfaceSpec& spec);

/// Upper bound on an embedded-ball radius: infinite for the analytic plane.
struct RadiusBound {
  double value = 0.0;
  bool unbounded = false;
};

/// The analytic plane with a single cone point of angle theta at the origin,
/// in polar coordinates (r, phi) with phi in [0, theta).
struct ConePlane {
  double theta = 0.0;
};

/// Always Unbounded: no other singularity and no loops at the apex.
RadiusBound injectivity_radius_at_cone(const ConePlane& plane);

/// Shortest path length between two cone points (a chain of saddle
/// connections), by best-first unfolding. Symmetric by construction.
double saddle_distance(const ConeSurface& surface, VertexId i, VertexId j, long budget);
double saddle_distance(const ConeSurface& surface, VertexId i, VertexId j);

/// Radius of the largest embedded ball about cone point i: the minimum of
/// the shortest saddle connection to another cone point and half the
/// shortest saddle connection from i back to itself.
RadiusBound injectivity_radius_at_cone(const ConeSurface& surface, VertexId i, long budget);
RadiusBound injectivity_radius_at_cone(const ConeSurface& surface, VertexId i);

/// Whether the metric ball of radius r about cone point i is embedded; ties
/// within eps_len count as not embedded.
bool disk_embedded(const ConeSurface& surface, VertexId i, double r, long budget);
bool disk_embedded(const ConeSurface& surface, VertexId i, double r);

/// Metric distances from a point to every cone point, searched up to `cap`;
/// entries beyond the cap are infinite. Indexed by vertex id.
std::vector<double> cone_distances(const ConeSurface& surface, const SurfacePoint& from, double cap,
                                   long budget);

/// Distance from a regular point to cone point i, searched up to `cap`.
/// Returns std::nullopt when no connection of length <= cap exists.
std::optional<double> distance_to_cone(const ConeSurface& surface, const SurfacePoint& from,
                                       VertexId cone, double cap, long budget);

}  // namespace conetime
