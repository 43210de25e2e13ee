#pragma once

#include <optional>
#include <vector>

#include "conetime/cone_surface.hpp"

namespace conetime {

struct DirectionState {
  int tri = -1;
  Vec2 p{};
  Vec2 dir{};  // unit length
};

enum class Termination { LengthBudget, ConeHit, LoopClosure };

std::string_view to_string(Termination t);

struct Segment {
  int tri = -1;
  Vec2 entry{};
  Vec2 exit{};
  int exit_slot = -1;     // edge crossed at `exit`; -1 when the segment ends or meets a vertex
  int exit_corner = -1;   // corner at `exit` when the geodesic passes through a regular vertex
  double length() const { return distance(entry, exit); }
};

struct ConeWinding {
  VertexId cone;
  int winding = 0;
};

/// Straight-line geodesic across charts. Consecutive segments are related
/// by the gluing isometry of the crossed edge.
struct TracedGeodesic {
  std::vector<Segment> segments;
  double length = 0.0;
  Termination reason = Termination::LengthBudget;
  std::optional<VertexId> hit_cone;
  DirectionState start;
  DirectionState end;
  std::vector<ConeWinding> windings;  // filled for closed paths by `record_windings`
};

/// Follows the straight line from `start` for at most `max_length`. Stops at
/// a cone point passed within eps_len, or on returning through the start
/// point with the start direction. Passes straight through regular vertices.
TracedGeodesic trace(const ConeSurface& surface, const DirectionState& start, double max_length);

/// Edges crossed in order; a regular vertex passage throws PathThroughVertex.
std::vector<EdgeRef> crossing_word(const TracedGeodesic& g);

/// Word of the reversed path.
std::vector<EdgeRef> reversed_word(const ConeSurface& surface, const std::vector<EdgeRef>& word);

/// Reversed path: same polyline traversed backwards.
TracedGeodesic reversed(const ConeSurface& surface, const TracedGeodesic& g);

/// Concatenation; `b` must start where `a` ends (same chart point).
TracedGeodesic concatenated(const TracedGeodesic& a, const TracedGeodesic& b);

struct GeodesicLoop {
  TracedGeodesic path;
  SurfacePoint base;
  std::vector<EdgeRef> word;  // canonical crossing word (lexicographic minimum over reversal)
  double length = 0.0;
  double out_coordinate = 0.0;     // leaving direction at the base
  double return_coordinate = 0.0;  // leaving direction of the reversed loop
  double holonomy = 0.0;           // rotation of the direction around the loop, in (-pi, pi]
};

/// All geodesic loops based at `base` of length <= max_length, one per loop
/// up to reversal, ordered by length then crossing word. Loops stop at cone
/// points, so every loop avoids them except at a cone base.
std::vector<GeodesicLoop> loops_at(const ConeSurface& surface, const SurfacePoint& base,
                                   double max_length, long budget);
std::vector<GeodesicLoop> loops_at(const ConeSurface& surface, const SurfacePoint& base,
                                   double max_length);

struct PolarPoint {
  double r = 0.0;
  double phi = 0.0;
};

struct ConeConnection {
  bool exists = false;
  double length = 0.0;
  double advance = 0.0;  // developed angular advance
};

/// Geodesic from a to b on the cone plane of angle theta whose developed
/// angular advance is phi_b - phi_a + m theta; it exists iff |advance| < pi.
ConeConnection single_cone_connection(double theta, PolarPoint a, PolarPoint b, int m);

/// 2 r_c sin(alpha / 2) for 0 < alpha < pi.
double chord_in_disk(double r_c, double alpha);

}  // namespace conetime
