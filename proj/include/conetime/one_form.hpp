#pragma once

#include <map>
#include <optional>
#include <vector>

#include "conetime/cone_surface.hpp"
#include "conetime/geodesics.hpp"

namespace conetime {

struct PeriodConstraint;

/// Discrete closed 1-form on the punctured surface: a jump per oriented edge
/// slot, lambda(t, k) for crossing from t into its neighbor across slot k,
/// with the partner slot holding the negated value. Holds a non-owning
/// reference to its surface, which must outlive it.
class EdgeCochain {
 public:
  /// Validates vertex sums against the residues; throws ResidueMismatch.
  static EdgeCochain from_jumps(const ConeSurface& surface, std::vector<std::array<double, 3>> jumps,
                                const std::map<VertexId, double>& residues);

  const ConeSurface& surface() const { return *surface_; }
  double jump(EdgeRef e) const { return jumps_[e.tri][e.slot]; }
  const std::vector<std::array<double, 3>>& jumps() const { return jumps_; }
  /// Residue at v: the jump sum along a small counterclockwise loop.
  double residue(VertexId v) const { return residues_[v.value]; }
  /// Jump sum around v recomputed from the edge values.
  double vertex_sum(VertexId v) const;

 private:
  EdgeCochain() = default;
  const ConeSurface* surface_ = nullptr;
  std::vector<std::array<double, 3>> jumps_;
  std::vector<double> residues_;
  friend EdgeCochain add_coboundary(const EdgeCochain&, const std::vector<double>&);
  friend EdgeCochain build_cochain(const ConeSurface&, const std::map<VertexId, double>&,
                                   const std::vector<PeriodConstraint>&);
};

/// A period constraint: the integral over `loop` must equal `value`.
struct PeriodConstraint {
  TracedGeodesic loop;
  double value = 0.0;
};

/// Solves the vertex-sum constraints on a dual spanning tree with zero
/// jumps, a primal tree on the remaining edges, and the leftover 2g edges
/// fixed by the periods (least-norm: unconstrained periods are zero).
/// Throws ResidueSumNonzero, InconsistentPeriods, InvalidArgument.
EdgeCochain build_cochain(const ConeSurface& surface, const std::map<VertexId, double>& residues,
                          const std::vector<PeriodConstraint>& periods = {});

/// Signed sum of the jumps of crossed edges. Throws PathThroughVertex when
/// the path meets a vertex within eps_len.
double integrate(const EdgeCochain& omega, const TracedGeodesic& path);
/// Integral along a crossing word.
double integrate(const EdgeCochain& omega, const std::vector<EdgeRef>& word);

/// lambda'(t -> n) = lambda(t -> n) + f(n) - f(t); f holds one value per triangle.
EdgeCochain add_coboundary(const EdgeCochain& omega, const std::vector<double>& f);

/// Winding numbers about each cone point, as integrals of cochains with
/// residue +1 at the cone and -1 at a reference cone.
class WindingCounter {
 public:
  explicit WindingCounter(const ConeSurface& surface);
  /// Requires a closed path; the count is relative to the reference cone.
  int winding(const TracedGeodesic& loop, VertexId cone) const;
  void record(TracedGeodesic& loop) const;

 private:
  const ConeSurface* surface_;
  std::map<VertexId, EdgeCochain> indicators_;
};

struct LoopRatioReport {
  double worst_ratio = 0.0;
  std::optional<GeodesicLoop> witness;
  double cutoff = 0.0;      // ratio verified over sampled loops of length <= cutoff
  int base_points = 0;
  int loops_sampled = 0;
  int loops_skipped = 0;    // loops meeting a vertex or an excluded disk
};

/// Max of |integral| / length over geodesic loops of length <= max_length
/// based at a net of points in the complement of the excluded disks. A lower
/// bound on the true supremum.
LoopRatioReport loop_ratio_report(const ConeSurface& surface, const EdgeCochain& omega,
                                  const std::map<VertexId, double>& excluded_disks,
                                  double max_length, long budget);
LoopRatioReport loop_ratio_report(const ConeSurface& surface, const EdgeCochain& omega,
                                  const std::map<VertexId, double>& excluded_disks,
                                  double max_length);

/// Base points of the sampling net: 21 interior barycentric grid points per triangle.
std::vector<SurfacePoint> base_point_net(const ConeSurface& surface);

}  // namespace conetime
