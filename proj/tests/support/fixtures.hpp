#pragma once

#include <cmath>
#include <random>
#include <string>

#include "conetime/cone_surface.hpp"
#include "conetime/documents.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(CONETIME_DATA_DIR) + "/" + name; }

inline conetime::SurfaceSpec spec(const std::string& name) { return conetime::read_surface(data_path(name)); }

inline conetime::ConeSurface surface(const std::string& name) { return conetime::build_surface(spec(name)); }

inline conetime::VertexId cone(const conetime::ConeSurface& s, const std::string& label) {
  return *s.find_vertex(label);
}

/// Splits `count` random triangles at a random interior point. Every new
/// vertex is regular; labels follow their corners.
inline conetime::SurfaceSpec refine(conetime::SurfaceSpec in, std::mt19937_64& rng, int count) {
  using Spec = conetime::SurfaceSpec;
  std::uniform_real_distribution<double> u(0.1, 0.45);
  for (int step = 0; step < count; ++step) {
    std::uniform_int_distribution<std::size_t> pick(0, in.triangles.size() - 1);
    const std::size_t k = pick(rng);
    const Spec::TriangleEntry old = in.triangles[k];
    long next = 0;
    for (const auto& t : in.triangles) next = std::max(next, t.id + 1);
    const double a = u(rng), b = u(rng);
    const conetime::Vec2 c = old.v[0] + (old.v[1] - old.v[0]) * a + (old.v[2] - old.v[0]) * b;
    const long ta = old.id, tb = next, tc = next + 1;
    in.triangles[k] = Spec::TriangleEntry{ta, {old.v[0], old.v[1], c}, 0};
    in.triangles.push_back(Spec::TriangleEntry{tb, {old.v[1], old.v[2], c}, 0});
    in.triangles.push_back(Spec::TriangleEntry{tc, {old.v[2], old.v[0], c}, 0});
    const long slot_owner[3] = {ta, tb, tc};
    for (auto& g : in.gluings) {
      if (g.tri_a == old.id) {
        g.tri_a = slot_owner[g.slot_a];
        g.slot_a = 0;
      }
      if (g.tri_b == old.id) {
        g.tri_b = slot_owner[g.slot_b];
        g.slot_b = 0;
      }
    }
    in.gluings.push_back(Spec::GluingEntry{ta, 1, tb, 2, 0});
    in.gluings.push_back(Spec::GluingEntry{tb, 1, tc, 2, 0});
    in.gluings.push_back(Spec::GluingEntry{tc, 1, ta, 2, 0});
    for (auto& l : in.labels) {
      if (l.tri == old.id) {
        l.tri = slot_owner[l.corner];
        l.corner = 0;
      }
    }
  }
  return in;
}

/// Chord between polar points with angular separation dphi in the unrolled
/// plane, from the complex difference (independent of the cosine law).
inline double chord_oracle(double ra, double rb, double dphi) {
  const long double ax = ra, ay = 0.0L;
  const long double bx = rb * std::cos(static_cast<long double>(dphi));
  const long double by = rb * std::sin(static_cast<long double>(dphi));
  return static_cast<double>(std::hypot(bx - ax, by - ay));
}

/// Minkowski interval between the reception g(t) and the emission point on
/// the m-th developed copy, in extended precision, normalized by the squared
/// Euclidean separation. The emission is rotated through its polar angle.
inline double null_residual_oracle(double theta0, double sigma, double d, double v, double t, int m,
                                   double delta) {
  using L = long double;
  const L te = static_cast<L>(t) - delta;
  const L x = te * std::sinh(static_cast<L>(v));
  const L y = d;
  const L r = std::hypot(x, y);
  const L phi = std::atan2(y, x) + static_cast<L>(m) * theta0;
  const L ex = r * std::cos(phi), ey = r * std::sin(phi);
  const L et = te * std::cosh(static_cast<L>(v)) + static_cast<L>(m) * sigma;
  const L rx = t * std::sinh(static_cast<L>(v)), ry = d, rt = t * std::cosh(static_cast<L>(v));
  const L dx = rx - ex, dy = ry - ey, dt = rt - et;
  return static_cast<double>((dx * dx + dy * dy - dt * dt) / (dx * dx + dy * dy + dt * dt));
}

}  // namespace fixtures
