#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "conetime/cone_surface.hpp"
#include "conetime/one_form.hpp"

namespace conetime {

/// Reads a whole file; throws Io.
std::string read_text_file(const std::filesystem::path& path);

/// `CONETIME-SURFACE v1`: `triangle <id> x0 y0 x1 y1 x2 y2`,
/// `glue <tri> <slot> <tri> <slot>`, `label <tri> <corner> <name>`.
SurfaceSpec parse_surface(std::string_view text);
SurfaceSpec read_surface(const std::filesystem::path& path);
std::string write_surface(const SurfaceSpec& spec);

/// `CONETIME-OMEGA v1`: `residue <label> <value>` and optional
/// `jump <tri> <slot> <value>` lines.
struct OmegaSpec {
  struct Residue {
    std::string label;
    double value = 0.0;
    int line = 0;
  };
  struct Jump {
    long tri = 0;
    int slot = 0;
    double value = 0.0;
    int line = 0;
  };
  std::vector<Residue> residues;
  std::vector<Jump> jumps;
};

OmegaSpec parse_omega(std::string_view text);
OmegaSpec read_omega(const std::filesystem::path& path);
/// Builds the cochain: explicit jumps are validated against the residues;
/// without jumps the cochain is solved from the residues with zero periods.
EdgeCochain omega_cochain(const ConeSurface& surface, const OmegaSpec& spec);
/// Serializes with every jump written explicitly; round-trips bit-exactly.
std::string write_omega(const EdgeCochain& omega);

/// `CONETIME-WAYPOINTS v1`: `waypoint <tri> <x> <y>`.
std::vector<SurfacePoint> parse_waypoints(const ConeSurface& surface, std::string_view text);

/// `CONETIME-LEGS v1`: `leg <tri> <x> <y> <dx> <dy> <length>`, each traced
/// from the given chart point along the given direction.
struct LegSpec {
  SurfacePoint start;
  Vec2 direction{};
  double length = 0.0;
  int line = 0;
};
std::vector<LegSpec> parse_legs(const ConeSurface& surface, std::string_view text);

}  // namespace conetime
