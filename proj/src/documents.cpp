#include "conetime/documents.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <fstream>
#include <sstream>

#include "conetime/errors.hpp"
#include "conetime/numeric.hpp"

namespace conetime {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return buffer.str();
}

namespace {

struct Line {
  int number = 0;
  std::vector<std::string_view> tokens;
};

/// Splits into non-empty lines with comments stripped and checks the magic header.
std::vector<Line> tokenize(std::string_view text, std::string_view magic) {
  std::vector<Line> lines;
  int number = 0;
  bool header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
      if (j > i) line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (line.tokens.empty()) continue;
    if (!header) {
      std::string joined;
      for (std::size_t k = 0; k < line.tokens.size(); ++k) {
        if (k > 0) joined += ' ';
        joined += line.tokens[k];
      }
      if (joined != magic) {
        throw Error(ErrorCode::Parse, "line " + std::to_string(number) + ": expected header '" +
                                          std::string(magic) + "'");
      }
      header = true;
      continue;
    }
    if (line.tokens.size() == 1 && line.tokens[0] == "end") break;
    lines.push_back(std::move(line));
  }
  if (!header) throw Error(ErrorCode::Parse, "missing header '" + std::string(magic) + "'");
  return lines;
}

[[noreturn]] void fail(const Line& line, const std::string& what) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line.number) + ": " + what);
}

void expect_arity(const Line& line, std::size_t n) {
  if (line.tokens.size() != n) {
    fail(line, "'" + std::string(line.tokens[0]) + "' takes " + std::to_string(n - 1) + " fields");
  }
}

template <typename Int>
Int integer(const Line& line, std::size_t k) {
  Int value{};
  const std::string_view t = line.tokens[k];
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) fail(line, "bad integer '" + std::string(t) + "'");
  return value;
}

double number(const Line& line, std::size_t k) {
  const auto v = parse_expression(line.tokens[k]);
  if (!v || !std::isfinite(*v)) fail(line, "bad number '" + std::string(line.tokens[k]) + "'");
  return *v;
}

int triangle_of(const ConeSurface& s, const Line& line, std::size_t k) {
  const long id = integer<long>(line, k);
  const int t = s.triangle_index(id);
  if (t < 0) fail(line, "unknown triangle " + std::to_string(id));
  return t;
}

}  // namespace

SurfaceSpec parse_surface(std::string_view text) {
  SurfaceSpec spec;
  for (const Line& line : tokenize(text, "CONETIME-SURFACE v1")) {
    const std::string_view kind = line.tokens[0];
    if (kind == "triangle") {
      expect_arity(line, 8);
      SurfaceSpec::TriangleEntry t;
      t.id = integer<long>(line, 1);
      for (int c = 0; c < 3; ++c) t.v[c] = Vec2{number(line, 2 + 2 * c), number(line, 3 + 2 * c)};
      t.line = line.number;
      spec.triangles.push_back(t);
    } else if (kind == "glue") {
      expect_arity(line, 5);
      spec.gluings.push_back(SurfaceSpec::GluingEntry{integer<long>(line, 1), integer<int>(line, 2),
                                                      integer<long>(line, 3), integer<int>(line, 4),
                                                      line.number});
    } else if (kind == "label") {
      expect_arity(line, 4);
      spec.labels.push_back(SurfaceSpec::LabelEntry{integer<long>(line, 1), integer<int>(line, 2),
                                                    std::string(line.tokens[3]), line.number});
    } else {
      fail(line, "unknown record '" + std::string(kind) + "'");
    }
  }
  return spec;
}

SurfaceSpec read_surface(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_surface(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + std::string(e.what()).substr(to_string(e.code()).size() + 2));
  }
}

std::string write_surface(const SurfaceSpec& spec) {
  std::string out = "CONETIME-SURFACE v1\n";
  for (const auto& t : spec.triangles) {
    out += "triangle " + std::to_string(t.id);
    for (const Vec2& p : t.v) out += " " + format_roundtrip(p.x) + " " + format_roundtrip(p.y);
    out += "\n";
  }
  for (const auto& g : spec.gluings) {
    out += "glue " + std::to_string(g.tri_a) + " " + std::to_string(g.slot_a) + " " +
           std::to_string(g.tri_b) + " " + std::to_string(g.slot_b) + "\n";
  }
  for (const auto& l : spec.labels) {
    out += "label " + std::to_string(l.tri) + " " + std::to_string(l.corner) + " " + l.name + "\n";
  }
  return out;
}

OmegaSpec parse_omega(std::string_view text) {
  OmegaSpec spec;
  for (const Line& line : tokenize(text, "CONETIME-OMEGA v1")) {
    const std::string_view kind = line.tokens[0];
    if (kind == "residue") {
      expect_arity(line, 3);
      spec.residues.push_back(OmegaSpec::Residue{std::string(line.tokens[1]), number(line, 2), line.number});
    } else if (kind == "jump") {
      expect_arity(line, 4);
      spec.jumps.push_back(
          OmegaSpec::Jump{integer<long>(line, 1), integer<int>(line, 2), number(line, 3), line.number});
    } else {
      fail(line, "unknown record '" + std::string(kind) + "'");
    }
  }
  return spec;
}

OmegaSpec read_omega(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_omega(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + std::string(e.what()).substr(to_string(e.code()).size() + 2));
  }
}

EdgeCochain omega_cochain(const ConeSurface& surface, const OmegaSpec& spec) {
  std::map<VertexId, double> residues;
  for (const auto& r : spec.residues) {
    const auto v = surface.find_vertex(r.label);
    if (!v) {
      throw Error(ErrorCode::UnknownVertex, "line " + std::to_string(r.line) + ": no vertex labelled " + r.label);
    }
    if (!residues.emplace(*v, r.value).second) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(r.line) + ": duplicate residue for " + r.label);
    }
  }
  for (VertexId c : surface.cone_points()) residues.emplace(c, 0.0);
  if (spec.jumps.empty()) return build_cochain(surface, residues);

  double total = 0.0;
  for (const auto& [v, value] : residues) total += value;
  if (std::abs(total) > Tolerances::residue) {
    throw Error(ErrorCode::ResidueSumNonzero, "residues sum to " + format_sig(total));
  }
  std::vector<std::array<double, 3>> jumps(surface.triangle_count(), {0.0, 0.0, 0.0});
  std::vector<std::array<bool, 3>> given(surface.triangle_count(), {false, false, false});
  for (const auto& j : spec.jumps) {
    const int t = surface.triangle_index(j.tri);
    if (t < 0 || j.slot < 0 || j.slot > 2) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(j.line) + ": bad edge slot");
    }
    if (given[t][j.slot]) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(j.line) + ": duplicate jump");
    }
    given[t][j.slot] = true;
    jumps[t][j.slot] = j.value;
  }
  for (int t = 0; t < surface.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const EdgeRef nb = surface.neighbor(EdgeRef{t, k});
      if (!given[t][k] && given[nb.tri][nb.slot]) jumps[t][k] = -jumps[nb.tri][nb.slot];
    }
  }
  return EdgeCochain::from_jumps(surface, std::move(jumps), residues);
}

std::string write_omega(const EdgeCochain& omega) {
  const ConeSurface& s = omega.surface();
  std::string out = "CONETIME-OMEGA v1\n";
  for (VertexId c : s.cone_points()) {
    out += "residue " + s.vertex(c).label + " " + format_roundtrip(omega.residue(c)) + "\n";
  }
  for (int t = 0; t < s.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      out += "jump " + std::to_string(s.triangle(t).id) + " " + std::to_string(k) + " " +
             format_roundtrip(omega.jump(EdgeRef{t, k})) + "\n";
    }
  }
  return out;
}

std::vector<SurfacePoint> parse_waypoints(const ConeSurface& surface, std::string_view text) {
  std::vector<SurfacePoint> points;
  for (const Line& line : tokenize(text, "CONETIME-WAYPOINTS v1")) {
    if (line.tokens[0] != "waypoint") fail(line, "unknown record '" + std::string(line.tokens[0]) + "'");
    expect_arity(line, 4);
    const SurfacePoint p{triangle_of(surface, line, 1), Vec2{number(line, 2), number(line, 3)}};
    if (!surface.contains(p.tri, p.p, surface.eps_len())) fail(line, "waypoint lies outside its triangle");
    points.push_back(p);
  }
  return points;
}

std::vector<LegSpec> parse_legs(const ConeSurface& surface, std::string_view text) {
  std::vector<LegSpec> legs;
  for (const Line& line : tokenize(text, "CONETIME-LEGS v1")) {
    if (line.tokens[0] != "leg") fail(line, "unknown record '" + std::string(line.tokens[0]) + "'");
    expect_arity(line, 7);
    LegSpec leg;
    leg.start = SurfacePoint{triangle_of(surface, line, 1), Vec2{number(line, 2), number(line, 3)}};
    const Vec2 d{number(line, 4), number(line, 5)};
    if (!(norm(d) > 0.0)) fail(line, "leg direction must be nonzero");
    leg.direction = normalized(d);
    leg.length = number(line, 6);
    if (!(leg.length > 0.0)) fail(line, "leg length must be positive");
    leg.line = line.number;
    legs.push_back(leg);
  }
  return legs;
}

}  // namespace conetime
