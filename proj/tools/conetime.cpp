#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conetime/cone_surface.hpp"
#include "conetime/documents.hpp"
#include "conetime/errors.hpp"
#include "conetime/geodesics.hpp"
#include "conetime/numeric.hpp"
#include "conetime/one_form.hpp"
#include "conetime/one_particle.hpp"
#include "conetime/spacetime.hpp"

namespace {

using conetime::Error;
using conetime::ErrorCode;
using Json = nlohmann::ordered_json;

constexpr int kExitCheckFailed = 3;
constexpr char kReportMagic[] = "CONETIME-REPORT v1";

enum class Format { Table, Records };

/// Report precision: 12 significant digits, magnitudes below 1e-12 read as 0.
double report_number(double v) {
  if (std::abs(v) < 1e-12) return 0.0;
  return conetime::round_sig(v, 12);
}

std::string cell(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return conetime::format_sig(report_number(v), 12);
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return report_number(v);
}

Json header(const std::string& command) {
  Json j;
  j["format"] = kReportMagic;
  j["command"] = command;
  return j;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

/// Left-aligned columns separated by two spaces.
class Table {
 public:
  explicit Table(std::vector<std::string> head) { rows_.push_back(std::move(head)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& os) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        line += r[i];
        if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
      }
      os << line << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

double parse_angle_flag(const std::string& raw) {
  std::string text;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw.compare(i, 2, "\xCF\x80") == 0) {
      text += "pi";
      ++i;
    } else {
      text += raw[i];
    }
  }
  const auto a = conetime::parse_angle(text);
  if (!a) throw Error(ErrorCode::Parse, "bad angle '" + raw + "'");
  return conetime::angle_value(*a);
}

double parse_number_flag(const std::string& name, const std::string& raw) {
  const auto v = conetime::parse_expression(raw);
  if (!v || !std::isfinite(*v)) throw Error(ErrorCode::Parse, "--" + name + ": bad number '" + raw + "'");
  return *v;
}

/// Message without the leading error code.
std::string message_of(const Error& e) {
  return std::string(e.what()).substr(conetime::to_string(e.code()).size() + 2);
}

/// Re-raises an error with the offending path in front.
template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string msg = message_of(e);
    if (msg.rfind(path, 0) == 0) throw;
    throw Error(e.code(), path + ": " + msg);
  }
}

conetime::ConeSurface load_surface(const std::string& path) {
  const conetime::SurfaceSpec spec = conetime::read_surface(path);
  return with_path(path, [&] { return conetime::build_surface(spec); });
}

conetime::EdgeCochain load_omega(const conetime::ConeSurface& s, const std::string& path) {
  const conetime::OmegaSpec spec = conetime::read_omega(path);
  return with_path(path, [&] { return conetime::omega_cochain(s, spec); });
}

std::string label(const conetime::ConeSurface& s, conetime::VertexId v) { return s.vertex(v).label; }

// validate

struct ValidateArgs {
  std::string surface;
};

int cmd_validate(const ValidateArgs& a, Format fmt) {
  const conetime::ConeSurface s = load_surface(a.surface);
  if (fmt == Format::Records) {
    Json j = header("validate");
    j["surface"] = a.surface;
    j["triangles"] = s.triangle_count();
    j["vertices"] = s.vertex_count();
    j["euler_characteristic"] = s.euler_characteristic();
    j["area"] = number(s.area());
    Json cones = Json::array();
    for (const conetime::VertexId v : s.cone_points()) {
      Json c;
      c["label"] = label(s, v);
      c["angle"] = number(s.cone_angle(v));
      c["curvature"] = number(conetime::kTwoPi - s.cone_angle(v));
      cones.push_back(c);
    }
    j["cones"] = cones;
    j["gauss_bonnet_residual"] = number(s.gauss_bonnet_residual());
    emit(j);
    return 0;
  }
  std::cout << "surface " << a.surface << '\n';
  std::cout << "triangles " << s.triangle_count() << ", vertices " << s.vertex_count()
            << ", euler characteristic " << s.euler_characteristic() << ", area " << cell(s.area()) << "\n\n";
  Table t({"cone", "angle", "curvature"});
  for (const conetime::VertexId v : s.cone_points()) {
    t.add({label(s, v), cell(s.cone_angle(v)), cell(conetime::kTwoPi - s.cone_angle(v))});
  }
  t.print(std::cout);
  std::cout << "\ngauss-bonnet residual " << cell(s.gauss_bonnet_residual()) << '\n';
  return 0;
}

// gh-check

struct GhArgs {
  std::string surface;
  std::string omega;
  double loop_cutoff = 4.0;
};

Json loop_json(const conetime::ConeSurface& s, const conetime::GeodesicLoop& g) {
  Json j;
  j["base_triangle"] = s.triangle(g.base.tri).id;
  j["base"] = {number(g.base.p.x), number(g.base.p.y)};
  j["length"] = number(g.length);
  j["crossings"] = g.word.size();
  return j;
}

int cmd_gh_check(const GhArgs& a, Format fmt) {
  if (!(a.loop_cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "--loop-cutoff must be positive");
  const conetime::ConeSurface s = load_surface(a.surface);
  const conetime::StationarySpacetime st(s, load_omega(s, a.omega));
  const conetime::GHReport r = conetime::gh_check(st, a.loop_cutoff, conetime::search_budget_from_env());
  const bool failed = r.verdict == conetime::Verdict::Fails;

  if (fmt == Format::Records) {
    Json j = header("gh-check");
    j["surface"] = a.surface;
    j["omega"] = a.omega;
    j["loop_cutoff"] = number(a.loop_cutoff);
    Json radii = Json::array();
    for (const auto& c : r.radii) {
      radii.push_back({{"label", label(s, c.cone)},
                       {"spin", number(c.sigma)},
                       {"angle", number(c.theta)},
                       {"ctc_radius", number(c.r)},
                       {"exclusion_radius", number(c.rc)}});
    }
    j["radii"] = radii;
    Json c1 = Json::array();
    for (const auto& e : r.condition1) {
      c1.push_back({{"label", label(s, e.cone)}, {"radius", number(e.radius)}, {"embedded", e.embedded}});
    }
    j["condition1"] = c1;
    Json c2 = Json::array();
    for (const auto& d : r.condition2) {
      c2.push_back({{"a", label(s, d.a)},
                    {"b", label(s, d.b)},
                    {"radius_sum", number(d.radius_sum)},
                    {"distance", number(d.distance)},
                    {"disjoint", d.disjoint}});
    }
    j["condition2"] = c2;
    j["omega_exact"] = r.omega_exact;
    if (r.condition3) {
      const auto& c3 = *r.condition3;
      Json k;
      k["worst_ratio"] = number(c3.worst_ratio);
      k["cutoff"] = number(c3.cutoff);
      k["base_points"] = c3.base_points;
      k["loops_sampled"] = c3.loops_sampled;
      k["loops_skipped"] = c3.loops_skipped;
      k["witness"] = c3.witness ? loop_json(s, *c3.witness) : Json();
      j["condition3"] = k;
    } else {
      j["condition3"] = nullptr;
    }
    j["verdict"] = std::string(conetime::to_string(r.verdict));
    j["failed_condition"] = failed ? Json(r.failed_condition) : Json();
    Json w = Json::array();
    for (const auto v : r.witness_cones) w.push_back(label(s, v));
    j["witness_cones"] = w;
    emit(j);
    return failed ? kExitCheckFailed : 0;
  }

  std::cout << "surface " << a.surface << ", omega " << a.omega << ", loop cutoff " << cell(a.loop_cutoff)
            << "\n\n";
  Table radii({"cone", "spin", "angle", "ctc radius", "exclusion radius", "embedded"});
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    const auto& c = r.radii[i];
    const std::string emb = i < r.condition1.size() ? yes_no(r.condition1[i].embedded) : "-";
    radii.add({label(s, c.cone), cell(c.sigma), cell(c.theta), cell(c.r), cell(c.rc), emb});
  }
  radii.print(std::cout);
  if (!r.condition2.empty()) {
    std::cout << '\n';
    Table pairs({"pair", "radius sum", "distance", "disjoint"});
    for (const auto& d : r.condition2) {
      pairs.add({label(s, d.a) + "-" + label(s, d.b), cell(d.radius_sum), cell(d.distance), yes_no(d.disjoint)});
    }
    pairs.print(std::cout);
  }
  std::cout << '\n';
  if (r.omega_exact) std::cout << "omega is exact: loop condition holds for every loop\n";
  if (r.condition3) {
    const auto& c3 = *r.condition3;
    std::cout << "loop ratio " << cell(c3.worst_ratio) << " up to length " << cell(c3.cutoff) << " ("
              << c3.base_points << " base points, " << c3.loops_sampled << " loops, " << c3.loops_skipped
              << " skipped)\n";
    if (c3.witness) {
      std::cout << "worst loop length " << cell(c3.witness->length) << " based in triangle "
                << s.triangle(c3.witness->base.tri).id << " at (" << cell(c3.witness->base.p.x) << ", "
                << cell(c3.witness->base.p.y) << ")\n";
    }
  }
  std::cout << "verdict " << conetime::to_string(r.verdict);
  if (failed) {
    std::cout << " (condition " << r.failed_condition << ")";
    if (!r.witness_cones.empty()) {
      std::cout << ", witness";
      for (const auto v : r.witness_cones) std::cout << ' ' << label(s, v);
    }
  }
  std::cout << '\n';
  return failed ? kExitCheckFailed : 0;
}

// trace

struct TraceArgs {
  std::string surface;
  long tri = 0;
  std::string x, y, dx, dy, length;
  bool segments = false;
};

int cmd_trace(const TraceArgs& a, Format fmt) {
  const conetime::ConeSurface s = load_surface(a.surface);
  const int t = s.triangle_index(a.tri);
  if (t < 0) throw Error(ErrorCode::InvalidStart, "unknown triangle " + std::to_string(a.tri));
  const conetime::Vec2 dir{parse_number_flag("dx", a.dx), parse_number_flag("dy", a.dy)};
  if (!(conetime::norm(dir) > 0.0)) throw Error(ErrorCode::InvalidStart, "direction must be nonzero");
  const conetime::DirectionState start{t, {parse_number_flag("x", a.x), parse_number_flag("y", a.y)},
                                       conetime::normalized(dir)};
  const conetime::TracedGeodesic g = conetime::trace(s, start, parse_number_flag("length", a.length));

  if (a.segments) {
    std::cout << "CONETIME-TRACE v1\n";
    for (const auto& seg : g.segments) {
      std::cout << "segment " << s.triangle(seg.tri).id << ' ' << conetime::format_roundtrip(seg.entry.x) << ' '
                << conetime::format_roundtrip(seg.entry.y) << ' ' << conetime::format_roundtrip(seg.exit.x) << ' '
                << conetime::format_roundtrip(seg.exit.y) << ' ' << seg.exit_slot << '\n';
    }
    std::cout << "end " << conetime::to_string(g.reason) << ' ' << conetime::format_roundtrip(g.length) << '\n';
    return 0;
  }
  if (fmt == Format::Records) {
    Json j = header("trace");
    j["surface"] = a.surface;
    Json segs = Json::array();
    for (const auto& seg : g.segments) {
      segs.push_back({{"triangle", s.triangle(seg.tri).id},
                      {"entry", {number(seg.entry.x), number(seg.entry.y)}},
                      {"exit", {number(seg.exit.x), number(seg.exit.y)}},
                      {"exit_slot", seg.exit_slot},
                      {"length", number(seg.length())}});
    }
    j["segments"] = segs;
    j["length"] = number(g.length);
    j["termination"] = std::string(conetime::to_string(g.reason));
    j["hit_cone"] = g.hit_cone ? Json(label(s, *g.hit_cone)) : Json();
    emit(j);
    return 0;
  }
  Table tab({"triangle", "entry x", "entry y", "exit x", "exit y", "exit edge", "length"});
  for (const auto& seg : g.segments) {
    tab.add({std::to_string(s.triangle(seg.tri).id), cell(seg.entry.x), cell(seg.entry.y), cell(seg.exit.x),
             cell(seg.exit.y), seg.exit_corner >= 0 ? "vertex" : seg.exit_slot < 0 ? "-" : std::to_string(seg.exit_slot), cell(seg.length())});
  }
  tab.print(std::cout);
  std::cout << "\nlength " << cell(g.length) << ", termination " << conetime::to_string(g.reason);
  if (g.hit_cone) std::cout << " at " << label(s, *g.hit_cone);
  std::cout << '\n';
  return 0;
}

// return-times

struct ReturnArgs {
  std::string theta, sigma, d, rapidity = "0", t = "0";
};

int cmd_return_times(const ReturnArgs& a, Format fmt) {
  const double theta = parse_angle_flag(a.theta);
  const conetime::ParticleModel model(theta, parse_number_flag("sigma", a.sigma));
  const conetime::ObserverLine obs{parse_number_flag("d", a.d), parse_number_flag("rapidity", a.rapidity)};
  const double t = parse_number_flag("t", a.t);
  if (!(obs.d > 0.0)) throw Error(ErrorCode::DegenerateGeometry, "--d must be positive");
  const std::vector<int> ms = conetime::admissible_windings(model);
  const double radius = conetime::observer_radius(obs, t);

  struct Row {
    int m;
    double dt, alpha, threshold;
    bool paradox;
  };
  std::vector<Row> rows;
  for (const int m : ms) {
    const double dt = conetime::return_time(model, obs, t, m);
    const double scale = std::abs(m * model.sigma()) + obs.d + std::abs(t);
    rows.push_back({m, dt, conetime::return_direction(model, m), conetime::positivity_threshold(model, m),
                    dt <= 1e-12 * scale});
  }
  const char* note = "no admissible windings: no light ray returns when the cone angle is at least pi";

  if (fmt == Format::Records) {
    Json j = header("return-times");
    j["theta"] = number(theta);
    j["sigma"] = number(model.sigma());
    j["d"] = number(obs.d);
    j["rapidity"] = number(obs.rapidity);
    j["t"] = number(t);
    j["ctc_radius"] = number(model.r0());
    j["exclusion_radius"] = number(model.rc());
    j["observer_radius"] = number(radius);
    Json out = Json::array();
    for (const Row& r : rows) {
      out.push_back({{"m", r.m},
                     {"return_time", number(r.dt)},
                     {"direction", number(r.alpha)},
                     {"threshold", number(r.threshold)},
                     {"paradox", r.paradox}});
    }
    j["rows"] = out;
    if (rows.empty()) j["note"] = note;
    emit(j);
    return 0;
  }
  std::cout << "theta " << cell(theta) << ", sigma " << cell(model.sigma()) << ", ctc radius " << cell(model.r0())
            << ", exclusion radius " << cell(model.rc()) << "\nobserver d " << cell(obs.d) << ", rapidity "
            << cell(obs.rapidity) << ", t " << cell(t) << ", radius " << cell(radius) << "\n\n";
  if (rows.empty()) {
    std::cout << note << '\n';
    return 0;
  }
  Table tab({"m", "return time", "direction", "threshold", "paradox"});
  for (const Row& r : rows) {
    tab.add({std::to_string(r.m), cell(r.dt), cell(r.alpha), cell(r.threshold), yes_no(r.paradox)});
  }
  tab.print(std::cout);
  return 0;
}

// signal

struct SignalArgs {
  std::string surface, omega, waypoints, legs;
};

int cmd_signal(const SignalArgs& a, Format fmt) {
  const conetime::ConeSurface s = load_surface(a.surface);
  const conetime::StationarySpacetime st(s, load_omega(s, a.omega));
  const std::string wtext = conetime::read_text_file(a.waypoints);
  const auto waypoints = with_path(a.waypoints, [&] { return conetime::parse_waypoints(s, wtext); });
  const std::string ltext = conetime::read_text_file(a.legs);
  const auto specs = with_path(a.legs, [&] { return conetime::parse_legs(s, ltext); });
  std::vector<conetime::TracedGeodesic> legs;
  for (const auto& l : specs) {
    legs.push_back(with_path(a.legs, [&] {
      try {
        return conetime::trace(s, conetime::DirectionState{l.start.tri, l.start.p, l.direction}, l.length);
      } catch (const Error& e) {
        throw Error(e.code(), "line " + std::to_string(l.line) + ": " + message_of(e));
      }
    }));
  }
  const conetime::LightSignal sig = conetime::signal_time(st, waypoints, legs);
  const auto& tm = sig.timing;
  const bool guard = conetime::paradox_guard(st, waypoints, conetime::search_budget_from_env());
  // Paradox is only defined for closed signals.
  const bool paradox = tm.closed && conetime::is_paradoxical(tm);

  if (fmt == Format::Records) {
    Json j = header("signal");
    j["surface"] = a.surface;
    j["omega"] = a.omega;
    Json out = Json::array();
    for (std::size_t i = 0; i < tm.leg_length.size(); ++i) {
      out.push_back({{"length", number(tm.leg_length[i])},
                     {"omega_integral", number(tm.leg_omega[i])},
                     {"delta_t", number(tm.leg_delta[i])},
                     {"grazes", static_cast<bool>(tm.leg_grazes[i])}});
    }
    j["legs"] = out;
    j["length"] = number(tm.length);
    j["omega_integral"] = number(tm.omega_integral);
    j["elapsed"] = number(tm.elapsed);
    j["closed"] = tm.closed;
    j["paradox"] = tm.closed ? Json(paradox) : Json();
    j["guard"] = guard;
    emit(j);
    return 0;
  }
  Table tab({"leg", "length", "omega integral", "delta t", "grazes"});
  for (std::size_t i = 0; i < tm.leg_length.size(); ++i) {
    tab.add({std::to_string(i), cell(tm.leg_length[i]), cell(tm.leg_omega[i]), cell(tm.leg_delta[i]),
             yes_no(tm.leg_grazes[i])});
  }
  tab.print(std::cout);
  std::cout << "\nlength " << cell(tm.length) << ", omega integral " << cell(tm.omega_integral) << ", elapsed "
            << cell(tm.elapsed) << '\n';
  std::cout << "closed " << yes_no(tm.closed) << ", paradox " << (tm.closed ? yes_no(paradox) : "n/a") << ", guard "
            << yes_no(guard) << '\n';
  return 0;
}

// infer

struct InferArgs {
  std::string dt_plus, dt_minus, angle;
};

int cmd_infer(const InferArgs& a, Format fmt) {
  const conetime::InferredParameters p = conetime::infer_parameters(
      parse_number_flag("dt-plus", a.dt_plus), parse_number_flag("dt-minus", a.dt_minus), parse_angle_flag(a.angle));
  if (fmt == Format::Records) {
    Json j = header("infer");
    j["theta"] = number(p.theta0);
    j["sigma"] = number(p.sigma);
    j["d"] = number(p.d);
    emit(j);
    return 0;
  }
  Table tab({"parameter", "value"});
  tab.add({"theta", cell(p.theta0)});
  tab.add({"sigma", cell(p.sigma)});
  tab.add({"d", cell(p.d)});
  tab.print(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary flat spacetimes with spinning point particles"};
  app.require_subcommand(1);
  app.fallthrough();
  Format fmt = Format::Table;
  const std::map<std::string, Format> formats{{"table", Format::Table}, {"records", Format::Records}};
  app.add_option("--format", fmt, "Output format: table or records")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->default_str("table");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Validate a surface and list its cone points");
  validate->add_option("surface", va.surface, "Surface document")->required();

  GhArgs ga;
  auto* gh = app.add_subcommand("gh-check", "Check the global hyperbolicity conditions");
  gh->add_option("surface", ga.surface, "Surface document")->required();
  gh->add_option("omega", ga.omega, "Cochain document")->required();
  gh->add_option("--loop-cutoff", ga.loop_cutoff, "Longest loop sampled for the loop condition")
      ->capture_default_str();

  TraceArgs ta;
  auto* tr = app.add_subcommand("trace", "Trace a geodesic from a point and direction");
  tr->add_option("surface", ta.surface, "Surface document")->required();
  tr->add_option("--tri", ta.tri, "Start triangle id")->required();
  tr->add_option("--x", ta.x, "Start x in the triangle chart")->required();
  tr->add_option("--y", ta.y, "Start y in the triangle chart")->required();
  tr->add_option("--dx", ta.dx, "Direction x")->required();
  tr->add_option("--dy", ta.dy, "Direction y")->required();
  tr->add_option("--length", ta.length, "Maximum length")->required();
  tr->add_flag("--segments", ta.segments, "Emit the line-oriented segment stream");

  ReturnArgs ra;
  auto* rt = app.add_subcommand("return-times", "Return times of light rays around one particle");
  rt->add_option("--theta", ra.theta, "Cone angle (float or p/qpi)")->required();
  rt->add_option("--sigma", ra.sigma, "Spin")->required();
  rt->add_option("--d", ra.d, "Observer distance")->required();
  rt->add_option("--rapidity", ra.rapidity, "Observer rapidity")->capture_default_str();
  rt->add_option("--t", ra.t, "Observer proper time of reception")->capture_default_str();

  SignalArgs sa;
  auto* sg = app.add_subcommand("signal", "Elapsed time of a piecewise geodesic light signal");
  sg->add_option("surface", sa.surface, "Surface document")->required();
  sg->add_option("omega", sa.omega, "Cochain document")->required();
  sg->add_option("waypoints", sa.waypoints, "Waypoint document")->required();
  sg->add_option("legs", sa.legs, "Leg document")->required();

  InferArgs ia;
  auto* inf = app.add_subcommand("infer", "Recover particle parameters from two return times");
  inf->add_option("--dt-plus", ia.dt_plus, "Return time for m = +1")->required();
  inf->add_option("--dt-minus", ia.dt_minus, "Return time for m = -1")->required();
  inf->add_option("--angle", ia.angle, "Angle between the two returning rays")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return cmd_validate(va, fmt);
    if (*gh) return cmd_gh_check(ga, fmt);
    if (*tr) return cmd_trace(ta, fmt);
    if (*rt) return cmd_return_times(ra, fmt);
    if (*sg) return cmd_signal(sa, fmt);
    if (*inf) return cmd_infer(ia, fmt);
  } catch (const Error& e) {
    std::cerr << "conetime: " << e.what() << '\n';
    return conetime::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "conetime: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
