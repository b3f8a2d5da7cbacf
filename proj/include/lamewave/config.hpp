#pragma once

// JSON run configuration (nlohmann/json) and the grid and load descriptors
// built from it.
//
//   {
//     "task": "regime" | "green" | "stress" | "field" | "jump" | "validate",
//     "medium": {"lambda": 1, "mu": 1, "rho": 1},
//     "load": {"speed": 0.5, "kind": "line", "is_physical_force": false,
//              "density": {...}, "support": {...}},
//     "grid": {"dimension": 2, "extents": [[-2, 2], [-3, 3]], "resolution": [5, 7]},
//     "tolerances": {"sonic_tol": 1e-9, "front_tol": 1e-9, "quad_target": 1e-6},
//     "stress": {"normal": [1, 0]},
//     "jump": {"dimensions": [2, 3], "branches": [1, 2], "radii": [0.5, 1, 2]},
//     "validate": {"seed": 20240601, "points": 40, "dimensions": [2, 3]}
//   }
//
// density: {"profile": "uniform" | "gaussian" | "bump", "amplitude": [...],
//           "center": [...], "width": w, "axial": bool}
//       or {"profile": "table", "z": [...], "values": [[...], ...]}
// support: {"z": [lo, hi]}                               line
//          {"box": {"lo": [...], "hi": [...]}}           volume
//          {"circle": {"center": [x, y], "radius": R}, "z": [lo, hi]}
//          {"polygon": [[x, y], ...], "z": [lo, hi]}      cylinder surface

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lamewave/error.hpp"
#include "lamewave/kernels.hpp"
#include "lamewave/loads.hpp"
#include "lamewave/medium.hpp"

namespace lamewave {

using json = nlohmann::json;

enum class Task { Regime, Green, Stress, Field, Jump, Validate };

inline const char* to_string(Task t) {
  switch (t) {
    case Task::Regime: return "regime";
    case Task::Green: return "green";
    case Task::Stress: return "stress";
    case Task::Field: return "field";
    case Task::Jump: return "jump";
    case Task::Validate: return "validate";
  }
  return "?";
}

struct GridSpec {
  int dim = 3;
  std::array<std::array<double, 2>, 3> extents{};
  std::array<int, 3> resolution{};

  /// Axis-aligned grid, row-major with z fastest.
  std::vector<EvalPoint> points() const {
    std::vector<EvalPoint> out;
    auto axis = [&](int a, int i) {
      return extents[a][0] + (extents[a][1] - extents[a][0]) * i / (resolution[a] - 1);
    };
    const int n1 = dim == 3 ? resolution[1] : 1;
    for (int i = 0; i < resolution[0]; ++i)
      for (int j = 0; j < n1; ++j)
        for (int k = 0; k < resolution[dim - 1]; ++k) {
          EvalPoint p;
          p.dim = dim;
          p.coord[0] = axis(0, i);
          if (dim == 3) p.coord[1] = axis(1, j);
          p.coord[dim - 1] = axis(dim - 1, k);
          out.push_back(p);
        }
    return out;
  }
};

struct Tolerances {
  double sonic_tol = kDefaultSonicTol;
  double front_tol = 1e-9;
  double quad_target = 1e-6;
};

struct RunConfig {
  Task task = Task::Regime;
  ElasticMedium medium;
  double speed = 0.0;
  std::optional<LoadSpec> load;
  std::optional<GridSpec> grid;
  Tolerances tol;
  Vec normal{};
  std::vector<int> jump_dims{2, 3};
  std::vector<int> jump_branches{1, 2};
  std::vector<double> jump_radii{1.0};
  unsigned long long seed = 20240601ULL;
  int validate_points = 40;
  std::vector<int> validate_dims{2, 3};
  json source;  // the parsed document, echoed into the manifest
};

namespace config_detail {

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorCode::Config, what); }

inline const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail("missing '" + std::string(key) + "' in " + where);
  return j.at(key);
}

inline double num(const json& j, const std::string& what) {
  if (!j.is_number()) fail(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(what + " must be finite");
  return v;
}

inline Vec vec(const json& j, int dim, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(what + " must be an array of " + std::to_string(dim) + " numbers");
  Vec v{};
  for (int i = 0; i < dim; ++i) v[i] = num(j[i], what);
  return v;
}

inline std::array<double, 2> interval(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) fail(what + " must be [lo, hi]");
  const double lo = num(j[0], what), hi = num(j[1], what);
  if (lo > hi) fail(what + " must have lo <= hi");
  return {lo, hi};
}

inline Density density(const json& d, int dim) {
  const std::string profile = need(d, "profile", "load.density").get<std::string>();
  if (profile == "table") {
    const json& z = need(d, "z", "load.density");
    const json& vals = need(d, "values", "load.density");
    if (!z.is_array() || !vals.is_array()) fail("density table needs arrays 'z' and 'values'");
    std::vector<double> zs;
    std::vector<Vec> vs;
    for (const auto& x : z) zs.push_back(num(x, "density z"));
    for (const auto& v : vals) vs.push_back(vec(v, dim, "density value"));
    return Density::table(std::move(zs), std::move(vs), dim);
  }
  const Vec amp = vec(need(d, "amplitude", "load.density"), dim, "load.density.amplitude");
  if (profile == "uniform") return Density::uniform(amp);
  const Vec center = d.contains("center") ? vec(d.at("center"), dim, "load.density.center") : Vec{};
  const double width = num(need(d, "width", "load.density"), "load.density.width");
  const bool axial = d.value("axial", false);
  if (profile == "gaussian") return Density::gaussian(amp, center, width, axial ? 1 : dim, dim);
  if (profile == "bump") return Density::bump(amp, center, width, axial, dim);
  fail("unknown density profile '" + profile + "'");
}

inline LoadSpec load(const json& l, int dim) {
  LoadSpec L;
  L.dim = dim;
  const std::string kind = need(l, "kind", "load").get<std::string>();
  L.is_physical_force = l.value("is_physical_force", false);
  L.id = l.value("id", kind);
  L.density = density(need(l, "density", "load"), dim);
  const json& s = need(l, "support", "load");
  if (kind == "line") {
    L.kind = LoadKind::Line;
    const auto z = interval(need(s, "z", "load.support"), "load.support.z");
    L.z_lo = z[0];
    L.z_hi = z[1];
  } else if (kind == "volume") {
    L.kind = LoadKind::Volume;
    const json& b = need(s, "box", "load.support");
    L.box_lo = vec(need(b, "lo", "load.support.box"), dim, "load.support.box.lo");
    L.box_hi = vec(need(b, "hi", "load.support.box"), dim, "load.support.box.hi");
    for (int i = 0; i < dim; ++i)
      if (L.box_lo[i] > L.box_hi[i]) fail("load.support.box needs lo <= hi");
  } else if (kind == "cylinder_surface") {
    L.kind = LoadKind::CylinderSurface;
    if (dim != 3) fail("cylinder_surface loads need dimension 3");
    const auto z = interval(need(s, "z", "load.support"), "load.support.z");
    L.z_lo = z[0];
    L.z_hi = z[1];
    if (s.contains("circle")) {
      const json& c = s.at("circle");
      const Vec ctr = vec(need(c, "center", "load.support.circle"), 2, "circle center");
      L.section.shape = CrossSection::Shape::Circle;
      L.section.cx = ctr[0];
      L.section.cy = ctr[1];
      L.section.radius = num(need(c, "radius", "load.support.circle"), "circle radius");
      if (!(L.section.radius > 0.0)) fail("circle radius must be > 0");
    } else if (s.contains("polygon")) {
      L.section.shape = CrossSection::Shape::Polygon;
      for (const auto& v : s.at("polygon")) {
        const Vec p = vec(v, 2, "polygon vertex");
        L.section.vertices.push_back({p[0], p[1]});
      }
      if (L.section.vertices.size() < 3) fail("polygon needs >= 3 vertices");
    } else {
      fail("cylinder support needs 'circle' or 'polygon'");
    }
  } else {
    fail("unknown load kind '" + kind + "'");
  }
  return L;
}

inline GridSpec grid(const json& g) {
  GridSpec G;
  G.dim = need(g, "dimension", "grid").get<int>();
  if (G.dim != 2 && G.dim != 3) fail("grid.dimension must be 2 or 3");
  const json& e = need(g, "extents", "grid");
  const json& r = need(g, "resolution", "grid");
  if (!e.is_array() || static_cast<int>(e.size()) != G.dim || !r.is_array() ||
      static_cast<int>(r.size()) != G.dim)
    fail("grid.extents and grid.resolution need one entry per axis");
  for (int a = 0; a < G.dim; ++a) {
    G.extents[a] = interval(e[a], "grid.extents");
    if (!r[a].is_number_integer()) fail("grid.resolution entries must be integers");
    G.resolution[a] = r[a].get<int>();
    if (G.resolution[a] < 2) fail("grid.resolution must be >= 2 per axis");
  }
  return G;
}

}  // namespace config_detail

inline RunConfig parse_config(const json& j) {
  using namespace config_detail;
  RunConfig c;
  c.source = j;
  if (!j.is_object()) fail("config must be a JSON object");
  try {
    const std::string task = need(j, "task", "config").get<std::string>();
    bool known = false;
    for (Task t : {Task::Regime, Task::Green, Task::Stress, Task::Field, Task::Jump, Task::Validate})
      if (task == to_string(t)) {
        c.task = t;
        known = true;
      }
    if (!known) fail("unknown task '" + task + "'");

    const json& m = need(j, "medium", "config");
    c.medium = {num(need(m, "lambda", "medium"), "medium.lambda"),
                num(need(m, "mu", "medium"), "medium.mu"), num(need(m, "rho", "medium"), "medium.rho")};
    if (!c.medium.valid()) fail("medium needs mu > 0, lambda + 2 mu > 0, rho > 0");
    const json& l = need(j, "load", "config");
    c.speed = num(need(l, "speed", "load"), "load.speed");
    if (c.speed < 0.0) fail("load.speed must be >= 0");

    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      c.tol.sonic_tol = t.contains("sonic_tol") ? num(t.at("sonic_tol"), "sonic_tol") : c.tol.sonic_tol;
      c.tol.front_tol = t.contains("front_tol") ? num(t.at("front_tol"), "front_tol") : c.tol.front_tol;
      c.tol.quad_target =
          t.contains("quad_target") ? num(t.at("quad_target"), "quad_target") : c.tol.quad_target;
      if (!(c.tol.sonic_tol >= 0.0) || !(c.tol.front_tol >= 0.0) || !(c.tol.quad_target > 0.0))
        fail("tolerances must be non-negative (quad_target > 0)");
    }
    if (j.contains("validate")) {
      const json& v = j.at("validate");
      c.seed = v.value("seed", c.seed);
      c.validate_points = v.value("points", c.validate_points);
      if (v.contains("dimensions")) c.validate_dims = v.at("dimensions").get<std::vector<int>>();
      if (c.validate_points < 1) fail("validate.points must be >= 1");
      for (int d : c.validate_dims)
        if (d != 2 && d != 3) fail("validate.dimensions entries must be 2 or 3");
    }
    if (j.contains("jump")) {
      const json& v = j.at("jump");
      if (v.contains("dimensions")) c.jump_dims = v.at("dimensions").get<std::vector<int>>();
      for (int d : c.jump_dims)
        if (d != 2 && d != 3) fail("jump.dimensions entries must be 2 or 3");
      if (v.contains("branches")) c.jump_branches = v.at("branches").get<std::vector<int>>();
      if (v.contains("radii")) c.jump_radii = v.at("radii").get<std::vector<double>>();
      for (int b : c.jump_branches)
        if (b != 1 && b != 2) fail("jump.branches entries must be 1 or 2");
      for (double r : c.jump_radii)
        if (!(r > 0.0)) fail("jump.radii entries must be > 0");
    }

    const bool needs_grid = c.task == Task::Green || c.task == Task::Stress || c.task == Task::Field;
    if (needs_grid || j.contains("grid")) c.grid = grid(need(j, "grid", "config"));
    const int dim = c.grid ? c.grid->dim : 3;
    if (c.task == Task::Field) c.load = load(l, dim);
    if (c.task == Task::Stress) {
      c.normal = vec(need(need(j, "stress", "config"), "normal", "stress"), dim, "stress.normal");
      double n2 = 0.0;
      for (int i = 0; i < dim; ++i) n2 += c.normal[i] * c.normal[i];
      if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) fail("stress.normal must be a unit vector");
    }
  } catch (const json::exception& e) {
    fail(std::string("malformed config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    fail(e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace lamewave
