#pragma once

// Fields of distributed moving loads: u_i(x) = ∫ U_ik(x - y) g_k(y) dμ(y)
// over a bounded support (volume box, cylinder surface, or a segment of the
// motion axis).
//
// Every solver reduces to an axial integral along a source line parallel to
// z. Along such a line the integrand is singular only where the target's
// retarded cones cross it (y_z = z - m_j d, inverse square root in 3D, jump
// in 2D) and peaked near y_z = z; those points are quadrature breakpoints,
// and 3D cone singularities are removed with y = b - t^2. Transverse
// integrals are polar around the target in 3D, so the 1/R source singularity
// costs nothing when the target lies inside the support.
//
// Densities are read as g = G / c^2 unless is_physical_force is set. G is a
// body force per unit mass (force density / rho).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lamewave/error.hpp"
#include "lamewave/green.hpp"
#include "lamewave/kernels.hpp"
#include "lamewave/medium.hpp"
#include "lamewave/parallel.hpp"
#include "lamewave/quadrature.hpp"

namespace lamewave {

enum class LoadKind { Volume, CylinderSurface, Line };

inline const char* to_string(LoadKind k) {
  switch (k) {
    case LoadKind::Volume: return "volume";
    case LoadKind::CylinderSurface: return "cylinder_surface";
    case LoadKind::Line: return "line";
  }
  return "?";
}

/// Vector density g(y) of a source point y = (x..., z).
struct Density {
  std::function<Vec(const Vec&)> g;
  std::vector<double> z_breaks;  // axial kinks of g

  Vec operator()(const Vec& y) const { return g(y); }

  static Density uniform(const Vec& amp) {
    return {[amp](const Vec&) { return amp; }, {}};
  }

  /// amp exp(-|y - c|^2 / 2w^2) / (2π w^2)^(n/2). With n = 1 only the axial
  /// coordinate enters; otherwise all `dim` coordinates do.
  static Density gaussian(const Vec& amp, const Vec& center, double width, int n, int dim) {
    if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "gaussian width must be > 0");
    const double norm = std::pow(2.0 * kPi * width * width, -0.5 * n);
    return {[=](const Vec& y) {
              double q = 0.0;
              for (int i = (n == 1 ? dim - 1 : 0); i < dim; ++i) q += (y[i] - center[i]) * (y[i] - center[i]);
              const double s = norm * std::exp(-q / (2.0 * width * width));
              return Vec{amp[0] * s, amp[1] * s, amp[2] * s};
            },
            {}};
  }

  /// amp exp(1 - 1/(1 - ρ^2)), ρ = |y - c| / radius; peak value amp. With
  /// `axial` only the axial coordinate enters.
  static Density bump(const Vec& amp, const Vec& center, double radius, bool axial, int dim) {
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "bump radius must be > 0");
    std::vector<double> br;
    if (axial) br = {center[dim - 1] - radius, center[dim - 1] + radius};
    return {[=](const Vec& y) {
              double q = 0.0;
              for (int i = (axial ? dim - 1 : 0); i < dim; ++i) q += (y[i] - center[i]) * (y[i] - center[i]);
              q /= radius * radius;
              if (q >= 1.0) return Vec{};
              const double s = std::exp(1.0 - 1.0 / (1.0 - q));
              return Vec{amp[0] * s, amp[1] * s, amp[2] * s};
            },
            br};
  }

  /// Piecewise-linear in z through (z[i], values[i]); zero outside.
  static Density table(std::vector<double> z, std::vector<Vec> values, int dim) {
    if (z.size() < 2 || z.size() != values.size())
      throw Error(ErrorCode::InvalidArgument, "density table needs >= 2 matching samples");
    if (!std::is_sorted(z.begin(), z.end()) || std::adjacent_find(z.begin(), z.end()) != z.end())
      throw Error(ErrorCode::InvalidArgument, "density table z must increase strictly");
    Density d;
    d.z_breaks = z;
    d.g = [z = std::move(z), values = std::move(values), dim](const Vec& y) {
      const double t = y[dim - 1];
      if (t < z.front() || t > z.back()) return Vec{};
      const auto it = std::upper_bound(z.begin(), z.end(), t);
      const std::size_t i = std::min<std::size_t>(it - z.begin(), z.size() - 1) - 1;
      const double w = (t - z[i]) / (z[i + 1] - z[i]);
      Vec v{};
      for (int k = 0; k < 3; ++k) v[k] = (1.0 - w) * values[i][k] + w * values[i + 1][k];
      return v;
    };
    return d;
  }
};

/// Cylinder cross-section: a circle or a closed polygon in the transverse
/// plane (3D only).
struct CrossSection {
  enum class Shape { Circle, Polygon };
  Shape shape = Shape::Circle;
  double cx = 0.0, cy = 0.0, radius = 0.0;
  std::vector<std::array<double, 2>> vertices;
};

struct LoadSpec {
  LoadKind kind = LoadKind::Line;
  int dim = 3;
  Density density;
  Vec box_lo{}, box_hi{};          // Volume: full box including z
  CrossSection section;            // CylinderSurface
  double z_lo = 0.0, z_hi = 0.0;   // CylinderSurface and Line
  bool is_physical_force = false;  // divide by c^2
  std::string id;
};

struct FieldGrid {
  int dim = 3;
  std::vector<EvalPoint> points;
  std::vector<Vec> values;
  std::vector<double> error;  // quadrature error estimate per point
  std::string regime;
  ElasticMedium medium;
  std::string load_id;
};

struct SolveOptions {
  double rel_tol = 1e-6;
  double hard_error = 1e-3;  // relative; exceeded => QuadratureNonconvergent
  int max_intervals = 400;   // per adaptive level
  int threads = 0;           // 0: default_threads()
};

namespace load_detail {

struct Tols {
  QuadOptions outer, middle, inner;
};

inline Tols make_tols(double rel, double abs_total, double outer_measure, double middle_measure,
                      int max_intervals) {
  Tols t;
  t.outer = {abs_total, rel, max_intervals};
  t.middle = {0.3 * abs_total / std::max(outer_measure, 1e-300), 0.3 * rel, max_intervals};
  t.inner = {0.1 * abs_total / std::max(outer_measure * middle_measure, 1e-300), 0.1 * rel,
             max_intervals};
  return t;
}

inline Vec apply(const Mat& U, const Vec& g, int dim) {
  Vec u{};
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) u[i] += U[i][k] * g[k];
  return u;
}

/// ∫_{zlo}^{zhi} U(x_t - y_x, z_t - w) g(y_x, w) dw for the source line
/// through transverse position y_x. `off` = x_t - y_x (dim - 1 entries).
inline QuadResult<3> axial(const RegimeContext& ctx, const Density& dens, int dim, const Vec& off,
                           const Vec& yx, double z_t, double zlo, double zhi,
                           const QuadOptions& opt) {
  double d2 = 0.0;
  for (int i = 0; i < dim - 1; ++i) d2 += off[i] * off[i];
  const double d = std::sqrt(d2);
  double top = zhi;
  if (ctx.regime == Regime::Supersonic) top = std::min(top, z_t - ctx.m[0] * d);
  if (!(top > zlo)) return {};

  std::vector<double> br{zlo, top};
  std::vector<double> singular;  // right ends needing the sqrt map
  auto add = [&](double b) {
    if (b > zlo && b < top) br.push_back(b);
  };
  add(z_t);
  for (double b : dens.z_breaks) add(b);
  for (int j = 0; j < 2; ++j)
    if (ctx.kind[j] == BranchKind::Hyperbolic) {
      const double b = z_t - ctx.m[j] * d;
      add(b);
      if (dim == 3) singular.push_back(b);
    }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());

  auto f = [&](double w) -> Values<3> {
    EvalPoint p;
    p.dim = dim;
    for (int i = 0; i < dim - 1; ++i) p.coord[i] = off[i];
    p.coord[dim - 1] = z_t - w;
    Vec y = yx;
    y[dim - 1] = w;
    const Vec g = dens(y);
    if (g[0] == 0.0 && g[1] == 0.0 && g[2] == 0.0) return {};
    return apply(green_U_interior(p, ctx), g, dim);
  };

  QuadResult<3> total;
  QuadOptions o = opt;
  o.abs_tol = opt.abs_tol / static_cast<double>(br.size() - 1);
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], b = br[i + 1];
    const bool sq = std::any_of(singular.begin(), singular.end(), [&](double s) { return s == b; });
    const auto r = sq ? integrate_sqrt_right<3>(f, a, b, o) : integrate<3>(f, a, b, o);
    for (int q = 0; q < 3; ++q) total.value[q] += r.value[q];
    total.error += r.error;
    total.evals += r.evals;
    total.converged = total.converged && r.converged;
  }
  return total;
}

/// Parameter interval [t_in, t_out] of the ray p + t(cos φ, sin φ), t >= 0,
/// inside the rectangle [lo, hi]; empty when t_out <= t_in.
inline std::pair<double, double> ray_box(double px, double py, double phi, const Vec& lo,
                                         const Vec& hi) {
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  const double dir[2] = {std::cos(phi), std::sin(phi)};
  const double p[2] = {px, py};
  for (int i = 0; i < 2; ++i) {
    if (dir[i] == 0.0) {
      if (p[i] < lo[i] || p[i] > hi[i]) return {0.0, 0.0};
      continue;
    }
    double a = (lo[i] - p[i]) / dir[i], b = (hi[i] - p[i]) / dir[i];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  return {t0, t1};
}

/// One pass of the volume integral at target p.
inline QuadResult<3> volume_at(const LoadSpec& L, const RegimeContext& ctx, const EvalPoint& p,
                               const Tols& tol) {
  const int dim = L.dim;
  const double z_t = p.z(), zlo = L.box_lo[dim - 1], zhi = L.box_hi[dim - 1];
  if (dim == 2) {
    auto outer = [&](double yx) -> Values<3> {
      const Vec off{p.coord[0] - yx, 0.0, 0.0};
      const Vec ys{yx, 0.0, 0.0};
      return axial(ctx, L.density, 2, off, ys, z_t, zlo, zhi, tol.inner).value;
    };
    std::vector<double> br{L.box_lo[0], L.box_hi[0]};
    if (p.coord[0] > L.box_lo[0] && p.coord[0] < L.box_hi[0]) br.insert(br.begin() + 1, p.coord[0]);
    return integrate_pieces<3>(outer, br, tol.outer);
  }
  const double px = p.coord[0], py = p.coord[1];
  auto middle_for = [&](double phi) -> Values<3> {
    const auto [t0, t1] = ray_box(px, py, phi, L.box_lo, L.box_hi);
    if (!(t1 > t0)) return {};
    const double c = std::cos(phi), s = std::sin(phi);
    auto mid = [&](double rho) -> Values<3> {
      const Vec off{-rho * c, -rho * s, 0.0};
      const Vec ys{px + rho * c, py + rho * s, 0.0};
      Values<3> v = axial(ctx, L.density, 3, off, ys, z_t, zlo, zhi, tol.inner).value;
      for (auto& x : v) x *= rho;
      return v;
    };
    return integrate<3>(mid, t0, t1, tol.middle).value;
  };
  std::vector<double> br{0.0, 2.0 * kPi};
  for (int cx = 0; cx < 2; ++cx)
    for (int cy = 0; cy < 2; ++cy) {
      const double vx = (cx ? L.box_hi[0] : L.box_lo[0]) - px;
      const double vy = (cy ? L.box_hi[1] : L.box_lo[1]) - py;
      if (vx == 0.0 && vy == 0.0) continue;
      double a = std::atan2(vy, vx);
      if (a < 0.0) a += 2.0 * kPi;
      if (a > 0.0 && a < 2.0 * kPi) br.push_back(a);
    }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return integrate_pieces<3>(middle_for, br, tol.outer);
}

struct CurvePiece {
  // y(t) = origin + t * dir for segments; for arcs y = c + R(cos t, sin t)
  bool arc = false;
  double a = 0.0, b = 0.0;
  double ox = 0.0, oy = 0.0, dx = 0.0, dy = 0.0, R = 0.0;
};

inline std::vector<CurvePiece> curve_pieces(const CrossSection& cs) {
  std::vector<CurvePiece> out;
  if (cs.shape == CrossSection::Shape::Circle) {
    if (!(cs.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "cylinder radius must be > 0");
    CurvePiece c;
    c.arc = true;
    c.a = 0.0;
    c.b = 2.0 * kPi;
    c.ox = cs.cx;
    c.oy = cs.cy;
    c.R = cs.radius;
    out.push_back(c);
    return out;
  }
  const auto& v = cs.vertices;
  if (v.size() < 3) throw Error(ErrorCode::InvalidArgument, "polygon needs >= 3 vertices");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    CurvePiece s;
    const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
    if (len == 0.0) throw Error(ErrorCode::InvalidArgument, "degenerate polygon edge");
    s.ox = p[0];
    s.oy = p[1];
    s.dx = (q[0] - p[0]) / len;
    s.dy = (q[1] - p[1]) / len;
    s.b = len;
    out.push_back(s);
  }
  return out;
}

inline double curve_distance(const std::vector<CurvePiece>& cps, double x, double y) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cps) {
    if (c.arc) {
      best = std::min(best, std::abs(std::hypot(x - c.ox, y - c.oy) - c.R));
    } else {
      const double t = std::clamp((x - c.ox) * c.dx + (y - c.oy) * c.dy, c.a, c.b);
      best = std::min(best, std::hypot(x - c.ox - t * c.dx, y - c.oy - t * c.dy));
    }
  }
  return best;
}

inline double curve_length(const std::vector<CurvePiece>& cps) {
  double s = 0.0;
  for (const auto& c : cps) s += c.arc ? c.R * (c.b - c.a) : c.b - c.a;
  return s;
}

inline QuadResult<3> surface_at(const LoadSpec& L, const RegimeContext& ctx, const EvalPoint& p,
                                const std::vector<CurvePiece>& cps, const Tols& tol) {
  const double px = p.coord[0], py = p.coord[1], z_t = p.z();
  QuadResult<3> total;
  for (const auto& c : cps) {
    auto pos = [&](double t, double& x, double& y) {
      if (c.arc) {
        x = c.ox + c.R * std::cos(t);
        y = c.oy + c.R * std::sin(t);
      } else {
        x = c.ox + t * c.dx;
        y = c.oy + t * c.dy;
      }
    };
    const double jac = c.arc ? c.R : 1.0;
    auto f = [&](double t) -> Values<3> {
      double x, y;
      pos(t, x, y);
      const Vec off{px - x, py - y, 0.0};
      const Vec ys{x, y, 0.0};
      Values<3> v = axial(ctx, L.density, 3, off, ys, z_t, L.z_lo, L.z_hi, tol.inner).value;
      for (auto& q : v) q *= jac;
      return v;
    };
    std::vector<double> br{c.a, c.b};
    double tn;  // parameter of the point nearest the target
    if (c.arc) {
      tn = std::atan2(py - c.oy, px - c.ox);
      if (tn < 0.0) tn += 2.0 * kPi;
      for (double t : {tn, std::fmod(tn + kPi, 2.0 * kPi)})
        if (t > c.a && t < c.b) br.push_back(t);
    } else {
      tn = (px - c.ox) * c.dx + (py - c.oy) * c.dy;
      if (tn > c.a && tn < c.b) br.push_back(tn);
    }
    std::sort(br.begin(), br.end());
    QuadOptions o = tol.outer;
    o.abs_tol /= static_cast<double>(cps.size());
    const auto r = integrate_pieces<3>(f, br, o);
    for (int q = 0; q < 3; ++q) total.value[q] += r.value[q];
    total.error += r.error;
    total.evals += r.evals;
    total.converged = total.converged && r.converged;
  }
  return total;
}

inline QuadResult<3> line_at(const LoadSpec& L, const RegimeContext& ctx, const EvalPoint& p,
                             const QuadOptions& opt) {
  Vec off{};
  for (int i = 0; i < L.dim - 1; ++i) off[i] = p.coord[i];
  return axial(ctx, L.density, L.dim, off, Vec{}, p.z(), L.z_lo, L.z_hi, opt);
}

inline void validate(const LoadSpec& L, LoadKind expect) {
  if (L.kind != expect) throw Error(ErrorCode::InvalidArgument, "load kind does not match solver");
  if (L.dim != 2 && L.dim != 3) throw Error(ErrorCode::InvalidArgument, "dim must be 2 or 3");
  if (!L.density.g) throw Error(ErrorCode::InvalidArgument, "load density missing");
  auto finite = [](double v) { return std::isfinite(v); };
  if (expect == LoadKind::Volume) {
    for (int i = 0; i < L.dim; ++i)
      if (!finite(L.box_lo[i]) || !finite(L.box_hi[i]) || L.box_lo[i] > L.box_hi[i])
        throw Error(ErrorCode::InvalidArgument, "volume support must be a bounded box");
  } else if (!finite(L.z_lo) || !finite(L.z_hi) || L.z_lo > L.z_hi) {
    throw Error(ErrorCode::InvalidArgument, "axial support must be a bounded interval");
  }
}

/// Two passes: a coarse one fixes the magnitude scale, the second meets the
/// relative target with absolute floors derived from it.
template <class Pass>
Vec solve_point(Pass&& pass, double rel, double hard, int max_iv, double measure_outer,
                double measure_middle, double& err_out) {
  // Few intervals per level: without an absolute floor, nested relative
  // targets on far tails would otherwise multiply the cost.
  const Tols coarse = make_tols(1e-2, 0.0, measure_outer, measure_middle, 5);
  const QuadResult<3> first = pass(coarse);
  for (double v : first.value)
    if (!std::isfinite(v)) throw Error(ErrorCode::QuadratureNonconvergent, "non-finite quadrature value");
  double scale = quad_detail::max_norm(first.value);
  if (scale == 0.0) {
    err_out = 0.0;
    return {};
  }
  const Tols fine = make_tols(rel, 0.5 * rel * scale, measure_outer, measure_middle, max_iv);
  const QuadResult<3> r = pass(fine);
  for (double v : r.value)
    if (!std::isfinite(v)) throw Error(ErrorCode::QuadratureNonconvergent, "non-finite quadrature value");
  scale = std::max(scale, quad_detail::max_norm(r.value));
  err_out = r.error;
  if (r.error > hard * scale)
    throw Error(ErrorCode::QuadratureNonconvergent,
                "estimated quadrature error " + std::to_string(r.error / scale) + " (relative)");
  return {r.value[0], r.value[1], r.value[2]};
}

template <class PointFn>
FieldGrid run(const LoadSpec& L, const std::vector<EvalPoint>& targets,
              const ElasticMedium& medium, const RegimeContext& ctx, const SolveOptions& opt,
              PointFn&& fn) {
  ctx.require_non_sonic();
  FieldGrid out;
  out.dim = L.dim;
  out.points = targets;
  out.values.assign(targets.size(), Vec{});
  out.error.assign(targets.size(), 0.0);
  out.regime = to_string(ctx.regime);
  out.medium = medium;
  out.load_id = L.id;
  for (const auto& t : targets)
    if (t.dim != L.dim) throw Error(ErrorCode::InvalidArgument, "target dimension mismatch");
  const double scale = L.is_physical_force ? 1.0 / (ctx.c * ctx.c) : 1.0;
  if (L.is_physical_force && !(ctx.c > 0.0))
    throw Error(ErrorCode::InvalidArgument, "physical force scaling needs c > 0");
  parallel_for(
      targets.size(),
      [&](std::size_t i) {
        Vec v = fn(targets[i], out.error[i]);
        for (auto& x : v) x *= scale;
        out.error[i] *= scale;
        out.values[i] = v;
      },
      opt.threads);
  return out;
}

}  // namespace load_detail

inline FieldGrid solve_volume(const LoadSpec& L, const std::vector<EvalPoint>& targets,
                              const ElasticMedium& medium, const RegimeContext& ctx,
                              const SolveOptions& opt = {}) {
  using namespace load_detail;
  validate(L, LoadKind::Volume);
  const int dim = L.dim;
  bool empty = false;
  for (int i = 0; i < dim; ++i) empty = empty || !(L.box_hi[i] > L.box_lo[i]);
  double transverse = 1.0;
  for (int i = 0; i < dim - 1; ++i) transverse *= L.box_hi[i] - L.box_lo[i];
  return run(L, targets, medium, ctx, opt, [&](const EvalPoint& p, double& err) -> Vec {
    if (empty) return {};
    // 3D: outer variable is the angle, so the inner floor spreads over the
    // cross-section area.
    const double mo = dim == 2 ? transverse : 2.0 * kPi;
    const double mm = dim == 2 ? 1.0 : transverse / (2.0 * kPi);
    return solve_point([&](const Tols& t) { return volume_at(L, ctx, p, t); }, opt.rel_tol,
                       opt.hard_error, opt.max_intervals, mo, mm, err);
  });
}

inline FieldGrid solve_surface(const LoadSpec& L, const std::vector<EvalPoint>& targets,
                               const ElasticMedium& medium, const RegimeContext& ctx,
                               const SolveOptions& opt = {}) {
  using namespace load_detail;
  validate(L, LoadKind::CylinderSurface);
  if (L.dim != 3) throw Error(ErrorCode::InvalidArgument, "cylinder loads are 3D");
  const auto cps = curve_pieces(L.section);
  const double len = curve_length(cps);
  const double size = std::max(1.0, len);
  return run(L, targets, medium, ctx, opt, [&](const EvalPoint& p, double& err) -> Vec {
    if (curve_distance(cps, p.coord[0], p.coord[1]) <= 1e-12 * size)
      throw Error(ErrorCode::TargetOnSurface, "target lies on the loaded cylinder");
    if (!(L.z_hi > L.z_lo)) return {};
    return solve_point([&](const Tols& t) { return surface_at(L, ctx, p, cps, t); },
                       opt.rel_tol, opt.hard_error, opt.max_intervals, len, 1.0, err);
  });
}

inline FieldGrid solve_line(const LoadSpec& L, const std::vector<EvalPoint>& targets,
                            const ElasticMedium& medium, const RegimeContext& ctx,
                            const SolveOptions& opt = {}) {
  using namespace load_detail;
  validate(L, LoadKind::Line);
  return run(L, targets, medium, ctx, opt, [&](const EvalPoint& p, double& err) -> Vec {
    if (p.r() <= 1e-12 * (1.0 + std::abs(p.z())))
      throw Error(ErrorCode::TargetOnAxis, "target on the loaded axis");
    if (!(L.z_hi > L.z_lo)) return {};
    return solve_point(
        [&](const Tols& t) { return line_at(L, ctx, p, t.outer); }, opt.rel_tol, opt.hard_error,
        opt.max_intervals, 1.0, 1.0, err);
  });
}

}  // namespace lamewave
