#pragma once

// Wave fronts and jump conditions.
//
// Sign conventions. In the moving frame a front F has spatial unit normal h
// with h_N >= 0 and [f] = f(+) - f(-), the + side being the one h points to.
// The fixed-frame wave vector is m = -h (the front travels against h) and
// the front speed is V = c h_N. With ∂_t = c ∂_N this turns the fixed-frame
// conditions
//   [m_j ∂_t u_i + V u_i,j] = 0,   [σ_ij m_j + ρ V ∂_t u_i] = 0
// into the moving-frame ones
//   [h_N u_i,j - h_j u_i,N] = 0,   [σ_ij h_j - ρ c^2 h_N u_i,N] = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "lamewave/error.hpp"
#include "lamewave/green.hpp"
#include "lamewave/medium.hpp"

namespace lamewave {

enum class WaveClass { Continuous, WeakShock, Shock, StrongShock };

inline const char* to_string(WaveClass w) {
  switch (w) {
    case WaveClass::Continuous: return "Continuous";
    case WaveClass::WeakShock: return "WeakShock";
    case WaveClass::Shock: return "Shock";
    case WaveClass::StrongShock: return "StrongShock";
  }
  return "?";
}

struct FrontGeometry {
  int dim = 3;
  std::array<double, 4> nu{};  // (ν_1 .. ν_N, ν_t), unit in R^(N+1); ν_t stored at index dim
  Vec h{};                     // moving-frame unit normal, h_N >= 0
  Vec m_wave{};                // fixed-frame wave vector, m = -h
  double V = 0.0;              // front speed, V = -ν_t / |ν|_N
  int branch = 1;              // 1: dilatational cone, 2: shear cone

  double nu_t() const { return nu[dim]; }
};

/// det{(c1^2 - c2^2) ν_i ν_j + δ_ij (c2^2 |ν|_N^2 - ν_t^2)} normalised by c1^2 c2^(2(N-1)) |ν|_N^(2N).
inline double characteristic_determinant(const ElasticMedium& medium, int dim,
                                         const std::array<double, 4>& nu) {
  const WaveSpeeds s = wave_speeds(medium);
  double n2 = 0.0;
  for (int i = 0; i < dim; ++i) n2 += nu[i] * nu[i];
  const double nt2 = nu[dim] * nu[dim];
  Mat a{};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a[i][j] = (s.c1 * s.c1 - s.c2 * s.c2) * nu[i] * nu[j] +
                (i == j ? s.c2 * s.c2 * n2 - nt2 : 0.0);
  double det = 0.0;
  if (dim == 2)
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  else
    det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
          a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
          a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  const double scale = s.c1 * s.c1 * std::pow(s.c2 * s.c2, dim - 1) * std::pow(n2, dim);
  return det / scale;
}

/// Roots ν_t of the characteristic equation for a spatial direction, with
/// multiplicity: ±c1|ν|, and ±c2|ν| repeated N-1 times. Sorted descending.
inline std::vector<double> characteristic_roots(const ElasticMedium& medium, int dim,
                                                const Vec& nu_spatial) {
  const WaveSpeeds s = wave_speeds(medium);
  double n = 0.0;
  for (int i = 0; i < dim; ++i) n += nu_spatial[i] * nu_spatial[i];
  n = std::sqrt(n);
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "zero spatial normal");
  std::vector<double> roots{s.c1 * n, -s.c1 * n};
  for (int k = 0; k < dim - 1; ++k) {
    roots.push_back(s.c2 * n);
    roots.push_back(-s.c2 * n);
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

/// Geometry of the Mach cone z = m_branch |x| at the generator whose
/// transverse direction is `xhat` (unit, dim-1 entries).
inline FrontGeometry mach_cone(int branch, const RegimeContext& ctx, int dim, const Vec& xhat) {
  if (branch != 1 && branch != 2) throw Error(ErrorCode::InvalidArgument, "branch is 1 or 2");
  const int j = branch - 1;
  if (ctx.kind[j] != BranchKind::Hyperbolic)
    throw Error(ErrorCode::NotHyperbolic, "Mach cone needs M_branch > 1");
  const double m = ctx.m[j], M = ctx.mach[j];
  FrontGeometry g;
  g.dim = dim;
  g.branch = branch;
  double xn = 0.0;
  for (int i = 0; i < dim - 1; ++i) xn += xhat[i] * xhat[i];
  xn = std::sqrt(xn);
  if (xn == 0.0) throw Error(ErrorCode::InvalidArgument, "zero transverse direction");
  for (int i = 0; i < dim - 1; ++i) g.h[i] = -m * xhat[i] / (xn * M);
  g.h[dim - 1] = 1.0 / M;
  for (int i = 0; i < dim; ++i) g.m_wave[i] = -g.h[i];
  g.V = ctx.c * g.h[dim - 1];
  const double s = 1.0 / std::sqrt(1.0 + g.V * g.V);
  for (int i = 0; i < dim; ++i) g.nu[i] = g.m_wave[i] * s;
  g.nu[dim] = -g.V * s;
  return g;
}

/// Mach angle between the axis of motion and the cone surface: tan = 1/m.
inline double mach_angle(double m) { return std::atan2(1.0, m); }

/// One-sided traces of u and ∂_j u_i at a front point. `hess_*` are optional
/// second-derivative traces (hess[i][j][k] = ∂_j ∂_k u_i) used only to tell a
/// weak shock from a continuous field.
struct FrontTraces {
  int dim = 3;
  Vec point_plus{}, point_minus{};
  Vec u_plus{}, u_minus{};
  Mat grad_plus{}, grad_minus{};  // grad[i][j] = ∂_j u_i
  std::optional<Tensor3> hess_plus, hess_minus;
};

struct JumpReport {
  int dim = 3;
  Vec jump_u{};
  Mat kinematic_residual{};
  Vec dynamic_residual{};
  Vec traction_jump{};  // [σ_ij m_j]
  WaveClass classification = WaveClass::Continuous;
};

struct LayerDensities {
  Vec d1{};  // [σ_ij h_j - ρ c^2 h_N u_i,N]
  Mat d2{};  // [λ u_k h_k δ_ij + μ (u_i h_j + u_j h_i)]
  Vec d3{};  // [u_i] h_N
};

namespace front_detail {

inline void check_points(const FrontTraces& t) {
  double d = 0.0, s = 1.0;
  for (int i = 0; i < t.dim; ++i) {
    d = std::max(d, std::abs(t.point_plus[i] - t.point_minus[i]));
    s = std::max(s, std::abs(t.point_plus[i]));
  }
  if (d > 1e-9 * s) throw Error(ErrorCode::MismatchedTraces, "traces taken at different points");
}

inline double max_abs(const Vec& v, int dim) {
  double m = 0.0;
  for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

inline double max_abs(const Mat& a, int dim) {
  double m = 0.0;
  for (int i = 0; i < dim; ++i) m = std::max(m, max_abs(a[i], dim));
  return m;
}

}  // namespace front_detail

inline constexpr double kJumpTol = 1e-8;

inline JumpReport jump_conditions(const FrontTraces& t, const FrontGeometry& g,
                                  const ElasticMedium& medium, const RegimeContext& ctx,
                                  double jump_tol = kJumpTol) {
  using front_detail::max_abs;
  front_detail::check_points(t);
  const int dim = t.dim;
  const int N = dim - 1;
  const double rc2 = medium.rho * ctx.c * ctx.c;
  const StrainStress sp = strain_stress(dim, t.grad_plus, medium);
  const StrainStress sm = strain_stress(dim, t.grad_minus, medium);
  JumpReport rep;
  rep.dim = dim;
  Mat dgrad{};
  for (int i = 0; i < dim; ++i) {
    rep.jump_u[i] = t.u_plus[i] - t.u_minus[i];
    for (int j = 0; j < dim; ++j) dgrad[i][j] = t.grad_plus[i][j] - t.grad_minus[i][j];
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j)
      rep.kinematic_residual[i][j] = g.h[N] * dgrad[i][j] - g.h[j] * dgrad[i][N];
    double dyn = -rc2 * g.h[N] * dgrad[i][N], trac = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double ds = sp.sigma[i][j] - sm.sigma[i][j];
      dyn += ds * g.h[j];
      trac += ds * g.m_wave[j];
    }
    rep.dynamic_residual[i] = dyn;
    rep.traction_jump[i] = trac;
  }
  const double stress_scale = std::max({1.0, max_abs(sp.sigma, dim), max_abs(sm.sigma, dim)});
  const double grad_scale = std::max({1.0, max_abs(t.grad_plus, dim), max_abs(t.grad_minus, dim)});
  const double u_scale = std::max({1.0, max_abs(t.u_plus, dim), max_abs(t.u_minus, dim)});
  if (max_abs(rep.jump_u, dim) > jump_tol * u_scale)
    rep.classification = WaveClass::StrongShock;  // [u] != 0: the traction carries a layer
  else if (max_abs(rep.traction_jump, dim) > jump_tol * stress_scale)
    rep.classification = WaveClass::Shock;
  else {
    bool second_jump = false;
    if (t.hess_plus && t.hess_minus) {
      double hs = 1.0, hd = 0.0;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k) {
            hs = std::max({hs, std::abs((*t.hess_plus)[i][j][k]), std::abs((*t.hess_minus)[i][j][k])});
            hd = std::max(hd, std::abs((*t.hess_plus)[i][j][k] - (*t.hess_minus)[i][j][k]));
          }
      second_jump = hd > jump_tol * hs;
    }
    const bool first_jump = max_abs(dgrad, dim) > jump_tol * grad_scale;
    rep.classification =
        (first_jump || second_jump) ? WaveClass::WeakShock : WaveClass::Continuous;
  }
  return rep;
}

/// Densities of the three independent layers a front contributes when the
/// equation of motion is applied to a piecewise-smooth field in the
/// generalized sense. All three vanish iff [u] = 0 and momentum balances.
inline LayerDensities layer_densities(const FrontTraces& t, const FrontGeometry& g,
                                      const ElasticMedium& medium, const RegimeContext& ctx) {
  const JumpReport rep = jump_conditions(t, g, medium, ctx);
  const int dim = t.dim;
  LayerDensities d;
  d.d1 = rep.dynamic_residual;
  double uh = 0.0;
  for (int k = 0; k < dim; ++k) uh += rep.jump_u[k] * g.h[k];
  for (int i = 0; i < dim; ++i) {
    d.d3[i] = rep.jump_u[i] * g.h[dim - 1];
    for (int j = 0; j < dim; ++j)
      d.d2[i][j] = (i == j ? medium.lambda * uh : 0.0) +
                   medium.mu * (rep.jump_u[i] * g.h[j] + rep.jump_u[j] * g.h[i]);
  }
  return d;
}

struct FixedFrameTraces {
  int dim = 3;
  Vec ut_plus{}, ut_minus{};      // ∂u_i/∂t
  Mat grad_plus{}, grad_minus{};  // ∂_j u_i
};

struct FixedFrameResiduals {
  Mat kinematic{};  // [m_j ∂_t u_i + V ∂_j u_i]
  Vec dynamic{};    // [σ_ij m_j + ρ V ∂_t u_i]
};

inline FixedFrameResiduals compat_fixed_frame(const FixedFrameTraces& t, const Vec& m_wave,
                                              double V, const ElasticMedium& medium) {
  const int dim = t.dim;
  double mn = 0.0;
  for (int i = 0; i < dim; ++i) mn += m_wave[i] * m_wave[i];
  if (std::abs(std::sqrt(mn) - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "wave vector must be unit");
  const WaveSpeeds s = wave_speeds(medium);
  const double av = std::abs(V);
  if (std::abs(av - s.c1) > 1e-9 * s.c1 && std::abs(av - s.c2) > 1e-9 * s.c2)
    throw Error(ErrorCode::BadSpeed, "front speed must be ±c1 or ±c2");
  const StrainStress sp = strain_stress(dim, t.grad_plus, medium);
  const StrainStress sm = strain_stress(dim, t.grad_minus, medium);
  FixedFrameResiduals r;
  for (int i = 0; i < dim; ++i) {
    const double dut = t.ut_plus[i] - t.ut_minus[i];
    double dyn = medium.rho * V * dut;
    for (int j = 0; j < dim; ++j) {
      r.kinematic[i][j] = m_wave[j] * dut + V * (t.grad_plus[i][j] - t.grad_minus[i][j]);
      dyn += (sp.sigma[i][j] - sm.sigma[i][j]) * m_wave[j];
    }
    r.dynamic[i] = dyn;
  }
  return r;
}

/// Classification of the Green field at a Mach cone, probed through the
/// field W of a semi-infinite uniform axial line load (∂_z W = U), whose
/// traction jump carries the cone behaviour of U itself.
struct GreenFrontReport {
  int branch = 1;
  std::vector<double> offsets;
  std::vector<double> traction_jump;  // |[σ(W) m]| at each offset
  std::vector<double> growth;         // ratios between successive offsets
  WaveClass classification = WaveClass::Continuous;
  Vec extrapolated_traction{};        // finite case only
  double kinematic_residual = 0.0;    // extrapolated max-abs residuals (finite case)
  double dynamic_residual = 0.0;
  double stress_scale = 0.0;
};

inline constexpr std::array<double, 3> kFrontOffsets{1e-3, 5e-4, 2.5e-4};

/// Growth factor per halving above which a one-sided blowup counts as
/// infinite (power-law exponent >= 1/4).
inline const double kBlowupRatio = std::pow(2.0, 0.25);

inline GreenFrontReport classify_green_front(const RegimeContext& ctx, const ElasticMedium& medium,
                                             int dim, int branch = 1, double r0 = 1.0,
                                             double scale = 1.0) {
  if (ctx.regime != Regime::Supersonic)
    throw Error(ErrorCode::NotHyperbolic, "Green front probe needs a supersonic load");
  Vec xhat{};
  xhat[0] = 1.0;
  const FrontGeometry g = mach_cone(branch, ctx, dim, xhat);
  const double m = ctx.m[branch - 1];
  GreenFrontReport rep;
  rep.branch = branch;
  const Vec base = dim == 2 ? Vec{r0, m * r0, 0.0} : Vec{r0, 0.0, m * r0};
  std::vector<JumpReport> reports;
  std::vector<double> scales;
  for (double e : kFrontOffsets) {
    const double eps = e * scale;
    FrontTraces t;
    t.dim = dim;
    EvalPoint pp{dim, {}}, pm{dim, {}};
    for (int i = 0; i < dim; ++i) {
      pp.coord[i] = base[i] + eps * g.h[i];
      pm.coord[i] = base[i] - eps * g.h[i];
    }
    const GreenTensor wp = line_load_tail(pp, ctx);
    const GreenTensor wm = line_load_tail(pm, ctx);
    t.point_plus = t.point_minus = base;
    // axial column; the transverse columns behave alike
    const int k = dim - 1;
    for (int i = 0; i < dim; ++i) {
      t.u_plus[i] = wp.U[i][k];
      t.u_minus[i] = wm.U[i][k];
    }
    t.grad_plus = column_gradient(wp, k);
    t.grad_minus = column_gradient(wm, k);
    const JumpReport jr = jump_conditions(t, g, medium, ctx);
    double mag = 0.0;
    for (int i = 0; i < dim; ++i) mag += jr.traction_jump[i] * jr.traction_jump[i];
    rep.offsets.push_back(eps);
    rep.traction_jump.push_back(std::sqrt(mag));
    reports.push_back(jr);
    const StrainStress sp = strain_stress(dim, t.grad_plus, medium);
    scales.push_back(std::max(front_detail::max_abs(sp.sigma, dim), 1e-300));
  }
  bool blowup = true;
  for (std::size_t i = 1; i < rep.traction_jump.size(); ++i) {
    const double ratio = rep.traction_jump[i] / std::max(rep.traction_jump[i - 1], 1e-300);
    rep.growth.push_back(ratio);
    blowup = blowup && ratio >= kBlowupRatio;
  }
  if (blowup) {
    rep.classification = WaveClass::StrongShock;
    return rep;
  }
  // Richardson extrapolation to the front, linear in the offset (halving steps).
  const std::size_t n = reports.size();
  const auto& a = reports[n - 2];
  const auto& b = reports[n - 1];
  double kin = 0.0, dyn = 0.0, trac = 0.0;
  for (int i = 0; i < dim; ++i) {
    rep.extrapolated_traction[i] = 2.0 * b.traction_jump[i] - a.traction_jump[i];
    trac = std::max(trac, std::abs(rep.extrapolated_traction[i]));
    dyn = std::max(dyn, std::abs(2.0 * b.dynamic_residual[i] - a.dynamic_residual[i]));
    for (int j = 0; j < dim; ++j)
      kin = std::max(kin, std::abs(2.0 * b.kinematic_residual[i][j] - a.kinematic_residual[i][j]));
  }
  rep.kinematic_residual = kin;
  rep.dynamic_residual = dyn;
  rep.stress_scale = scales.back();
  rep.classification = trac > kJumpTol * std::max(1.0, rep.stress_scale) ? WaveClass::Shock
                                                                         : WaveClass::WeakShock;
  return rep;
}

}  // namespace lamewave
