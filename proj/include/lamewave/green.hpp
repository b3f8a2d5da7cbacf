#pragma once

// Green displacement tensor of the moving-load Lamé operator and the stress
// tensors it generates.
//
// Convention: U solves A(∂)U + δ(x')I = 0 with the scaled operator
//   A_ij = (M1^-2 - M2^-2) ∂_i ∂_j + δ_ij (M2^-2 Δ - ∂_z^2),
// so the physical displacement under a body force density G (per unit mass)
// is u = U * (G / c^2).
//
// Assembly: U_ij = M2^2 δ_ij f_02 + ∂_i ∂_j (F_1 - F_2), where F_m is f_2m
// plus, on elliptic branches, the gauge terms of elliptic_gauge().

#include <algorithm>
#include <array>
#include <cmath>

#include "lamewave/error.hpp"
#include "lamewave/kernels.hpp"
#include "lamewave/medium.hpp"

namespace lamewave {

using Vec = std::array<double, 3>;
using Mat = std::array<Vec, 3>;
using Tensor3 = std::array<Mat, 3>;

struct GreenTensor {
  int dim = 3;
  Mat U{};        // U[i][j]
  Tensor3 gradU{};  // gradU[l][i][j] = ∂_l U_ij
  bool in_support = true;
};

struct GreenParts {
  Mat volumetric{};
  Mat shear{};
};

struct StressTensors {
  int dim = 3;
  Tensor3 S{};  // S[k][i][j] = S_ij^k
  Mat Gamma{};  // Gamma[i][k] = S_ij^k n_j
  Mat T{};      // T[i][j] = -Gamma[j][i]
  Vec n{};
};

/// Fourier symbol of U in the ξ_N-cancelled form
///   Ū = M2^2 I / D2 - (M2^2 - M1^2) ξ ξ^T / (D1 D2),  D_j = |ξ|^2 - M_j^2 ξ_N^2.
inline Mat fourier_U(int dim, const Vec& xi, const RegimeContext& ctx) {
  double n2 = 0.0;
  for (int i = 0; i < dim; ++i) n2 += xi[i] * xi[i];
  const double xn2 = xi[dim - 1] * xi[dim - 1];
  const double M1 = ctx.mach[0] * ctx.mach[0], M2 = ctx.mach[1] * ctx.mach[1];
  const double D1 = n2 - M1 * xn2, D2 = n2 - M2 * xn2;
  const double tol = 1e-12 * n2;
  if (n2 == 0.0 || std::abs(D1) <= tol || std::abs(D2) <= tol)
    throw Error(ErrorCode::OnCharacteristic, "Fourier symbol denominator vanishes");
  Mat u{};
  const double b = (M2 - M1) / (D1 * D2);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) u[i][j] = (i == j ? M2 / D2 : 0.0) - b * (xi[i] * xi[j]);
  return u;
}

namespace green_detail {

struct Branches {
  std::array<bool, 2> active{};  // kernel not identically zero at p
  bool any() const { return active[0] || active[1]; }
};

/// With `strict` a point within front tolerance of a cone is rejected;
/// otherwise support is the exact open cone (used inside quadrature, where
/// nodes may approach an integrable cone singularity arbitrarily closely).
inline Branches classify_point(const RegimeContext& ctx, const EvalPoint& p, bool strict = true,
                               bool allow_axis = false) {
  ctx.require_non_sonic();
  if (p.dim != 2 && p.dim != 3) throw Error(ErrorCode::InvalidArgument, "dim must be 2 or 3");
  for (int i = 0; i < p.dim; ++i)
    if (!std::isfinite(p.coord[i])) throw Error(ErrorCode::InvalidArgument, "non-finite point");
  Branches b;
  for (int j = 0; j < 2; ++j) {
    if (!strict) {
      b.active[j] = ctx.kind[j] != BranchKind::Hyperbolic || inside_cone(ctx.m[j], p);
      continue;
    }
    const Support s = support_indicator(ctx.kind[j], ctx.m[j], p);
    if (s == Support::OnFront) throw Error(ErrorCode::OnSingularity, "point on a Mach cone");
    b.active[j] = s == Support::Inside;
  }
  if (b.any() && p.r() == 0.0) {
    if (p.z() == 0.0) throw Error(ErrorCode::OnSingularity, "origin");
    if (!allow_axis) throw Error(ErrorCode::OnSingularity, "axis r = 0 not evaluable");
  }
  return b;
}

/// Near the axis (r <= κ|z|, inside every hyperbolic cone) each F_j carries
/// the branch-independent term T = -(|z| + τz) ln r / 4π in 3D, or
/// -(|z| + τz)|x| / 4 in 2D (τ = 0 subsonic, 1 otherwise). It cancels in
/// F_1 - F_2 but costs precision ~ε z / r^2 in second derivatives.
inline bool near_axis(const RegimeContext& ctx, const EvalPoint& p) {
  double mmax = 1.0;
  for (int j = 0; j < 2; ++j)
    if (ctx.kind[j] == BranchKind::Hyperbolic) mmax = std::max(mmax, ctx.m[j]);
  return p.z() != 0.0 && p.r() <= 0.5 * std::abs(p.z()) / mmax;
}

/// y atan(y) as a series in u = y^2 (u <= 1/4 on the near-axis set).
template <int D, int O>
Jet<D, O> y_atan_y(const Jet<D, O>& u) {
  Jet<D, O> h(0.0);
  for (int k = 40; k >= 0; --k) h = (h * (-1.0) + 1.0 / (2.0 * k + 1.0)) * u;
  return h;
}

/// F_j - T in closed form, regular on the axis.
template <int D, int O>
Jet<D, O> reduced_potential(const RegimeContext& ctx, int j, const EvalPoint& p) {
  using J = Jet<D, O>;
  const auto v = kernel_detail::make_vars<D, O>(p);
  const double m = ctx.m[j];
  const J& z = v.z;
  const J a2 = v.s * (m * m);
  if constexpr (D == 3) {
    if (ctx.kind[j] == BranchKind::Elliptic) {
      const J az = p.z() > 0.0 ? z : -z;
      const J V = sqrt(a2 + z * z);
      return (az * log(az + V) - az * std::log(m) - V) / (4.0 * kPi);
    }
    const J W = sqrt(z * z - a2);
    return (z * log(z + W) - z * std::log(m) - W) / (2.0 * kPi);
  } else {
    if (ctx.kind[j] == BranchKind::Elliptic) {
      const J z2 = z * z;
      const J V2 = a2 + z2;
      const J lnV = log(V2) * 0.5;
      const J h = y_atan_y<D, O>(a2 / z2);
      return (V2 * lnV * 0.5 - z2 * 0.75 - z2 * h - a2 * lnV + a2 * 0.75) *
             (-1.0 / (2.0 * kPi * m));
    }
    return (z * z + a2) / (4.0 * m);
  }
}

/// F_m for branch j (0 = dilatational, 1 = shear). With `reduced` the axis
/// term T is omitted; only differences F_1 - F_2 are then meaningful.
template <int D, int O>
Jet<D, O> potential(const RegimeContext& ctx, int j, const EvalPoint& p, int k = 2,
                    bool reduced = false) {
  if (reduced && k == 2) return reduced_potential<D, O>(ctx, j, p);
  Jet<D, O> f = kernel_jet<D, O>(ctx.kind[j], k, ctx.m[j], p);
  if (ctx.kind[j] == BranchKind::Elliptic && k == 2) {
    const bool causal_axis = ctx.regime == Regime::Transonic;
    f += kernel_detail::elliptic_gauge<D, O>(ctx.m[j], causal_axis,
                                             kernel_detail::make_vars<D, O>(p));
  }
  return f;
}

template <int D, int O>
GreenTensor assemble(const RegimeContext& ctx, const EvalPoint& p, int k_iso, bool strict = true) {
  GreenTensor g;
  g.dim = D;
  const bool reduced = k_iso == 0 && near_axis(ctx, p);
  const Branches b = classify_point(ctx, p, strict, reduced);
  if (!b.any()) {
    g.in_support = false;
    return g;
  }
  using J = Jet<D, O>;
  const J F = (b.active[0] ? potential<D, O>(ctx, 0, p, k_iso + 2, reduced) : J(0.0)) -
              (b.active[1] ? potential<D, O>(ctx, 1, p, k_iso + 2, reduced) : J(0.0));
  const J f0 = b.active[1] ? kernel_jet<D, O>(ctx.kind[1], k_iso, ctx.m[1], p) : J(0.0);
  const double M2 = ctx.mach[1] * ctx.mach[1];
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) g.U[i][j] = F.d2(i, j) + (i == j ? M2 * f0.value() : 0.0);
  if constexpr (O >= 3) {
    for (int l = 0; l < D; ++l)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          g.gradU[l][i][j] = F.d3(l, i, j) + (i == j ? M2 * f0.d1(l) : 0.0);
  }
  return g;
}

}  // namespace green_detail

/// U at p; gradU is filled when `with_gradient` is set.
inline GreenTensor green_U(const EvalPoint& p, const RegimeContext& ctx, bool with_gradient = true) {
  if (p.dim == 2)
    return with_gradient ? green_detail::assemble<2, 3>(ctx, p, 0)
                         : green_detail::assemble<2, 2>(ctx, p, 0);
  return with_gradient ? green_detail::assemble<3, 3>(ctx, p, 0)
                       : green_detail::assemble<3, 2>(ctx, p, 0);
}

/// U without front-tolerance rejection; for quadrature integrands.
inline Mat green_U_interior(const EvalPoint& p, const RegimeContext& ctx) {
  if (p.dim == 2) return green_detail::assemble<2, 2>(ctx, p, 0, false).U;
  return green_detail::assemble<3, 2>(ctx, p, 0, false).U;
}

/// Split U into the dilatational part ∂∂F_1 and the shear part
/// M2^2 δ f_02 - ∂∂F_2.
inline GreenParts green_parts(const EvalPoint& p, const RegimeContext& ctx) {
  GreenParts out;
  const auto b = green_detail::classify_point(ctx, p);
  const double M2 = ctx.mach[1] * ctx.mach[1];
  auto run = [&]<int D>() {
    using J = Jet<D, 2>;
    if (b.active[0]) {
      const J F1 = green_detail::potential<D, 2>(ctx, 0, p);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) out.volumetric[i][j] = F1.d2(i, j);
    }
    if (b.active[1]) {
      const J F2 = green_detail::potential<D, 2>(ctx, 1, p);
      const J f0 = kernel_jet<D, 2>(ctx.kind[1], 0, ctx.m[1], p);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          out.shear[i][j] = -F2.d2(i, j) + (i == j ? M2 * f0.value() : 0.0);
    }
  };
  if (p.dim == 2)
    run.template operator()<2>();
  else
    run.template operator()<3>();
  return out;
}

/// Field of a unit semi-infinite axial line load occupying z >= 0:
/// W(x, z) = ∫_{-∞}^z U(x, w) dw, so ∂_z W = U. Supersonic regime only
/// (built from f_1 and the hyperbolic f_3).
inline GreenTensor line_load_tail(const EvalPoint& p, const RegimeContext& ctx) {
  if (ctx.regime != Regime::Supersonic)
    throw Error(ErrorCode::NotHyperbolic, "semi-infinite line field needs a supersonic load");
  if (p.dim == 2) return green_detail::assemble<2, 3>(ctx, p, 1);
  return green_detail::assemble<3, 3>(ctx, p, 1);
}

/// D[i][l] = ∂_l U_ik for column k.
inline Mat column_gradient(const GreenTensor& g, int k) {
  Mat d{};
  for (int i = 0; i < g.dim; ++i)
    for (int l = 0; l < g.dim; ++l) d[i][l] = g.gradU[l][i][k];
  return d;
}

struct StrainStress {
  Mat eps{};
  Mat sigma{};
};

/// Hooke's law for a displacement gradient grad[i][j] = ∂_j u_i.
inline StrainStress strain_stress(int dim, const Mat& grad, const ElasticMedium& medium) {
  StrainStress out;
  double div = 0.0;
  for (int i = 0; i < dim; ++i) div += grad[i][i];
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      out.eps[i][j] = 0.5 * (grad[i][j] + grad[j][i]);
      out.sigma[i][j] = 2.0 * medium.mu * out.eps[i][j] + (i == j ? medium.lambda * div : 0.0);
    }
  return out;
}

inline StressTensors stress_from_green(const GreenTensor& g, const ElasticMedium& medium,
                                       const Vec& n) {
  const int dim = g.dim;
  double nn = 0.0;
  for (int i = 0; i < dim; ++i) nn += n[i] * n[i];
  if (std::abs(std::sqrt(nn) - 1.0) > 1e-12) throw Error(ErrorCode::BadNormal, "|n| != 1");
  StressTensors st;
  st.dim = dim;
  st.n = n;
  for (int k = 0; k < dim; ++k) {
    const Mat sig = strain_stress(dim, column_gradient(g, k), medium).sigma;
    st.S[k] = sig;
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      for (int j = 0; j < dim; ++j) s += sig[i][j] * n[j];
      st.Gamma[i][k] = s;
    }
  }
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) st.T[i][j] = -st.Gamma[j][i];
  return st;
}

/// S_ij^k = λ δ_ij ∂_m U_mk + μ(∂_j U_ik + ∂_i U_jk), Γ_i^k = S_ij^k n_j,
/// T_i^j = -Γ_j^i.
inline StressTensors stress_family(const EvalPoint& p, const RegimeContext& ctx,
                                   const ElasticMedium& medium, const Vec& n) {
  return stress_from_green(green_U(p, ctx, true), medium, n);
}

}  // namespace lamewave
