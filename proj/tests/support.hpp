#pragma once

// Shared finite-difference oracles and samplers for the unit and acceptance
// suites.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lamewave/fronts.hpp"
#include "lamewave/green.hpp"
#include "lamewave/kernels.hpp"
#include "lamewave/medium.hpp"

namespace lamewave::testing {

struct KernelBlock {
  int dim;
  BranchKind kind;
  int k;
};

inline std::vector<KernelBlock> all_kernel_blocks() {
  std::vector<KernelBlock> out;
  for (int dim : {2, 3})
    for (BranchKind kind : {BranchKind::Elliptic, BranchKind::Hyperbolic})
      for (int k : {0, 1, 2}) out.push_back({dim, kind, k});
  return out;
}

/// Points with singular_distance >= min_dist; hyperbolic samples are drawn
/// inside the cone (outside it every kernel is identically zero).
inline std::vector<EvalPoint> kernel_points(const KernelBlock& b, double m, int n,
                                            unsigned long long seed, double min_dist = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-6.0, 6.0);
  std::vector<EvalPoint> out;
  while (static_cast<int>(out.size()) < n) {
    EvalPoint p;
    p.dim = b.dim;
    for (int a = 0; a < b.dim; ++a) p.coord[a] = U(rng);
    if (b.kind == BranchKind::Hyperbolic) p.coord[b.dim - 1] = 3.0 * std::abs(p.coord[b.dim - 1]);
    if (singular_distance(b.kind, m, p, b.k) < min_dist) continue;
    if (b.kind == BranchKind::Hyperbolic && !inside_cone(m, p)) continue;
    out.push_back(p);
  }
  return out;
}

inline EvalPoint shifted(EvalPoint p, int a, double d) {
  p.coord[a] += d;
  return p;
}

/// Richardson-extrapolated central difference of g along axis a:
/// (4 D(h/2) - D(h)) / 3, fourth order.
template <class G>
auto richardson(G&& g, const EvalPoint& p, int a, double h) {
  auto central = [&](double s) { return (g(shifted(p, a, s)) - g(shifted(p, a, -s))) / (2.0 * s); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

/// Largest relative gap between the closed-form gradient, Hessian and third
/// derivatives of f_km and Richardson differences of the next lower order.
/// Each order is measured against the largest entry of its block, floored by
/// the previous order over the singular distance: a block that is exactly zero
/// (f_1 is linear in 2D hyperbolic) holds only rounding noise.
inline double kernel_derivative_gap(const KernelBlock& b, double m, const EvalPoint& p) {
  const int dim = b.dim;
  const double sd = singular_distance(b.kind, m, p, b.k);
  const double h = 1e-2 * sd;
  const KernelValue cf = kernel_f(dim, b.kind, b.k, m, p, 3);
  auto value = [&](const EvalPoint& q) { return kernel_f(dim, b.kind, b.k, m, q, 0).value; };
  double gap = 0.0;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (int i = 0; i < dim; ++i) {
    s1 = std::max(s1, std::abs(cf.grad[i]));
    for (int j = 0; j < dim; ++j) {
      s2 = std::max(s2, std::abs(cf.hess[i][j]));
      for (int l = 0; l < dim; ++l) s3 = std::max(s3, std::abs(cf.third[i][j][l]));
    }
  }
  s1 = std::max(s1, std::abs(cf.value) / sd);
  s2 = std::max(s2, s1 / sd);
  s3 = std::max(s3, s2 / sd);
  auto rel = [](double a, double c, double s) { return s > 0.0 ? std::abs(a - c) / s : std::abs(a - c); };
  for (int a = 0; a < dim; ++a) {
    gap = std::max(gap, rel(richardson(value, p, a, h), cf.grad[a], s1));
    for (int i = 0; i < dim; ++i) {
      auto gi = [&](const EvalPoint& q) { return kernel_f(dim, b.kind, b.k, m, q, 1).grad[i]; };
      gap = std::max(gap, rel(richardson(gi, p, a, h), cf.hess[i][a], s2));
      for (int j = 0; j < dim; ++j) {
        auto hij = [&](const EvalPoint& q) { return kernel_f(dim, b.kind, b.k, m, q, 2).hess[i][j]; };
        gap = std::max(gap, rel(richardson(hij, p, a, h), cf.third[i][j][a], s3));
      }
    }
  }
  return gap;
}

/// Relative residual of Δ_x f_0 ± m^2 ∂_z^2 f_0 (+ elliptic, - hyperbolic) by
/// fourth-order five-point differences, against the size of its terms.
inline double kernel_pde_residual(int dim, BranchKind kind, double m, const EvalPoint& p) {
  const double h = 2e-2 * singular_distance(kind, m, p, 0);
  auto f = [&](const EvalPoint& q) { return kernel_f(dim, kind, 0, m, q, 0).value; };
  auto d2 = [&](int a) {
    return (-f(shifted(p, a, 2 * h)) + 16.0 * f(shifted(p, a, h)) - 30.0 * f(p) +
            16.0 * f(shifted(p, a, -h)) - f(shifted(p, a, -2 * h))) /
           (12.0 * h * h);
  };
  double lap = 0.0, lap_abs = 0.0;
  for (int a = 0; a < dim - 1; ++a) {
    const double v = d2(a);
    lap += v;
    lap_abs += std::abs(v);
  }
  const double sign = kind == BranchKind::Elliptic ? 1.0 : -1.0;
  const double zz = m * m * d2(dim - 1);
  const double den = std::max({lap_abs, std::abs(zz), std::abs(f(p)) / (p.norm() * p.norm())});
  return den > 0.0 ? std::abs(lap + sign * zz) / den : 0.0;
}

/// Random one-sided traces at a common point. u is continuous and the
/// gradient jumps by `amplitude` times a jump that satisfies the kinematic and
/// dynamic conditions on the front: [∂_j u] = a h_j with ρV² a = (λ+μ)(a·h)h + μ a,
/// i.e. a along h when V = c1 or a ⊥ h when V = c2.
inline FrontTraces random_traces(int dim, const FrontGeometry& g, std::mt19937_64& rng,
                                 double amplitude) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  FrontTraces t;
  t.dim = dim;
  for (int i = 0; i < dim; ++i) {
    t.point_plus[i] = t.point_minus[i] = U(rng);
    t.u_plus[i] = U(rng);
    for (int j = 0; j < dim; ++j) t.grad_plus[i][j] = U(rng);
  }
  Vec a{};
  if (g.branch == 1) {
    for (int i = 0; i < dim; ++i) a[i] = g.h[i];
  } else {
    Vec v{};
    for (int i = 0; i < dim; ++i) v[i] = U(rng);
    double vh = 0.0;
    for (int i = 0; i < dim; ++i) vh += v[i] * g.h[i];
    for (int i = 0; i < dim; ++i) a[i] = v[i] - vh * g.h[i];
  }
  t.u_minus = t.u_plus;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) t.grad_minus[i][j] = t.grad_plus[i][j] - amplitude * a[i] * g.h[j];
  return t;
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

}  // namespace lamewave::testing
