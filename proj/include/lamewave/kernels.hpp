#pragma once

// Scalar kernel family f_km of the moving-load Lamé problem.
//
// f_0 is the fundamental solution of  Δ_x f + (1 - M^2) f_zz + δ(x)δ(z) = 0
// with the radiation condition; f_1 and f_2 (and f_3 on hyperbolic branches)
// are successive z-antiderivatives, d f_k / dz = f_(k-1). Each kernel depends
// on the transverse block x only through r = |x|, so the point is split as
// (x_1, ..., x_(N-1), z).
//
// Elliptic branch (M < 1), a = m r, V = sqrt(z^2 + a^2):
//   N = 3:  4π f_0 = 1/V,  4π f_1 = asinh(z/a),  4π f_2 = z asinh(z/a) - V + a
//   N = 2:  2πm f_0 = -ln V
//           2πm f_1 = -(z ln V - z + a atan(z/a))
//           2πm f_2 = -(V^2 ln V / 2 - 3z^2/4 + a z atan(z/a) - a^2 ln V + a^2 ln a / 2)
// Hyperbolic branch (M > 1), supported in the cone z > a, W = sqrt(z^2 - a^2):
//   N = 3:  2π f_0 = 1/W,  2π f_1 = acosh(z/a),  2π f_2 = z acosh(z/a) - W,
//           2π f_3 = (2z^2 + a^2)/4 acosh(z/a) - 3zW/4
//   N = 2:  2m f_0 = 1,  2m f_1 = z - a,  4m f_2 = (z - a)^2,  12m f_3 = (z - a)^3
//
// Derivatives are propagated exactly with Taylor jets.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "lamewave/error.hpp"
#include "lamewave/jet.hpp"
#include "lamewave/medium.hpp"

namespace lamewave {

inline constexpr double kPi = std::numbers::pi;

/// A point in the moving frame: transverse block x (dim - 1 entries) and the
/// axial coordinate z.
struct EvalPoint {
  int dim = 3;
  std::array<double, 3> coord{};  // x_1 .. x_(dim-1), z; unused tail is zero

  static EvalPoint make2(double x, double z) { return {2, {x, z, 0.0}}; }
  static EvalPoint make3(double x1, double x2, double z) { return {3, {x1, x2, z}}; }
  static EvalPoint from_rz(int dim, double r, double z) {
    return dim == 2 ? make2(r, z) : make3(r, 0.0, z);
  }

  double z() const { return coord[dim - 1]; }
  double r() const {
    double s = 0.0;
    for (int i = 0; i < dim - 1; ++i) s += coord[i] * coord[i];
    return std::sqrt(s);
  }
  double norm() const { return std::hypot(r(), z()); }
};

struct KernelValue {
  int dim = 3;
  double value = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};
  std::array<std::array<std::array<double, 3>, 3>, 3> third{};
  bool in_support = true;
  bool on_front = false;
};

enum class Support { Inside, Outside, OnFront };

inline double front_tolerance(double m, const EvalPoint& p, double scale = 1.0) {
  return 1e-9 * (std::abs(p.z()) + m * p.r() + scale);
}

inline Support support_indicator(BranchKind kind, double m, const EvalPoint& p,
                                 double scale = 1.0) {
  if (kind != BranchKind::Hyperbolic) return Support::Inside;
  const double gap = p.z() - m * p.r();
  const double tol = front_tolerance(m, p, scale);
  if (std::abs(gap) <= tol) return Support::OnFront;
  return gap > 0.0 ? Support::Inside : Support::Outside;
}

/// Euclidean distance from p to the singular set of f_km: the origin for
/// elliptic kernels, the cone z = m r plus the origin for hyperbolic ones,
/// and additionally the axis r = 0 for k >= 1 (logarithmic / kinked there).
inline double singular_distance(BranchKind kind, double m, const EvalPoint& p, int k = 0) {
  const double r = p.r(), z = p.z();
  double d = std::hypot(r, z);
  if (kind == BranchKind::Hyperbolic) {
    const double len = std::sqrt(1.0 + m * m);
    const double t = (r + m * z) / len;  // projection on the generator (1, m)
    if (t > 0.0) d = std::min(d, std::abs(z - m * r) / len);
  }
  if (k >= 1) d = std::min(d, r);
  return d;
}

namespace kernel_detail {

template <int D, int O>
struct Vars {
  using J = Jet<D, O>;
  J s;  // |x|^2
  J z;
};

template <int D, int O>
Vars<D, O> make_vars(const EvalPoint& p) {
  using J = Jet<D, O>;
  Vars<D, O> v;
  v.s = J(0.0);
  for (int i = 0; i < D - 1; ++i) {
    const J xi = J::variable(i, p.coord[i]);
    v.s += xi * xi;
  }
  v.z = J::variable(D - 1, p.coord[D - 1]);
  return v;
}

template <int D, int O>
Jet<D, O> elliptic(int k, double m, const Vars<D, O>& v) {
  using J = Jet<D, O>;
  const J& z = v.z;
  const J a2 = v.s * (m * m);
  if constexpr (D == 3) {
    const J V = sqrt(a2 + z * z);
    if (k == 0) return inv(V) / (4.0 * kPi);
    const J a = sqrt(a2);
    const J as = asinh(z / a);
    if (k == 1) return as / (4.0 * kPi);
    return (z * as - V + a) / (4.0 * kPi);
  } else {
    const J V2 = a2 + z * z;
    const J lnV = log(V2) * 0.5;
    if (k == 0) return lnV * (-1.0 / (2.0 * kPi * m));
    const J a = sqrt(a2);
    const J at = atan(z / a);
    if (k == 1) return (z * lnV - z + a * at) * (-1.0 / (2.0 * kPi * m));
    const J lna = log(a2) * 0.5;
    return (V2 * lnV * 0.5 - z * z * 0.75 + a * z * at - a2 * lnV + a2 * lna * 0.5) *
           (-1.0 / (2.0 * kPi * m));
  }
}

template <int D, int O>
Jet<D, O> hyperbolic(int k, double m, const Vars<D, O>& v) {
  using J = Jet<D, O>;
  const J& z = v.z;
  const J a2 = v.s * (m * m);
  if constexpr (D == 3) {
    const J W = sqrt(z * z - a2);
    if (k == 0) return inv(W) / (2.0 * kPi);
    // acosh(z/a) as ln(z + W) - ln a: stays finite when rounding puts z/a
    // just below 1 for a point that passed the cone test.
    const J ac = log(z + W) - log(a2) * 0.5;
    if (k == 1) return ac / (2.0 * kPi);
    if (k == 2) return (z * ac - W) / (2.0 * kPi);
    return ((z * z * 2.0 + a2) * ac * 0.25 - z * W * 0.75) / (2.0 * kPi);
  } else {
    if (k == 0) return J(1.0 / (2.0 * m));
    const J t = z - sqrt(a2);
    if (k == 1) return t / (2.0 * m);
    if (k == 2) return t * t / (4.0 * m);
    return t * t * t / (12.0 * m);
  }
}

/// x-only and z-linear additions to an elliptic f_2 that make
/// (Δ_x + (1 - M^2) ∂_z^2) F vanish off the axis (term a(x)) and, when
/// `causal_axis` is set, move the axis source from -δ(x)|z|/2 to the causal
/// -δ(x) z θ(z) shared with hyperbolic branches (term z β(x)).
template <int D, int O>
Jet<D, O> elliptic_gauge(double m, bool causal_axis, const Vars<D, O>& v) {
  using J = Jet<D, O>;
  const J r = sqrt(v.s);
  J g;
  if constexpr (D == 3) {
    g = r * (-m / (4.0 * kPi));
    if (causal_axis) g += v.z * log(v.s) * (-1.0 / (8.0 * kPi));
  } else {
    const J A = r * m;
    const J A2 = v.s * (m * m);
    g = (A2 * log(A) - A2 * 1.5) / (4.0 * kPi * m);
    if (causal_axis) g += v.z * r * (-0.25);
  }
  return g;
}

template <int D, int O>
KernelValue to_value(const Jet<D, O>& j, int order) {
  KernelValue kv;
  kv.dim = D;
  kv.value = j.value();
  if (order >= 1)
    for (int a = 0; a < D; ++a) kv.grad[a] = j.d1(a);
  if constexpr (O >= 2) {
    if (order >= 2)
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) kv.hess[a][b] = j.d2(a, b);
  }
  if constexpr (O >= 3) {
    if (order >= 3)
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
          for (int c = 0; c < D; ++c) kv.third[a][b][c] = j.d3(a, b, c);
  }
  return kv;
}

inline void check_point(BranchKind kind, int k, double m, const EvalPoint& p) {
  if (p.dim != 2 && p.dim != 3) throw Error(ErrorCode::InvalidArgument, "dim must be 2 or 3");
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "m must be > 0");
  if (kind == BranchKind::Parabolic)
    throw Error(ErrorCode::SonicDegenerate, "sonic kernels carry δ(z) layers; not evaluable");
  if (k < 0 || k > 3 || (k == 3 && kind != BranchKind::Hyperbolic))
    throw Error(ErrorCode::InvalidArgument, "kernel index out of range");
  for (int i = 0; i < p.dim; ++i)
    if (!std::isfinite(p.coord[i])) throw Error(ErrorCode::InvalidArgument, "non-finite point");
  const double r = p.r();
  if (r == 0.0 && p.z() == 0.0) throw Error(ErrorCode::OnSingularity, "origin");
  if (kind == BranchKind::Hyperbolic && support_indicator(kind, m, p) == Support::OnFront)
    throw Error(ErrorCode::OnSingularity, "point on the Mach cone");
  if (k >= 1 && r == 0.0) throw Error(ErrorCode::OnSingularity, "point on the axis");
}

}  // namespace kernel_detail

/// Strict interior of the cone z > m|x|, decided with the same arithmetic the
/// kernels use for z^2 - m^2|x|^2.
inline bool inside_cone(double m, const EvalPoint& p) {
  double s = 0.0;
  for (int i = 0; i < p.dim - 1; ++i) s += p.coord[i] * p.coord[i];
  const double z = p.z();
  return z > 0.0 && z * z - s * (m * m) > 0.0;
}

/// Jet of f_km at p (zero jet outside the hyperbolic support). Callers must
/// have validated the point with kernel_detail::check_point.
template <int D, int O>
Jet<D, O> kernel_jet(BranchKind kind, int k, double m, const EvalPoint& p) {
  if (kind == BranchKind::Hyperbolic && !inside_cone(m, p)) return Jet<D, O>(0.0);
  const auto v = kernel_detail::make_vars<D, O>(p);
  return kind == BranchKind::Elliptic ? kernel_detail::elliptic<D, O>(k, m, v)
                                      : kernel_detail::hyperbolic<D, O>(k, m, v);
}

inline KernelValue kernel_f(int dim, BranchKind kind, int k, double m, const EvalPoint& p,
                            int order = 2) {
  if (order < 0 || order > 3)
    throw Error(ErrorCode::UnsupportedOrder, "derivatives available up to third order");
  if (p.dim != dim) throw Error(ErrorCode::InvalidArgument, "point dimension mismatch");
  kernel_detail::check_point(kind, k, m, p);
  const bool inside =
      kind != BranchKind::Hyperbolic || support_indicator(kind, m, p) == Support::Inside;
  if (!inside) {
    KernelValue kv;
    kv.dim = dim;
    kv.in_support = false;
    return kv;
  }
  auto eval = [&]<int D>() {
    if (order <= 2) return kernel_detail::to_value<D, 2>(kernel_jet<D, 2>(kind, k, m, p), order);
    return kernel_detail::to_value<D, 3>(kernel_jet<D, 3>(kind, k, m, p), order);
  };
  return dim == 2 ? eval.template operator()<2>() : eval.template operator()<3>();
}

/// |d f_k/dz - f_(k-1)| from the closed forms; zero outside the support.
inline double verify_recurrence(int dim, BranchKind kind, int k, double m, const EvalPoint& p) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "recurrence needs k >= 1");
  const KernelValue hi = kernel_f(dim, kind, k, m, p, 1);
  const KernelValue lo = kernel_f(dim, kind, k - 1, m, p, 0);
  if (!hi.in_support) return 0.0;
  return std::abs(hi.grad[dim - 1] - lo.value);
}

}  // namespace lamewave
