#pragma once

// Independent checks of computed fields: finite-difference operator
// residuals, weak-form pairing against bump test functions, numerical
// inverse Fourier transform of the symbol, and the static Kelvin limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lamewave/error.hpp"
#include "lamewave/green.hpp"
#include "lamewave/jet.hpp"
#include "lamewave/loads.hpp"
#include "lamewave/medium.hpp"
#include "lamewave/parallel.hpp"
#include "lamewave/quadrature.hpp"

namespace lamewave {

struct ValidationReport {
  std::string id;
  int points = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double runtime = 0.0;  // seconds
};

using FieldSampler = std::function<Vec(const EvalPoint&)>;

namespace oracle_detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline void finish(ValidationReport& r, const Stopwatch& sw) {
  r.pass = r.max_residual <= r.tolerance;
  r.runtime = sw.seconds();
}

inline EvalPoint shifted(EvalPoint p, int a, double da, int b = -1, double db = 0.0) {
  p.coord[a] += da;
  if (b >= 0) p.coord[b] += db;
  return p;
}

/// Second-order central Hessians of every component: H[i][a][b] = ∂_a ∂_b u_i.
inline std::array<Mat, 3> hessians(const FieldSampler& u, const EvalPoint& p, double h) {
  const int dim = p.dim;
  std::array<Mat, 3> H{};
  const Vec u0 = u(p);
  for (int a = 0; a < dim; ++a) {
    const Vec up = u(shifted(p, a, h)), um = u(shifted(p, a, -h));
    for (int i = 0; i < dim; ++i) H[i][a][a] = (up[i] - 2.0 * u0[i] + um[i]) / (h * h);
    for (int b = a + 1; b < dim; ++b) {
      const Vec pp = u(shifted(p, a, h, b, h)), pm = u(shifted(p, a, h, b, -h));
      const Vec mp = u(shifted(p, a, -h, b, h)), mm = u(shifted(p, a, -h, b, -h));
      for (int i = 0; i < dim; ++i)
        H[i][a][b] = H[i][b][a] = (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h);
    }
  }
  return H;
}

/// Richardson combination of step h and h/2: fourth order.
inline std::array<Mat, 3> hessians4(const FieldSampler& u, const EvalPoint& p, double h) {
  const auto A = hessians(u, p, h), B = hessians(u, p, 0.5 * h);
  std::array<Mat, 3> H{};
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) H[i][a][b] = (4.0 * B[i][a][b] - A[i][a][b]) / 3.0;
  return H;
}

struct OperatorTerms {
  Vec value{};  // (A u)_i + g_i
  Vec scale{};  // sum of magnitudes of the terms of row i
};

/// (A u)_i = (M1^-2 - M2^-2) ∂_i div u + M2^-2 Δu_i - ∂_z^2 u_i.
inline OperatorTerms apply_operator(const std::array<Mat, 3>& H, const Vec& g, int dim,
                                    const RegimeContext& ctx) {
  const double i1 = 1.0 / (ctx.mach[0] * ctx.mach[0]), i2 = 1.0 / (ctx.mach[1] * ctx.mach[1]);
  const int z = dim - 1;
  OperatorTerms t;
  for (int i = 0; i < dim; ++i) {
    double grad_div = 0.0, grad_div_abs = 0.0, lap = 0.0, lap_abs = 0.0;
    for (int j = 0; j < dim; ++j) {
      grad_div += H[j][i][j];
      grad_div_abs += std::abs(H[j][i][j]);
      lap += H[i][j][j];
      lap_abs += std::abs(H[i][j][j]);
    }
    t.value[i] = (i1 - i2) * grad_div + i2 * lap - H[i][z][z] + g[i];
    t.scale[i] = std::abs(i1 - i2) * grad_div_abs + i2 * lap_abs + std::abs(H[i][z][z]) + std::abs(g[i]);
  }
  return t;
}

}  // namespace oracle_detail

inline const std::vector<double> kDefaultSteps{3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5};

/// Relative residual of A(∂)u + g at p: the best over the step search
/// h ∈ steps·length. The denominator adds |u|/length^2 so fields whose
/// second derivatives vanish (piecewise-constant 2D supersonic U) report
/// roundoff, not 0/0. Fields computed by quadrature carry noise at the
/// quadrature tolerance and need the larger steps only.
inline double operator_residual_at(const FieldSampler& u, const EvalPoint& p,
                                   const RegimeContext& ctx, double length,
                                   const FieldSampler& g = {},
                                   const std::vector<double>& steps = kDefaultSteps) {
  const int dim = p.dim;
  const Vec gv = g ? g(p) : Vec{};
  const Vec u0 = u(p);
  double umax = 0.0;
  for (int i = 0; i < dim; ++i) umax = std::max(umax, std::abs(u0[i]));
  double best = std::numeric_limits<double>::infinity();
  for (double f : steps) {
    const auto H = oracle_detail::hessians4(u, p, f * length);
    const auto t = oracle_detail::apply_operator(H, gv, dim, ctx);
    double num = 0.0, den = umax / (length * length);
    for (int i = 0; i < dim; ++i) {
      num = std::max(num, std::abs(t.value[i]));
      den = std::max(den, t.scale[i]);
    }
    best = std::min(best, den > 0.0 ? num / den : 0.0);
  }
  return best;
}

/// Max operator residual over the points; points where the sampler throws
/// (singular set) are skipped.
inline ValidationReport op_residual(const FieldSampler& u, const RegimeContext& ctx, int dim,
                                    const std::vector<EvalPoint>& points, double tol,
                                    std::function<double(const EvalPoint&)> length = {},
                                    const FieldSampler& g = {}, std::string id = "op_residual",
                                    int threads = 0,
                                    const std::vector<double>& steps = kDefaultSteps) {
  oracle_detail::Stopwatch sw;
  ValidationReport r;
  r.id = std::move(id);
  r.tolerance = tol;
  std::vector<double> res(points.size(), -1.0);
  parallel_for(
      points.size(),
      [&](std::size_t k) {
        const EvalPoint& p = points[k];
        if (p.dim != dim) throw Error(ErrorCode::InvalidArgument, "point dimension mismatch");
        try {
          res[k] = operator_residual_at(u, p, ctx, length ? length(p) : 1.0, g, steps);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::OnSingularity) throw;
        }
      },
      threads);
  for (double v : res)
    if (v >= 0.0) {
      ++r.points;
      r.max_residual = std::max(r.max_residual, v);
    }
  if (r.points == 0) throw Error(ErrorCode::AllPointsExcluded, "every sample point was excluded");
  oracle_detail::finish(r, sw);
  return r;
}

/// Uniform points in [-half, half]^dim at distance >= min_dist from every
/// singular set of U. With `inside_cones` only points inside the cone of
/// every hyperbolic branch are kept (z is then drawn from [0, 2 half]).
inline std::vector<EvalPoint> sample_points(const RegimeContext& ctx, int dim, int n,
                                            unsigned long long seed, double min_dist = 1.0,
                                            double half = 4.0, bool inside_cones = false) {
  ctx.require_non_sonic();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-half, half);
  std::vector<EvalPoint> out;
  for (long tries = 0; static_cast<int>(out.size()) < n; ++tries) {
    if (tries > 1000L * n + 100000L)
      throw Error(ErrorCode::AllPointsExcluded, "no admissible sample points in the box");
    EvalPoint p;
    p.dim = dim;
    for (int a = 0; a < dim; ++a) p.coord[a] = U(rng);
    if (inside_cones) p.coord[dim - 1] += half;
    bool ok = true;
    for (int j = 0; j < 2 && ok; ++j) {
      ok = singular_distance(ctx.kind[j], ctx.m[j], p) >= min_dist;
      if (ok && inside_cones && ctx.kind[j] == BranchKind::Hyperbolic) ok = inside_cone(ctx.m[j], p);
    }
    if (ok) out.push_back(p);
  }
  return out;
}

/// Vector test function φ_i = amp_i (1 + slope·(x - c)/R) b(x) with the bump
/// b = exp(1 - 1/(1 - |x - c|^2/R^2)) inside the ball of radius R.
struct TestFunction {
  int dim = 3;
  Vec center{};
  double radius = 1.0;
  Vec amp{};
  Vec slope{};

  template <int D>
  std::array<Jet<D, 2>, 3> jets(const EvalPoint& p) const {
    using J = Jet<D, 2>;
    J q(0.0), lin(1.0);
    for (int a = 0; a < D; ++a) {
      const J t = (J::variable(a, p.coord[a]) - center[a]) / radius;
      q += t * t;
      lin += t * slope[a];
    }
    std::array<J, 3> out{J(0.0), J(0.0), J(0.0)};
    if (q.value() >= 1.0) return out;
    const J b = exp(1.0 - inv(1.0 - q));
    for (int i = 0; i < D; ++i) out[i] = lin * b * amp[i];
    return out;
  }

  Vec value(const EvalPoint& p) const {
    Vec v{};
    auto run = [&]<int D>() {
      const auto j = jets<D>(p);
      for (int i = 0; i < D; ++i) v[i] = j[i].value();
    };
    if (dim == 2) run.template operator()<2>();
    else run.template operator()<3>();
    return v;
  }

  /// (A φ)_i and the row scale of its terms.
  oracle_detail::OperatorTerms apply_A(const EvalPoint& p, const RegimeContext& ctx) const {
    std::array<Mat, 3> H{};
    auto run = [&]<int D>() {
      const auto j = jets<D>(p);
      for (int i = 0; i < D; ++i)
        for (int a = 0; a < D; ++a)
          for (int b = 0; b < D; ++b) H[i][a][b] = j[i].d2(a, b);
    };
    if (dim == 2) run.template operator()<2>();
    else run.template operator()<3>();
    return oracle_detail::apply_operator(H, Vec{}, dim, ctx);
  }

  double peak() const {
    double s = 0.0, a = 0.0;
    for (int i = 0; i < dim; ++i) {
      s += std::abs(slope[i]);
      a = std::max(a, std::abs(amp[i]));
    }
    return a * (1.0 + s);
  }
};

/// Random test functions whose balls contain `must_contain` (the Green
/// source) when `contain` is set.
inline std::vector<TestFunction> random_test_functions(int dim, int n, unsigned long long seed,
                                                      double rmin, double rmax,
                                                      const Vec& must_contain = {},
                                                      bool contain = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0), R(rmin, rmax);
  std::vector<TestFunction> out;
  while (static_cast<int>(out.size()) < n) {
    TestFunction t;
    t.dim = dim;
    t.radius = R(rng);
    double d2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      t.center[a] = must_contain[a] + 0.5 * t.radius * U(rng);
      t.amp[a] = U(rng);
      t.slope[a] = 0.5 * U(rng);
      d2 += (t.center[a] - must_contain[a]) * (t.center[a] - must_contain[a]);
    }
    if (contain && d2 >= 0.25 * t.radius * t.radius) continue;
    out.push_back(t);
  }
  return out;
}

/// Weak form of A U + δ I = 0 for the Green tensor: for each column k,
/// Σ_j ⟨U_jk, (Aφ)_j⟩ + φ_k(0) = 0. The pairing is a volume convolution of
/// the reflected density (Aφ)(-y) evaluated at the origin, so it inherits the
/// cone and source handling of solve_volume. Deviation per test function is
/// relative to the larger of the two terms and the size of φ.
inline ValidationReport weak_form_green(const RegimeContext& ctx, const ElasticMedium& medium,
                                        int dim, const std::vector<TestFunction>& tests,
                                        double tol, SolveOptions opt = {}) {
  oracle_detail::Stopwatch sw;
  ValidationReport r;
  r.id = "weak_form_green_" + std::to_string(dim) + "d";
  r.tolerance = tol;
  EvalPoint origin;
  origin.dim = dim;
  for (const auto& t : tests) {
    LoadSpec L;
    L.kind = LoadKind::Volume;
    L.dim = dim;
    for (int a = 0; a < dim; ++a) {
      L.box_lo[a] = -t.center[a] - t.radius;
      L.box_hi[a] = -t.center[a] + t.radius;
    }
    L.density.g = [&t, &ctx, dim](const Vec& y) {
      EvalPoint p;
      p.dim = dim;
      for (int a = 0; a < dim; ++a) p.coord[a] = -y[a];
      return t.apply_A(p, ctx).value;
    };
    const Vec pairing = solve_volume(L, {origin}, medium, ctx, opt).values[0];
    const Vec src = t.value(origin);
    double num = 0.0, den = t.peak();
    for (int k = 0; k < dim; ++k) {
      num = std::max(num, std::abs(pairing[k] + src[k]));
      den = std::max({den, std::abs(pairing[k]), std::abs(src[k])});
    }
    r.max_residual = std::max(r.max_residual, den > 0.0 ? num / den : 0.0);
    ++r.points;
  }
  oracle_detail::finish(r, sw);
  return r;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

/// Tensor-product composite Gauss cubature over the box c ± R of a test
/// function; each axis is split at `splits[a]` (kinks of the field) and into
/// `cells` equal pieces with `order` nodes each.
struct Cubature {
  std::vector<EvalPoint> points;
  std::vector<double> weights;
};

inline Cubature box_cubature(const TestFunction& t, const std::array<std::vector<double>, 3>& splits,
                             int cells, int order) {
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  std::array<std::vector<double>, 3> nodes, weights;
  for (int a = 0; a < t.dim; ++a) {
    const double lo = t.center[a] - t.radius, hi = t.center[a] + t.radius;
    std::vector<double> br;
    for (int c = 0; c <= cells; ++c) br.push_back(lo + (hi - lo) * c / cells);
    for (double s : splits[a])
      if (s > lo && s < hi) br.push_back(s);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    for (std::size_t c = 0; c + 1 < br.size(); ++c) {
      const double m = 0.5 * (br[c] + br[c + 1]), h = 0.5 * (br[c + 1] - br[c]);
      for (int q = 0; q < order; ++q) {
        nodes[a].push_back(m + h * gx[q]);
        weights[a].push_back(h * gw[q]);
      }
    }
  }
  Cubature cub;
  const std::size_t n0 = nodes[0].size(), n1 = nodes[1].size();
  const std::size_t n2 = t.dim == 3 ? nodes[2].size() : 1;
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = 0; k < n2; ++k) {
        EvalPoint p;
        p.dim = t.dim;
        p.coord[0] = nodes[0][i];
        p.coord[1] = nodes[1][j];
        double w = weights[0][i] * weights[1][j];
        if (t.dim == 3) {
          p.coord[2] = nodes[2][k];
          w *= weights[2][k];
        }
        double q = 0.0;
        for (int a = 0; a < t.dim; ++a)
          q += (p.coord[a] - t.center[a]) * (p.coord[a] - t.center[a]);
        if (q >= t.radius * t.radius) continue;  // outside the bump support
        cub.points.push_back(p);
        cub.weights.push_back(w);
      }
  return cub;
}

/// Weak form of A u + g = 0 for a sampled field: ⟨u, Aφ⟩ + ⟨g, φ⟩ per test
/// function, relative to ∫|u|·|Aφ| (the size of the pairing integrand).
/// `field` evaluates u on a batch of points; `source` returns ⟨g, φ⟩.
inline ValidationReport weak_form_field(
    const RegimeContext& ctx, int dim, const std::vector<TestFunction>& tests,
    const std::function<std::vector<Vec>(const std::vector<EvalPoint>&)>& field,
    const std::function<double(const TestFunction&)>& source,
    const std::array<std::vector<double>, 3>& splits, double tol, int cells = 4, int order = 8,
    std::string id = "weak_form_field") {
  oracle_detail::Stopwatch sw;
  ValidationReport r;
  r.id = std::move(id);
  r.tolerance = tol;
  for (const auto& t : tests) {
    if (t.dim != dim) throw Error(ErrorCode::InvalidArgument, "test function dimension mismatch");
    const Cubature cub = box_cubature(t, splits, cells, order);
    const std::vector<Vec> u = field(cub.points);
    double a = 0.0, a_abs = 0.0;
    for (std::size_t q = 0; q < cub.points.size(); ++q) {
      const Vec Aphi = t.apply_A(cub.points[q], ctx).value;
      for (int i = 0; i < dim; ++i) {
        a += cub.weights[q] * u[q][i] * Aphi[i];
        a_abs += cub.weights[q] * std::abs(u[q][i] * Aphi[i]);
      }
    }
    const double b = source(t);
    const double den = std::max({std::abs(a), std::abs(b), a_abs});
    r.max_residual = std::max(r.max_residual, den > 0.0 ? std::abs(a + b) / den : 0.0);
    ++r.points;
  }
  oracle_detail::finish(r, sw);
  return r;
}

/// Inverse Fourier transform of the symbol, reduced to angular integrals
/// because Ū is homogeneous of degree -2:
///   2D:  U(p) - U(p0) = (1/4π^2) ∫_0^{2π} Ū(ω) ln|ω·p0 / ω·p| dφ
///   3D:  U(p) = (1/(8π^2 |p|)) ∮_{ω ⊥ p} Ū(ω) dθ
/// The 2D form compares differences against p0 since U grows
/// logarithmically. Subsonic only (no real characteristics).
struct InverseFtResult {
  Mat numeric{};
  Mat exact{};
  double gap = 0.0;                // relative, max-norm
  double asymmetry = 0.0;          // max |numeric_ij - numeric_ji|
  std::vector<double> refinement;  // gaps at successive refinements
};

namespace oracle_detail {

inline double mat_gap(const Mat& a, const Mat& b, int dim) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      num = std::max(num, std::abs(a[i][j] - b[i][j]));
      den = std::max(den, std::abs(b[i][j]));
    }
  return den > 0.0 ? num / den : num;
}

inline Mat inverse_ft_2d(const RegimeContext& ctx, const EvalPoint& p, const EvalPoint& p0,
                         double rel_tol) {
  auto f = [&](double phi) -> Values<9> {
    const double c = std::cos(phi), s = std::sin(phi);
    const double sp = c * p.coord[0] + s * p.coord[1];
    const double s0 = c * p0.coord[0] + s * p0.coord[1];
    const Mat W = fourier_U(2, Vec{c, s, 0.0}, ctx);
    const double L = std::log(std::abs(s0 / sp)) / (4.0 * kPi * kPi);
    Values<9> v{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) v[3 * i + j] = W[i][j] * L;
    return v;
  };
  std::vector<double> br{0.0, 2.0 * kPi};
  for (const EvalPoint* q : {&p, &p0}) {
    // ω·q = 0 at φ = atan2(q_z, q_x) ± π/2
    const double base = std::atan2(q->coord[1], q->coord[0]) + 0.5 * kPi;
    for (double a : {base, base + kPi, base - kPi, base + 2.0 * kPi})
      if (a > 0.0 && a < 2.0 * kPi) br.push_back(a);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  const auto r = integrate_pieces<9>(f, br, QuadOptions{1e-14, rel_tol, 4000});
  Mat m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m[i][j] = r.value[3 * i + j];
  return m;
}

inline Mat inverse_ft_3d(const RegimeContext& ctx, const EvalPoint& p, int n) {
  const double len = p.norm();
  const Vec e{p.coord[0] / len, p.coord[1] / len, p.coord[2] / len};
  // orthonormal pair spanning the plane ⟂ p
  Vec a = std::abs(e[0]) < 0.9 ? Vec{1.0, 0.0, 0.0} : Vec{0.0, 1.0, 0.0};
  const double d = a[0] * e[0] + a[1] * e[1] + a[2] * e[2];
  for (int i = 0; i < 3; ++i) a[i] -= d * e[i];
  const double an = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  for (auto& x : a) x /= an;
  const Vec b{e[1] * a[2] - e[2] * a[1], e[2] * a[0] - e[0] * a[2], e[0] * a[1] - e[1] * a[0]};
  Mat m{};
  for (int k = 0; k < n; ++k) {  // trapezoid: spectrally accurate for periodic integrands
    const double th = 2.0 * kPi * k / n;
    Vec w{};
    for (int i = 0; i < 3; ++i) w[i] = std::cos(th) * a[i] + std::sin(th) * b[i];
    const Mat W = fourier_U(3, w, ctx);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] += W[i][j];
  }
  const double scale = (2.0 * kPi / n) / (8.0 * kPi * kPi * len);
  for (auto& row : m)
    for (auto& x : row) x *= scale;
  return m;
}

}  // namespace oracle_detail

inline InverseFtResult inverse_ft_point(const RegimeContext& ctx, const EvalPoint& p,
                                        const EvalPoint& p0) {
  if (ctx.regime != Regime::Subsonic)
    throw Error(ErrorCode::InvalidArgument, "inverse Fourier check needs a subsonic load");
  InverseFtResult out;
  const int dim = p.dim;
  if (dim == 2) {
    const Mat u = green_U(p, ctx, false).U, u0 = green_U(p0, ctx, false).U;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.exact[i][j] = u[i][j] - u0[i][j];
    for (double rel : {1e-4, 1e-7, 1e-11}) {
      out.numeric = oracle_detail::inverse_ft_2d(ctx, p, p0, rel);
      out.refinement.push_back(oracle_detail::mat_gap(out.numeric, out.exact, 2));
    }
  } else {
    out.exact = green_U(p, ctx, false).U;
    for (int n : {8, 16, 64}) {
      out.numeric = oracle_detail::inverse_ft_3d(ctx, p, n);
      out.refinement.push_back(oracle_detail::mat_gap(out.numeric, out.exact, 3));
    }
  }
  out.gap = out.refinement.back();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      out.asymmetry = std::max(out.asymmetry, std::abs(out.numeric[i][j] - out.numeric[j][i]));
  const double last = out.refinement.back(), prev = out.refinement[out.refinement.size() - 2];
  if (!(last <= prev || last < 1e-10))
    throw Error(ErrorCode::TruncationNonconvergent, "inverse transform did not converge");
  return out;
}

inline ValidationReport inverse_ft_check(const RegimeContext& ctx, int dim,
                                         const std::vector<EvalPoint>& points, double tol,
                                         const EvalPoint& p0 = EvalPoint::make2(1.0, 0.0)) {
  oracle_detail::Stopwatch sw;
  ValidationReport r;
  r.id = "inverse_ft_" + std::to_string(dim) + "d";
  r.tolerance = tol;
  for (const auto& p : points) {
    if (p.dim != dim) throw Error(ErrorCode::InvalidArgument, "point dimension mismatch");
    const auto res = inverse_ft_point(ctx, p, p0);
    r.max_residual = std::max(r.max_residual, res.gap);
    ++r.points;
  }
  oracle_detail::finish(r, sw);
  return r;
}

/// max over points of |U_ij - U_ji| and |U(-x, z) - R U(x, z) R|,
/// R = diag(-1, .., -1, 1), each relative to max|U|. Points outside every
/// cone (U = 0) count as exact.
inline ValidationReport symmetry_check(const RegimeContext& ctx, int dim,
                                       const std::vector<EvalPoint>& points, double tol) {
  oracle_detail::Stopwatch sw;
  ValidationReport r;
  r.id = "symmetry_" + std::to_string(dim) + "d";
  r.tolerance = tol;
  for (const auto& p : points) {
    EvalPoint q = p;
    for (int a = 0; a < dim - 1; ++a) q.coord[a] = -p.coord[a];
    const Mat U = green_U(p, ctx, false).U, V = green_U(q, ctx, false).U;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const double sign = ((i == dim - 1) == (j == dim - 1)) ? 1.0 : -1.0;
        num = std::max({num, std::abs(U[i][j] - U[j][i]), std::abs(V[i][j] - sign * U[i][j])});
        den = std::max(den, std::abs(U[i][j]));
      }
    r.max_residual = std::max(r.max_residual, den > 0.0 ? num / den : num);
    ++r.points;
  }
  oracle_detail::finish(r, sw);
  return r;
}

/// Static point-force displacement tensor (Kelvin):
///   K_ij = [(λ + 3μ) δ_ij + (λ + μ) x_i x_j / r^2] / (8π μ (λ + 2μ) r).
inline Mat kelvin_tensor(const ElasticMedium& m, const EvalPoint& p) {
  const double r = p.norm();
  if (r == 0.0) throw Error(ErrorCode::OnSingularity, "origin");
  const double den = 8.0 * kPi * m.mu * (m.lambda + 2.0 * m.mu) * r;
  Mat K{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      K[i][j] = ((i == j ? m.lambda + 3.0 * m.mu : 0.0) +
                 (m.lambda + m.mu) * p.coord[i] * p.coord[j] / (r * r)) /
                den;
  return K;
}

/// Relative gap between U/c^2 (at load speed mach1·c1) and ρK, max over the
/// points.
inline double kelvin_gap(const ElasticMedium& medium, double mach1,
                         const std::vector<EvalPoint>& points) {
  const auto ctx = classify_regime(medium, mach1 * wave_speeds(medium).c1);
  double gap = 0.0;
  for (const auto& p : points) {
    if (p.dim != 3) throw Error(ErrorCode::InvalidArgument, "Kelvin limit is 3D");
    const Mat U = green_U(p, ctx, false).U;
    const Mat K = kelvin_tensor(medium, p);
    Mat a{}, b{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a[i][j] = U[i][j] / (ctx.c * ctx.c);
        b[i][j] = medium.rho * K[i][j];
      }
    gap = std::max(gap, oracle_detail::mat_gap(a, b, 3));
  }
  return gap;
}

inline ValidationReport kelvin_limit_check(const ElasticMedium& medium,
                                           const std::vector<EvalPoint>& points, double tol,
                                           double mach1 = 1e-3) {
  oracle_detail::Stopwatch sw;
  ValidationReport r;
  r.id = "kelvin_limit";
  r.tolerance = tol;
  r.points = static_cast<int>(points.size());
  r.max_residual = kelvin_gap(medium, mach1, points);
  oracle_detail::finish(r, sw);
  return r;
}

}  // namespace lamewave
