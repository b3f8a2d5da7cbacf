#pragma once

// Vector-valued globally adaptive Gauss-Kronrod (7/15) quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace lamewave {

template <std::size_t K>
using Values = std::array<double, K>;

template <std::size_t K>
struct QuadResult {
  Values<K> value{};
  double error = 0.0;  // max-norm error estimate
  long evals = 0;
  bool converged = true;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-8;
  int max_intervals = 2000;
};

namespace quad_detail {

inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t K>
struct Segment {
  double a, b;
  Values<K> value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <std::size_t K, class F>
Segment<K> rule(F& f, double a, double b, long& evals) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Values<K> kron{}, gauss{};
  const Values<K> fc = f(c);
  for (std::size_t q = 0; q < K; ++q) {
    kron[q] = fc[q] * kWgk[7];
    gauss[q] = fc[q] * kWg[3];
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const Values<K> f1 = f(c - dx), f2 = f(c + dx);
    for (std::size_t q = 0; q < K; ++q) {
      const double s = f1[q] + f2[q];
      kron[q] += kWgk[j] * s;
      if (j % 2 == 1) gauss[q] += kWg[j / 2] * s;
    }
  }
  evals += 15;
  Segment<K> seg{a, b, {}, 0.0};
  for (std::size_t q = 0; q < K; ++q) {
    seg.value[q] = kron[q] * h;
    seg.error = std::max(seg.error, std::abs((kron[q] - gauss[q]) * h));
  }
  return seg;
}

template <std::size_t K>
double max_norm(const Values<K>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace quad_detail

/// ∫_a^b f over [a, b]; f returns Values<K>. Bisects the worst segment until
/// the summed error estimate meets max(abs_tol, rel_tol * |I|).
template <std::size_t K, class F>
QuadResult<K> integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  using namespace quad_detail;
  QuadResult<K> res;
  if (!(b > a)) return res;
  std::priority_queue<Segment<K>> heap;
  heap.push(rule<K>(f, a, b, res.evals));
  auto totals = [&](Values<K>& v, double& e) {
    v.fill(0.0);
    e = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      const auto& s = copy.top();
      for (std::size_t q = 0; q < K; ++q) v[q] += s.value[q];
      e += s.error;
      copy.pop();
    }
  };
  Values<K> val{};
  double err = 0.0;
  totals(val, err);
  // running sums updated incrementally; a full recount happens only at exit
  int n = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * max_norm(val))) {
    if (n >= opt.max_intervals) {
      res.converged = false;
      break;
    }
    const Segment<K> worst = heap.top();
    if (worst.b - worst.a <= 1e-14 * std::max(1.0, std::abs(worst.a))) {
      res.converged = false;
      break;
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment<K> l = rule<K>(f, worst.a, mid, res.evals);
    const Segment<K> r = rule<K>(f, mid, worst.b, res.evals);
    for (std::size_t q = 0; q < K; ++q) val[q] += l.value[q] + r.value[q] - worst.value[q];
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++n;
  }
  totals(res.value, res.error);
  return res;
}

/// ∫ over consecutive breakpoints; tolerances apply to the whole sum.
template <std::size_t K, class F>
QuadResult<K> integrate_pieces(F&& f, const std::vector<double>& breaks, const QuadOptions& opt = {}) {
  QuadResult<K> total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    QuadOptions o = opt;
    o.abs_tol = opt.abs_tol / std::max<std::size_t>(1, breaks.size() - 1);
    const auto r = integrate<K>(f, breaks[i], breaks[i + 1], o);
    for (std::size_t q = 0; q < K; ++q) total.value[q] += r.value[q];
    total.error += r.error;
    total.evals += r.evals;
    total.converged = total.converged && r.converged;
  }
  return total;
}

/// ∫_a^b f for f with an integrable (b - y)^(-1/2) singularity at b:
/// substitutes y = b - t^2.
template <std::size_t K, class F>
QuadResult<K> integrate_sqrt_right(F&& f, double a, double b, const QuadOptions& opt = {}) {
  if (!(b > a)) return {};
  auto g = [&](double t) {
    Values<K> v = f(b - t * t);
    for (auto& x : v) x *= 2.0 * t;
    return v;
  };
  return integrate<K>(g, 0.0, std::sqrt(b - a), opt);
}

}  // namespace lamewave
