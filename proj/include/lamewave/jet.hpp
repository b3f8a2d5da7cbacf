#pragma once

// Truncated multivariate Taylor jets.
//
// A Jet<NV, Order> carries the Taylor coefficients c_a = (d^a f)(x0) / a! of a
// function of NV variables for every multi-index |a| <= Order. Arithmetic and
// elementary functions propagate the coefficients exactly (up to rounding),
// which gives closed-form derivatives of any expression built from them.

#include <array>
#include <cmath>
#include <cstddef>

namespace lamewave {

namespace jet_detail {

constexpr int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Number of monomials in NV variables of total degree <= Order.
constexpr int monomial_count(int nv, int order) { return binom(nv + order, order); }

template <int NV, int Order>
struct Tables {
  static constexpr int K = monomial_count(NV, Order);
  std::array<std::array<int, NV>, K> exps{};
  std::array<int, K> degree{};
  // product table: for every pair (a, b) with deg a + deg b <= Order, index of a + b
  std::array<std::array<int, K>, K> sum{};

  constexpr Tables() {
    int n = 0;
    // graded order: degree 0, 1, 2, ...; lexicographic within a degree
    for (int d = 0; d <= Order; ++d) {
      std::array<int, NV> e{};
      enumerate(e, 0, d, n);
    }
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) {
        sum[a][b] = -1;
        if (degree[a] + degree[b] > Order) continue;
        std::array<int, NV> e{};
        for (int v = 0; v < NV; ++v) e[v] = exps[a][v] + exps[b][v];
        sum[a][b] = find(e);
      }
  }

  constexpr void enumerate(std::array<int, NV>& e, int var, int remaining, int& n) {
    if (var == NV - 1) {
      e[var] = remaining;
      exps[n] = e;
      int d = 0;
      for (int v = 0; v < NV; ++v) d += e[v];
      degree[n] = d;
      ++n;
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[var] = k;
      enumerate(e, var + 1, remaining - k, n);
    }
  }

  constexpr int find(const std::array<int, NV>& e) const {
    for (int i = 0; i < K; ++i) {
      bool eq = true;
      for (int v = 0; v < NV; ++v) eq = eq && exps[i][v] == e[v];
      if (eq) return i;
    }
    return -1;
  }
};

template <int NV, int Order>
inline constexpr Tables<NV, Order> tables{};

}  // namespace jet_detail

template <int NV, int Order = 3>
class Jet {
 public:
  static constexpr int kVars = NV;
  static constexpr int kOrder = Order;
  static constexpr int K = jet_detail::monomial_count(NV, Order);

  Jet() { c_.fill(0.0); }
  explicit Jet(double value) {
    c_.fill(0.0);
    c_[0] = value;
  }

  /// The independent variable `var` expanded about `value`.
  static Jet variable(int var, double value) {
    Jet j(value);
    if constexpr (Order >= 1) {
      std::array<int, NV> e{};
      e[var] = 1;
      j.c_[tab().find(e)] = 1.0;
    }
    return j;
  }

  double value() const { return c_[0]; }
  double coeff(int i) const { return c_[i]; }
  double& coeff(int i) { return c_[i]; }

  /// Partial derivative d^a f for the multi-index `a`.
  double derivative(const std::array<int, NV>& a) const {
    int idx = tab().find(a);
    if (idx < 0) return 0.0;
    double fact = 1.0;
    for (int v = 0; v < NV; ++v)
      for (int k = 2; k <= a[v]; ++k) fact *= k;
    return c_[idx] * fact;
  }

  double d1(int i) const {
    std::array<int, NV> a{};
    a[i] += 1;
    return derivative(a);
  }
  double d2(int i, int j) const {
    std::array<int, NV> a{};
    a[i] += 1;
    a[j] += 1;
    return derivative(a);
  }
  double d3(int i, int j, int k) const {
    std::array<int, NV> a{};
    a[i] += 1;
    a[j] += 1;
    a[k] += 1;
    return derivative(a);
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i < K; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i < K; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const auto& t = tab();
    Jet r;
    for (int i = 0; i < K; ++i) {
      if (a.c_[i] == 0.0) continue;
      for (int j = 0; j < K; ++j) {
        const int s = t.sum[i][j];
        if (s >= 0) r.c_[s] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * inv(b); }
  friend Jet operator/(double s, const Jet& b) { return inv(b) * s; }

  /// f(g) from the derivatives f(g0), f'(g0), ... of a scalar function.
  static Jet compose(const Jet& g, const std::array<double, Order + 1>& fd) {
    Jet delta = g;
    delta.c_[0] = 0.0;
    Jet r(fd[0]);
    Jet power = delta;
    double fact = 1.0;
    for (int k = 1; k <= Order; ++k) {
      fact *= k;
      r += power * (fd[k] / fact);
      if (k < Order) power = power * delta;
    }
    return r;
  }

  friend Jet inv(const Jet& g) {
    const double x = g.value();
    std::array<double, Order + 1> d{};
    double p = 1.0 / x;
    double sign = 1.0, fact = 1.0;
    for (int k = 0; k <= Order; ++k) {
      d[k] = sign * fact * p;
      p /= x;
      sign = -sign;
      fact *= (k + 1);
    }
    return compose(g, d);
  }

  friend Jet sqrt(const Jet& g) {
    const double x = g.value();
    const double s = std::sqrt(x);
    std::array<double, Order + 1> d{};
    // d^k sqrt(x) = (1/2)(1/2 - 1)...(1/2 - k + 1) x^(1/2 - k)
    double coef = 1.0, pw = s;
    for (int k = 0; k <= Order; ++k) {
      d[k] = coef * pw;
      coef *= (0.5 - k);
      pw /= x;
    }
    return compose(g, d);
  }

  friend Jet log(const Jet& g) {
    const double x = g.value();
    std::array<double, Order + 1> d{};
    d[0] = std::log(x);
    double p = 1.0 / x, sign = 1.0, fact = 1.0;
    for (int k = 1; k <= Order; ++k) {
      d[k] = sign * fact * p;
      p /= x;
      sign = -sign;
      fact *= k;
    }
    return compose(g, d);
  }

  friend Jet exp(const Jet& g) {
    std::array<double, Order + 1> d{};
    d.fill(std::exp(g.value()));
    return compose(g, d);
  }

  friend Jet atan(const Jet& g) {
    static_assert(Order <= 3, "atan jets implemented to third order");
    const double x = g.value();
    const double q = 1.0 / (1.0 + x * x);
    std::array<double, 4> all{std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q};
    return compose(g, head(all));
  }

  friend Jet asinh(const Jet& g) {
    static_assert(Order <= 3, "asinh jets implemented to third order");
    const double x = g.value();
    const double q = 1.0 / std::sqrt(1.0 + x * x);
    std::array<double, 4> all{std::asinh(x), q, -x * q * q * q,
                              (2.0 * x * x - 1.0) * q * q * q * q * q};
    return compose(g, head(all));
  }

  friend Jet acosh(const Jet& g) {
    static_assert(Order <= 3, "acosh jets implemented to third order");
    const double x = g.value();
    const double q = 1.0 / std::sqrt(x * x - 1.0);
    std::array<double, 4> all{std::acosh(x), q, -x * q * q * q,
                              (2.0 * x * x + 1.0) * q * q * q * q * q};
    return compose(g, head(all));
  }

 private:
  static constexpr const jet_detail::Tables<NV, Order>& tab() { return jet_detail::tables<NV, Order>; }

  static std::array<double, Order + 1> head(const std::array<double, 4>& all) {
    std::array<double, Order + 1> d{};
    for (int k = 0; k <= Order; ++k) d[k] = all[k];
    return d;
  }

  std::array<double, K> c_;
};

}  // namespace lamewave
