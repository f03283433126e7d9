#pragma once

// Adaptive Gauss-Kronrod (10/21 point) quadrature for real or complex
// integrands, plus Gauss-Legendre rules.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "genscatter/errors.hpp"

namespace genscatter::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
};

template <class T> struct Result {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

struct Rule {
  std::vector<double> nodes;   // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule, nodes by Newton iteration on P_n.
Rule gauss_legendre(int n);

namespace detail {

inline constexpr std::array<double, 11> kronrod_x = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kronrod_w = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478486, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for kronrod_x[1], [3], [5], [7], [9].
inline constexpr std::array<double, 5> gauss_w = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T> struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel &o) const { return error < o.error; }
};

template <class T, class F> Panel<T> gk21(F &f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * kronrod_w[10];
  T gauss{};
  std::array<T, 21> vals;
  vals[10] = fc;
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kronrod_x[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    vals[j] = f1;
    vals[20 - j] = f2;
    kron += (f1 + f2) * kronrod_w[j];
    if (j % 2 == 1)
      gauss += (f1 + f2) * gauss_w[j / 2];
  }
  // QUADPACK-style error scaling.
  const T mean = kron * 0.5;
  double asc = kronrod_w[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    asc += kronrod_w[j] * (std::abs(vals[j] - mean) + std::abs(vals[20 - j] - mean));
  asc *= std::abs(h);
  double err = std::abs((kron - gauss) * h);
  if (asc != 0.0 && err != 0.0)
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return {a, b, kron * h, err};
}

} // namespace detail

// Globally adaptive integration of f over [a, b]. Throws QuadratureError when
// the subdivision budget is exhausted before the tolerance is met.
template <class F> auto integrate(F &&f, double a, double b, const Options &opt = {}) {
  using T = std::decay_t<decltype(f(a))>;
  Result<T> res;
  if (a == b)
    return res;
  std::priority_queue<detail::Panel<T>> heap;
  auto first = detail::gk21<T>(f, a, b);
  T total = first.value;
  double err = first.error;
  heap.push(first);
  int pieces = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (pieces >= opt.max_subdivisions)
      throw QuadratureError("adaptive quadrature: subdivision limit reached on [" +
                            std::to_string(a) + ", " + std::to_string(b) +
                            "], error estimate " + std::to_string(err));
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b)
      throw QuadratureError("adaptive quadrature: panel collapsed near " +
                            std::to_string(mid));
    auto left = detail::gk21<T>(f, worst.a, mid);
    auto right = detail::gk21<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++pieces;
  }
  // Re-sum to shed the drift of incremental updates.
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  res.value = sum;
  res.error = esum;
  res.evaluations = 21 * (2 * pieces - 1);
  return res;
}

// Integrates over consecutive panels [b_0, b_1], [b_1, b_2], ... splitting
// the absolute tolerance in proportion to panel width.
template <class F>
auto integrate_panels(F &&f, std::span<const double> breaks, const Options &opt = {}) {
  using T = std::decay_t<decltype(f(breaks[0]))>;
  Result<T> res;
  if (breaks.size() < 2)
    return res;
  const double span = std::abs(breaks.back() - breaks.front());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Options local = opt;
    local.abs_tol = opt.abs_tol * std::abs(breaks[i + 1] - breaks[i]) / span;
    auto r = integrate(f, breaks[i], breaks[i + 1], local);
    res.value += r.value;
    res.error += r.error;
    res.evaluations += r.evaluations;
  }
  return res;
}

// Integral over [a, inf) for a > 0 through u = a / s, s in (0, 1]. Suited to
// integrands decaying at least like 1/u^2.
template <class F> auto integrate_tail(F &&f, double a, const Options &opt = {}) {
  require(a > 0.0, "integrate_tail: lower limit must be positive");
  auto g = [&](double s) { return f(a / s) * (a / (s * s)); };
  return integrate(g, 0.0, 1.0, opt);
}

} // namespace genscatter::quad
