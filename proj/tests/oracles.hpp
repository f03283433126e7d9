#pragma once

// Independent reference computations shared by the test binaries.

#include <cmath>

namespace oracle {

// Euler's constant from H_n - ln n with the Euler-Maclaurin tail, n = 1e7.
inline double euler_gamma() {
  const long n = 10'000'000;
  // compensated summation, smallest terms first
  double h = 0.0, comp = 0.0;
  for (long j = n; j >= 1; --j) {
    const double y = 1.0 / static_cast<double>(j) - comp;
    const double t = h + y;
    comp = (t - h) - y;
    h = t;
  }
  const double nn = static_cast<double>(n);
  return h - std::log(nn) - 1.0 / (2.0 * nn) + 1.0 / (12.0 * nn * nn) -
         1.0 / (120.0 * nn * nn * nn * nn);
}

} // namespace oracle

#include <complex>
#include <numbers>

#include "genscatter/quadrature.hpp"
#include "genscatter/specfun.hpp"

namespace oracle {

// Q_l from the integral representation, with the x -> 1 asymptote
// (1/2) ln(2/(x-1)) - H_l once x - 1 is below double resolution of x.
inline double legendre_q_near_one(int ell, double xm1) {
  if (xm1 < 1e-13) {
    double h = 0.0;
    for (int j = 1; j <= ell; ++j)
      h += 1.0 / j;
    return 0.5 * std::log(2.0 / xm1) - h;
  }
  return genscatter::specfun::legendre_q(ell, 1.0 + xm1);
}

// Brute-force (p, t1) double integral for S_1 with the window integral done
// numerically and p graded toward k through p = k +- s^2.
template <class F>
std::complex<double> s1_brute(double k, int ell, double t, double tau, F f, double c1, double c2) {
  using C = std::complex<double>;
  namespace q = genscatter::quad;
  q::Options inner;
  inner.abs_tol = 1e-12;
  inner.rel_tol = 1e-11;
  auto window = [&](double p) {
    const double w = (k - p) * (k + p);
    return q::integrate([&](double t1) { return std::polar(1.0, w * t1); }, tau, t, inner).value;
  };
  auto side = [&](double sign, double len) {
    auto g = [&](double s) -> C {
      const double p = k + sign * s * s;
      const double fp = f(p);
      if (fp == 0.0)
        return 0.0;
      const double xm1 = (p - k) * (p - k) / (2.0 * p * k);
      return 2.0 * s * fp * legendre_q_near_one(ell, xm1) * window(p);
    };
    q::Options outer;
    outer.abs_tol = 1e-9;
    outer.rel_tol = 1e-9;
    outer.max_subdivisions = 20000;
    return q::integrate(g, 0.0, std::sqrt(len), outer).value;
  };
  const C total = side(-1.0, k - c1) + side(1.0, c2 - k);
  return C(0.0, 2.0 / std::numbers::pi) * total;
}

} // namespace oracle

#include <Eigen/Dense>

namespace oracle {

// prod_j exp(-i eps V(t_j) dt) at midpoints, later times on the left
template <class V>
Eigen::MatrixXcd time_ordered_product(V v, int dim, double t0, double t1, double eps, int steps) {
  using M = Eigen::MatrixXcd;
  const double dt = (t1 - t0) / steps;
  M u = M::Identity(dim, dim);
  for (int j = 0; j < steps; ++j) {
    const M h = v(t0 + (j + 0.5) * dt);
    Eigen::SelfAdjointEigenSolver<M> es(h);
    Eigen::VectorXcd ph(dim);
    for (int i = 0; i < dim; ++i)
      ph(i) = std::polar(1.0, -eps * es.eigenvalues()(i) * dt);
    u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint() * u;
  }
  return u;
}

} // namespace oracle
