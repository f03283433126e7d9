#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "genscatter/coulomb.hpp"
#include "genscatter/errors.hpp"
#include "genscatter/specfun.hpp"
#include "oracles.hpp"

using namespace genscatter;
using coulomb::Complex;
using coulomb::Params;

TEST_CASE("zero coupling gives unit scattering functions") {
  for (int l : {0, 3}) {
    const Params p{1e-300, 1.0, l};
    CHECK(std::abs(coulomb::s_dyn(p) - 1.0) < 1e-15);
    CHECK(std::abs(coulomb::s_st(p) - 1.0) < 1e-15);
  }
}

TEST_CASE("unit modulus and ell-independent ratio on the grid") {
  double worst_mod = 0.0, worst_ratio = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = 0.1 * std::pow(100.0, i / 99.0);
    for (int j = 0; j < 20; ++j) {
      const double z = 0.1 + j * (5.0 - 0.1) / 19.0;
      const Complex r0 = coulomb::s_dyn({z, k, 0}) / coulomb::s_st({z, k, 0});
      for (int l = 0; l <= 5; ++l) {
        const Params p{z, k, l};
        const Complex d = coulomb::s_dyn(p), s = coulomb::s_st(p);
        worst_mod = std::max({worst_mod, std::abs(std::abs(d) - 1.0), std::abs(std::abs(s) - 1.0),
                              std::abs(d * std::conj(d) - 1.0)});
        worst_ratio = std::max(worst_ratio, std::abs(d / s - r0));
      }
    }
  }
  CHECK(worst_mod < 1e-12);
  CHECK(worst_ratio < 1e-12);
}

TEST_CASE("dynamical over stationary is the factor (2k)^{4iz/k}") {
  const Params p{1.0, 2.0, 1};
  const Complex expect = std::polar(1.0, 4.0 * p.z / p.k * std::log(2.0 * p.k));
  CHECK(std::abs(coulomb::s_dyn(p) / coulomb::s_st(p) - expect) < 1e-13);
}

TEST_CASE("stationary phase at z/k = 1 and oddness in z") {
  const Complex lg = specfun::log_gamma(Complex(1.0, 1.0));
  // arg Gamma(1+i) independently: integrate Im psi(1 + iy) dy from 0 to 1.
  const double arg = genscatter::quad::integrate(
                         [](double y) { return specfun::digamma(Complex(1.0, y)).real(); }, 0.0,
                         1.0)
                         .value;
  CHECK(std::abs(lg.imag() - arg) < 1e-12);
  CHECK(std::abs(coulomb::s_st({1.0, 1.0, 0}) - std::polar(1.0, -2.0 * arg)) < 1e-12);
  const Complex a = coulomb::s_st({0.7, 1.3, 2}), b = coulomb::s_st({-0.7, 1.3, 2});
  CHECK(std::abs(std::arg(a) + std::arg(b)) < 1e-13);
}

TEST_CASE("deviation factors") {
  const Params p{1.0, 1.0, 0};
  CHECK(std::abs(coulomb::coulomb_deviation(1.0, p, coulomb::Branch::plus) - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(coulomb::coulomb_deviation(1e3, p, coulomb::Branch::minus)) - 1.0) < 1e-15);
  const Complex w = coulomb::coulomb_deviation(-10.0, {2.0, 0.5, 0}, coulomb::Branch::plus);
  CHECK(std::abs(w - std::polar(1.0, -4.0 * std::log(10.0))) < 1e-14);
  const Complex ratio = coulomb::coulomb_deviation(1e6 + 5.0, p, coulomb::Branch::plus) /
                        coulomb::coulomb_deviation(1e6, p, coulomb::Branch::plus);
  CHECK(std::abs(ratio - 1.0) < 1e-5);
  CHECK_THROWS_AS(coulomb::coulomb_deviation(0.0, p, coulomb::Branch::plus), DomainError);
}

TEST_CASE("momentum-space kernel") {
  const Params p{std::numbers::pi / 2.0, 1.0, 0};
  CHECK(coulomb::kernel_R(1.0, 2.0, p) == doctest::Approx(-0.5 * std::log(9.0)).epsilon(1e-12));
  for (int l = 0; l <= 4; ++l) {
    const Params q{0.8, 1.0, l};
    CHECK(coulomb::kernel_R(1.2, 3.1, q) == doctest::Approx(coulomb::kernel_R(3.1, 1.2, q)).epsilon(1e-13));
    CHECK(coulomb::kernel_R(0.3, 0.9, q) < 0.0);
  }
  CHECK_THROWS_AS(coulomb::kernel_R(1.0, 1.0, p), DomainError);
}

TEST_CASE("first-order coefficient is the z-derivative of log s_dyn") {
  const double h = 1e-6;
  for (double k : {0.3, 0.5, 1.0, 2.7})
    for (int l = 0; l <= 4; ++l) {
      const Complex fd = (std::log(coulomb::s_dyn({h, k, l})) - std::log(coulomb::s_dyn({-h, k, l}))) /
                         (2.0 * h);
      const Complex c = coulomb::s1_coefficient(k, l);
      CHECK(std::abs(fd - c) < 1e-8 * std::max(1.0, std::abs(c)));
      CHECK(c.real() == 0.0);
    }
  const double g = oracle::euler_gamma();
  CHECK(std::abs(coulomb::s1_coefficient(0.5, 0) - Complex(0.0, 4.0 * g)) < 1e-12);
}
