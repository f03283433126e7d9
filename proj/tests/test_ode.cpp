#include <doctest.h>

#include <cmath>

#include "genscatter/errors.hpp"
#include "genscatter/ode.hpp"

using namespace genscatter;

TEST_CASE("harmonic oscillator end state and dense output") {
  auto f = [](double, const double *y, double *d) {
    d[0] = y[1];
    d[1] = -y[0];
  };
  auto tr = ode::integrate(f, 0.0, 20.0, {0.0, 1.0});
  CHECK(std::abs(tr.final_state()[0] - std::sin(20.0)) < 1e-8);
  CHECK(std::abs(tr.final_state()[1] - std::cos(20.0)) < 1e-8);
  for (double r = 0.0; r <= 20.0; r += 0.37) {
    auto y = tr.at(r);
    CHECK(std::abs(y[0] - std::sin(r)) < 1e-8);
  }
  CHECK(tr.at(20.0)[0] == doctest::Approx(tr.final_state()[0]));
}

TEST_CASE("backward integration and tolerance convergence") {
  auto f = [](double r, const double *y, double *d) { d[0] = -2.0 * r * y[0]; };
  auto tr = ode::integrate(f, 3.0, 0.0, {std::exp(-9.0)});
  CHECK(std::abs(tr.final_state()[0] - 1.0) < 1e-8);

  ode::Options loose;
  loose.rtol = 1e-6;
  ode::Options tight;
  tight.rtol = 1e-12;
  const auto a = ode::integrate(f, 0.0, 3.0, {1.0}, loose).final_state()[0];
  const auto b = ode::integrate(f, 0.0, 3.0, {1.0}, tight).final_state()[0];
  CHECK(std::abs(b - std::exp(-9.0)) < std::abs(a - std::exp(-9.0)) + 1e-16);
}

TEST_CASE("dense output outside the range is rejected") {
  auto f = [](double, const double *y, double *d) { d[0] = y[0]; };
  auto tr = ode::integrate(f, 0.0, 1.0, {1.0});
  CHECK_THROWS_AS(tr.at(1.5), DomainError);
}

TEST_CASE("finite-time blow-up ends in StepFailure") {
  auto f = [](double, const double *y, double *d) { d[0] = y[0] * y[0]; };
  ode::Options opt;
  opt.max_steps = 100000;
  CHECK_THROWS_AS(ode::integrate(f, 0.0, 2.0, {1.0}, opt), StepFailure);
}
