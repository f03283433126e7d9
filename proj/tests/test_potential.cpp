#include <cmath>

#include "doctest.h"
#include "genscatter/errors.hpp"
#include "genscatter/potential.hpp"

using namespace genscatter;

TEST_CASE("analytic antiderivatives agree with quadrature") {
  const PotentialSpec cases[] = {
      PotentialSpec::coulomb(0.7, 2.0),
      PotentialSpec::inverse_square(1.3),
      PotentialSpec::inverse_linear(-0.4, 0.5),
      PotentialSpec::exponential(2.0, 1.5),
      PotentialSpec::coulomb(1.0) + PotentialSpec::exponential(-0.3),
      PotentialSpec::dirac(0.5, PotentialSpec::inverse_square(0.2)),
  };
  for (const auto &p : cases) {
    CHECK(p.has_analytic_antiderivative());
    for (double r : {0.7, 1.0, 3.0, 17.0, 250.0}) {
      const double a = p.antiderivative(r), q = p.antiderivative_by_quadrature(r);
      CHECK(std::abs(a - q) <= 1e-10 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("derivatives match central differences") {
  const auto p = PotentialSpec::coulomb(1.0) + PotentialSpec::inverse_square(0.8) +
                 PotentialSpec::exponential(0.5) + PotentialSpec::compact_bump(0.3, 1.0, 4.0);
  for (double r : {0.5, 1.3, 2.5, 3.9, 8.0}) {
    const double h = 1e-5;
    const double fd = (p(r + h) - p(r - h)) / (2 * h);
    CHECK(p.deriv(r) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("compact bump vanishes outside its support") {
  const auto p = PotentialSpec::compact_bump(2.0, 1.0, 3.0);
  CHECK(p(0.5) == 0.0);
  CHECK(p(3.5) == 0.0);
  CHECK(p(2.0) > 0.0);
  CHECK_FALSE(p.has_analytic_antiderivative());
  CHECK(p.antiderivative(10.0) == doctest::Approx(p.antiderivative(4.0)).epsilon(1e-12));
}

TEST_CASE("inverse-r bookkeeping") {
  const auto v = PotentialSpec::dirac(0.3, PotentialSpec::exponential(1.0));
  CHECK(v.inverse_r_coef() == doctest::Approx(-0.3));
  CHECK(v.smooth(2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(v(2.0) == doctest::Approx(-0.15 + std::exp(-2.0)));
  CHECK(PotentialSpec::coulomb(1.5).inverse_r_coef() == doctest::Approx(3.0));
  CHECK(PotentialSpec::zero()(5.0) == 0.0);
}
