#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "genscatter/errors.hpp"
#include "genscatter/renorm.hpp"
#include "oracles.hpp"

using namespace genscatter;
using namespace genscatter::renorm;

namespace {

Matrix pauli(int k) {
  Matrix s(2, 2);
  if (k == 1) s << 0, 1, 1, 0;
  else if (k == 2) s << 0, Complex(0, -1), Complex(0, 1), 0;
  else s << 1, 0, 0, -1;
  return s;
}

MatrixInteraction noncommuting() {
  return {[](double t) -> Matrix { return pauli(3) + t * pauli(2); }, 2};
}

double factorial(int k) { return std::tgamma(k + 1.0); }

std::vector<std::pair<double, Complex>> samples(const std::function<Complex(double)> &f) {
  std::vector<std::pair<double, Complex>> s;
  for (int i = 0; i <= 12; ++i) {
    const double L = 10.0 * std::pow(1e3, i / 12.0);
    s.emplace_back(L, f(L));
  }
  return s;
}

} // namespace

TEST_CASE("dyson K = 0") {
  const auto c = dyson_coefficients(noncommuting(), 0.0, 3.0, 0);
  REQUIRE(c.size() == 1);
  CHECK((c[0] - Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("dyson scalar constant matches the exponential series") {
  const double v = 0.7, t0 = -1.0, t1 = 2.5;
  const MatrixInteraction V{[v](double) { return Matrix::Constant(1, 1, v); }, 1};
  const auto c = dyson_coefficients(V, t0, t1, 8);
  for (int k = 0; k <= 8; ++k) {
    const Complex expect = std::pow(Complex(0, -v * (t1 - t0)), k) / factorial(k);
    CHECK(std::abs(c[k](0, 0) - expect) < 1e-10);
  }
}

TEST_CASE("dyson series matches the time-ordered product") {
  const auto V = noncommuting();
  const auto c = dyson_coefficients(V, 0.0, 3.0, 8);
  const Matrix sum = dyson_sum(c, 0.1);
  const Matrix prod = oracle::time_ordered_product(V, 2, 0.0, 3.0, 0.1, 10000);
  CHECK((sum - prod).norm() < 1e-6);
  // second order equals the time-ordered double integral
  const auto c2 = dyson_coefficients(V, 0.0, 3.0, 2);
  CHECK((c2[2] - c[2]).norm() < 1e-12);
}

TEST_CASE("dyson unitarity defect scales as eps^(K+1)") {
  const auto V = noncommuting();
  for (int K : {4, 8}) {
    const auto c = dyson_coefficients(V, 0.0, 3.0, K);
    const double eps[3] = {0.2, 0.1, 0.05};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double e : eps) {
      const double x = std::log(e), y = std::log(unitarity_defect(dyson_sum(c, e)));
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    CHECK(slope >= K + 0.5);
  }
}

TEST_CASE("dyson validation") {
  CHECK_THROWS_AS(dyson_coefficients(noncommuting(), 0.0, 1.0, 13), DomainError);
}

TEST_CASE("profile recovery from a synthetic curve") {
  const auto s = samples([](double L) {
    return Complex(0, 2 * L * L + 3 * L + 0.5 * std::log(L) + 1 + 1 / L);
  });
  const auto f = fit_divergence_profile(s);
  CHECK(f.profile.phi == doctest::Approx(2).epsilon(1e-3));
  CHECK(std::abs(f.profile.psi - 3) < 1e-3);
  CHECK(std::abs(f.profile.nu - 0.5) < 1e-3);
  CHECK(std::abs(f.profile.mu - 1) < 1e-3);
}

TEST_CASE("pure log and linear subcases") {
  const auto lg = fit_divergence_profile(samples([](double L) { return Complex(0, 1.7 * std::log(L) - 0.4); }));
  CHECK(std::abs(lg.profile.phi) < 1e-9);
  CHECK(std::abs(lg.profile.psi) < 1e-9);
  CHECK(lg.profile.nu == doctest::Approx(1.7).epsilon(1e-9));
  CHECK(lg.profile.mu == doctest::Approx(-0.4).epsilon(1e-9));
  const auto lin = fit_divergence_profile(samples([](double L) { return Complex(0, L); }));
  CHECK(std::abs(lin.profile.phi) < 1e-9);
  CHECK(lin.profile.psi == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(lin.profile.nu) < 1e-7);
}

TEST_CASE("profile fit rejects bad input") {
  auto s = samples([](double L) { return Complex(0, L); });
  auto re = s;
  re[3].second += 1e-3;
  CHECK_THROWS_AS(fit_divergence_profile(re), DomainError);
  CHECK_THROWS_AS(fit_divergence_profile(std::span(s).first(5)), DomainError);
  std::vector<std::pair<double, Complex>> narrow;
  for (int i = 0; i < 8; ++i) narrow.emplace_back(10.0 + i, Complex(0, 1));
  CHECK_THROWS_AS(fit_divergence_profile(narrow), DomainError);
  std::vector<std::pair<double, Complex>> repeated;
  for (int i = 0; i < 8; ++i) repeated.emplace_back(i < 7 ? 10.0 : 1e4, Complex(0, 1));
  CHECK_THROWS_AS(fit_divergence_profile(repeated), DegenerateDesign);
}

TEST_CASE("u0 factor") {
  for (double L : {2.0, 50.0, 1e4}) CHECK(u0_factor({0, 0, 0, 3.0}, L, 0.3) == Complex(1.0));
  CHECK(std::abs(u0_factor({0, 1, 0, 0}, 7.0, 0.2) - std::polar(1.0, 0.04 * 7.0)) < 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 100; ++i) {
    const DivergenceProfile p{u(rng), u(rng), u(rng), u(rng)};
    CHECK(std::abs(std::abs(u0_factor(p, 1 + std::abs(u(rng)) * 100, u(rng))) - 1.0) < 1e-15);
  }
}

TEST_CASE("regularized coefficients") {
  const DivergenceProfile p{2, 3, 0.5, 1};
  auto exact = [&](double L) { return Complex(0, 2 * L * L + 3 * L + 0.5 * std::log(L) + 1); };
  for (double L : {10.0, 1e3, 1e5}) CHECK(std::abs(regularized_coefficient(exact(L), p, L) - Complex(0, 1)) < 1e-12 * L * L);
  auto tail = [&](double L) { return exact(L) + Complex(0, 1 / L); };
  const auto fit = fit_divergence_profile(samples(tail));
  double prev = 1e300;
  for (double L : {10.0, 1e2, 1e3}) {
    const double gap = std::abs(regularized_coefficient(tail(L * 10), fit.profile, L * 10) -
                                regularized_coefficient(tail(L), fit.profile, L));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(std::abs(regularized_coefficient(tail(1e4), fit.profile, 1e4) -
                 regularized_coefficient(tail(1e3), fit.profile, 1e3)) < 1e-3);
  const Complex a = Complex(0, 0.8 * std::log(300.0) + 2);
  CHECK(std::abs(regularized_coefficient(a, {0, 0, 0.8, 0}, 300.0) - Complex(0, 2)) < 1e-14);
}

TEST_CASE("modulus invariance") {
  const DivergenceProfile p{0.3, -1.2, 0.7, 5};
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    const Complex s(g(rng), g(rng));
    const auto m = modulus_invariance(s, u0_factor(p, 1e3, 0.1));
    CHECK(std::abs(m.abs_raw - m.abs_reg) <= 1e-14 * std::max(1.0, m.abs_raw));
  }
  const auto z = modulus_invariance(0.0, u0_factor(p, 10, 0.1));
  CHECK(z.abs_raw == 0.0);
  CHECK(z.abs_reg == 0.0);
  CHECK_THROWS_AS(modulus_invariance(1.0, Complex(1.1, 0)), DomainError);
}

TEST_CASE("sample csv reader") {
  std::istringstream in("# comment\nL,re_a2,im_a2\n10,0,3.5\n100,0,-1e-3\n");
  const auto s = read_samples_csv(in);
  REQUIRE(s.size() == 2);
  CHECK(s[1].first == 100.0);
  CHECK(s[1].second == Complex(0, -1e-3));
  std::istringstream bad("10,0,1\nx,y,z\n");
  CHECK_THROWS_AS(read_samples_csv(bad), ConfigError);
}
