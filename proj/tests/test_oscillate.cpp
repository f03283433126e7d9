#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "genscatter/coulomb.hpp"
#include "genscatter/errors.hpp"
#include "genscatter/oscillate.hpp"
#include "oracles.hpp"

using namespace genscatter;
using osc::Complex;
constexpr double pi = std::numbers::pi;

namespace {
const auto unit = [](double) { return 1.0; };
}

TEST_CASE("empty window gives zero") {
  const auto f = osc::TestFunction::bump(0.5, 2.0);
  CHECK(osc::s1_truncated({1.0, 1.0, 0}, 3.0, 3.0, f) == Complex(0.0));
  CHECK(osc::s2_example(1.0, -2.0, -2.0, unit, 1.0) == Complex(0.0));
  CHECK_THROWS_AS(osc::s1_truncated({1.0, 1.0, 0}, -1.0, 1.0, f), DomainError);
}

TEST_CASE("frozen references from the 2D tensor oracle") {
  const auto f = osc::TestFunction::bump(0.5, 2.0);
  const Complex a = osc::s1_truncated({1.0, 1.0, 0}, 100.0, -100.0, f);
  CHECK(std::abs(a - Complex(0.0, 4.265035747269478)) < 1e-6 * (1.0 + std::abs(a)));
  const Complex b = osc::s1_truncated({1.0, 1.3, 2}, 40.0, -25.0, f);
  CHECK(std::abs(b - Complex(-0.0015379361266156751, 2.50287588522044)) < 1e-6 * (1.0 + std::abs(b)));
  const Complex c = osc::s2_example(1.0, 1e3, -1e3, unit, 1.0);
  CHECK(std::abs(c - Complex(0.0, 23.514727428587204)) < 1e-6 * (1.0 + std::abs(c)));
}

TEST_CASE("singularity subtraction agrees with brute force on random windows") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> kd(0.7, 1.8), td(0.5, 6.0);
  const auto f = osc::TestFunction::bump(0.5, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double k = kd(rng), t = td(rng), tau = -td(rng);
    const int ell = i % 3;
    const Complex fast = osc::s1_truncated({1.0, k, ell}, t, tau, f);
    const Complex slow = oracle::s1_brute(k, ell, t, tau, f, f.c1, f.c2);
    worst = std::max(worst, std::abs(fast - slow) / (1.0 + std::abs(slow)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("window additivity") {
  const auto f = osc::TestFunction::bump(0.6, 1.9);
  const coulomb::Params p{1.0, 1.1, 1};
  for (auto [t, m, tau] : {std::tuple{50.0, 0.0, -70.0}, {300.0, 12.5, -40.0}, {1e3, -200.0, -1e3}}) {
    const Complex whole = osc::s1_truncated(p, t, tau, f);
    const Complex split = osc::s1_truncated(p, t, m, f) + osc::s1_truncated(p, m, tau, f);
    CHECK(std::abs(whole - split) < 1e-8);
  }
}

TEST_CASE("first-order growth is (i/k) ln|t tau| and the deviation factors remove it") {
  const std::vector<double> scales = {1e2, 1e3, 1e4};
  for (auto [k, ell] : {std::pair{1.0, 0}, {1.4, 1}}) {
    const auto f = osc::TestFunction::bump(0.5, 2.0);
    const auto st = osc::s1_growth({1.0, k, ell}, scales, f);
    CHECK(std::abs(st.raw_fit.slope * k - 1.0) < 0.02);
    CHECK(std::abs(st.regularized_fit.slope) < 0.02 / k);
    // the regularized limit is the closed-form first-order coefficient
    const Complex limit = st.rows.back().regularized;
    CHECK(std::abs(limit - coulomb::s1_coefficient(k, ell)) < 1e-3);
  }
}

TEST_CASE("second-order example grows like (pi/2) i ln|t tau|") {
  const std::vector<double> scales = {1e2, 1e3, 1e4};
  const auto st = osc::s2_growth(1.0, scales, unit, pi / 2.0);
  CHECK(std::abs(std::abs(st.raw_fit.slope) - pi / 2.0) < 0.05 * pi / 2.0);
  for (const auto &r : st.rows)
    CHECK(std::abs(r.raw.real()) < 1e-9);
  // phase +pi/2 in the deviation factors cancels the drift
  CHECK(std::abs(st.regularized_fit.slope) < 0.02 * pi / 2.0);
  // the opposite phase doubles it
  const auto wrong = osc::s2_growth(1.0, scales, unit, -pi / 2.0);
  CHECK(std::abs(wrong.regularized_fit.slope - pi) < 0.05 * pi);
}

TEST_CASE("second-order slope scales like p(q)^2 / q") {
  const std::vector<double> scales = {1e2, 1e3, 1e4};
  auto p = [](double x) { return 0.5 + 0.25 * x; };
  const double q = 1.5;
  const auto st = osc::s2_growth(q, scales, p, 0.0);
  CHECK(std::abs(st.raw_fit.slope - pi * p(q) * p(q) / (2.0 * q)) < 0.05 * pi * p(q) * p(q) / (2.0 * q));
}

TEST_CASE("fit_log_growth") {
  std::vector<std::pair<double, double>> line, flat;
  for (double s : {2.0, 10.0, 1e3, 1e5}) {
    line.emplace_back(s, 2.0 * std::log(s) + 1.0);
    flat.emplace_back(s, 0.7);
  }
  auto a = osc::fit_log_growth(line);
  CHECK(a.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(a.intercept == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(a.residual < 1e-13);
  CHECK(std::abs(osc::fit_log_growth(flat).slope) < 1e-15);

  std::mt19937_64 rng(42);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<std::pair<double, double>> noisy;
  Eigen::MatrixXd X(30, 2);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) {
    const double s = std::pow(10.0, 0.5 + i * 0.15);
    noisy.emplace_back(s, -0.8 * std::log(s) + 3.0 + noise(rng));
    X(i, 0) = std::log(s);
    X(i, 1) = 1.0;
    y(i) = noisy.back().second;
  }
  const Eigen::Vector2d beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
  const auto fit = osc::fit_log_growth(noisy);
  CHECK(std::abs(fit.slope + 0.8) < 1e-2);
  CHECK(std::abs(fit.slope - beta(0)) < 1e-10);
  CHECK(std::abs(fit.intercept - beta(1)) < 1e-9);

  std::vector<std::pair<double, double>> same = {{5.0, 1.0}, {5.0, 2.0}, {5.0, 3.0}};
  CHECK_THROWS_AS(osc::fit_log_growth(same), DegenerateDesign);
  std::vector<std::pair<double, double>> few = {{5.0, 1.0}, {6.0, 2.0}};
  CHECK_THROWS_AS(osc::fit_log_growth(few), DomainError);
  std::vector<std::pair<double, double>> low = {{0.5, 1.0}, {6.0, 2.0}, {7.0, 2.0}};
  CHECK_THROWS_AS(osc::fit_log_growth(low), DomainError);
}

TEST_CASE("regularize_by_deviation") {
  auto raw = [](double t, double tau) { return Complex(t, tau); };
  auto one = [](double) { return Complex(1.0); };
  auto same = osc::regularize_by_deviation(raw, one, one);
  CHECK(same(2.0, -3.0) == Complex(2.0, -3.0));
  auto ph = osc::regularize_by_deviation(raw, [](double t) { return std::polar(1.0, t); },
                                         [](double s) { return std::polar(1.0, 2.0 * s); });
  CHECK(std::abs(std::abs(ph(2.0, -3.0)) - std::abs(Complex(2.0, -3.0))) < 1e-14);
  auto bad = osc::regularize_by_deviation(raw, [](double) { return Complex(1.1); }, one);
  CHECK_THROWS_AS(bad(1.0, 1.0), DomainError);
}
