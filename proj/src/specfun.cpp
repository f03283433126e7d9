#include "genscatter/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "genscatter/errors.hpp"
#include "genscatter/quadrature.hpp"

namespace genscatter::specfun {

namespace {

constexpr double pi = std::numbers::pi;

// Lanczos approximation, g = 607/128, 15 coefficients (Godfrey).
constexpr double lanczos_g = 607.0 / 128.0;
constexpr std::array<double, 15> lanczos_c = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5};

bool is_pole(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

[[noreturn]] void pole(const char *fn, Complex z) {
  throw PoleError(std::string(fn) + ": pole at z = " + std::to_string(z.real()));
}

Complex log_gamma_right(Complex z) {
  const Complex zz = z - 1.0;
  Complex series = lanczos_c[0];
  for (std::size_t k = 1; k < lanczos_c.size(); ++k)
    series += lanczos_c[k] / (zz + static_cast<double>(k));
  const Complex t = zz + lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (zz + 0.5) * std::log(t) - t + std::log(series);
}

} // namespace

Complex log_gamma(Complex z) {
  if (is_pole(z))
    pole("log_gamma", z);
  if (z.real() >= 0.5)
    return log_gamma_right(z);
  // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
  return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma_right(1.0 - z);
}

Complex digamma(Complex z) {
  if (is_pole(z))
    pole("digamma", z);
  if (z.real() < 0.5)
    return digamma(1.0 - z) - pi / std::tan(pi * z);

  Complex shift = 0.0;
  while (z.real() < 8.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  // B_2n / (2n) for n = 1..8.
  static constexpr std::array<double, 8> b = {
      1.0 / 12.0,           -1.0 / 120.0,  1.0 / 252.0,    -1.0 / 240.0,
      1.0 / 132.0,          -691.0 / 32760.0, 1.0 / 12.0, -3617.0 / 8160.0};
  const Complex inv2 = 1.0 / (z * z);
  Complex term = inv2;
  Complex tail = 0.0;
  for (double coef : b) {
    tail += coef * term;
    term *= inv2;
  }
  return shift + std::log(z) - 0.5 / z - tail;
}

double legendre_q(int ell, double x) {
  if (!(x > 1.0))
    throw DomainError("legendre_q: requires x > 1, got " + std::to_string(x));
  if (ell < 0 || ell > 20)
    throw DomainError("legendre_q: degree must lie in 0..20, got " + std::to_string(ell));

  const double s = std::sqrt((x - 1.0) * (x + 1.0));
  const double power = -(ell + 1.0);
  // The integrand decreases in u; stop where it has fallen by 1e-17 relative
  // to its value at u = 0.
  const double drop = std::pow(1e17, 1.0 / (ell + 1.0));
  const double upper = std::acosh(std::max(1.0, (drop * (x + s) - x) / s));

  auto integrand = [&](double u) { return std::pow(x + s * std::cosh(u), power); };
  quad::Options opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-14;
  // Break the range where the decay sets in so panels stay balanced.
  const double knee = std::acosh(std::max(1.0, x / s));
  std::vector<double> breaks = {0.0};
  if (knee > 0.0 && knee < upper)
    breaks.push_back(knee);
  for (double u = breaks.back() + 4.0; u < upper; u += 4.0)
    breaks.push_back(u);
  breaks.push_back(upper);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    total += quad::integrate(integrand, breaks[i], breaks[i + 1], opt).value;
  return total;
}

LegendreQParts legendre_q_parts(int ell, double x) {
  require(ell >= 0, "legendre_q_parts: degree must be nonnegative");
  std::vector<double> p(ell + 1);
  p[0] = 1.0;
  if (ell >= 1)
    p[1] = x;
  for (int n = 1; n < ell; ++n)
    p[n + 1] = ((2.0 * n + 1.0) * x * p[n] - n * p[n - 1]) / (n + 1.0);
  double w = 0.0;
  for (int j = 1; j <= ell; ++j)
    w += p[j - 1] * p[ell - j] / j;
  return {p[ell], w};
}

double legendre_q_closed(int ell, double x) {
  require(x > 1.0, "legendre_q_closed: requires x > 1");
  const auto parts = legendre_q_parts(ell, x);
  return parts.log_coef * 0.5 * std::log((x + 1.0) / (x - 1.0)) - parts.remainder;
}

} // namespace genscatter::specfun
