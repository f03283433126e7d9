#include "genscatter/coulomb.hpp"

#include <cmath>
#include <numbers>

#include "genscatter/errors.hpp"
#include "genscatter/specfun.hpp"

namespace genscatter::coulomb {

void validate(const Params &p) {
  require(p.k > 0.0 && std::isfinite(p.k), "coulomb: momentum k must be positive");
  require(p.ell >= 0, "coulomb: ell must be nonnegative");
  require(std::isfinite(p.z), "coulomb: z must be finite");
}

Complex s_st(const Params &p) {
  validate(p);
  const double eta = p.z / p.k;
  const Complex a(p.ell + 1.0, -eta);
  return std::exp(specfun::log_gamma(a) - specfun::log_gamma(std::conj(a)));
}

Complex s_dyn(const Params &p) {
  validate(p);
  const double phase = 4.0 * p.z / p.k * std::log(2.0 * p.k);
  const double eta = p.z / p.k;
  const Complex a(p.ell + 1.0, -eta);
  return std::exp(Complex(0.0, phase) + specfun::log_gamma(a) - specfun::log_gamma(std::conj(a)));
}

Complex coulomb_deviation(double t, const Params &p, Branch branch) {
  validate(p);
  require(t != 0.0, "coulomb_deviation: t must be nonzero");
  const double sign = branch == Branch::plus ? -1.0 : 1.0;
  return std::polar(1.0, sign * p.z / p.k * std::log(std::abs(t)));
}

double kernel_R(double k, double p, const Params &params) {
  require(k > 0.0 && p > 0.0, "kernel_R: momenta must be positive");
  require(p != k, "kernel_R: singular argument at p = k");
  const double x = (k * k + p * p) / (2.0 * p * k);
  return -2.0 * params.z / std::numbers::pi * specfun::legendre_q(params.ell, x);
}

Complex s1_coefficient(double k, int ell) {
  require(k > 0.0, "s1_coefficient: k must be positive");
  require(ell >= 0, "s1_coefficient: ell must be nonnegative");
  const Complex psi = specfun::digamma(ell + 1.0);
  return Complex(0.0, -2.0 / k) * (psi - 2.0 * std::log(2.0 * k));
}

} // namespace genscatter::coulomb
