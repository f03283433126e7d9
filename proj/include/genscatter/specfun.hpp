#pragma once

// Complex log-gamma and digamma, and the Legendre function of the second
// kind Q_l(x) for x > 1.

#include <complex>

namespace genscatter::specfun {

using Complex = std::complex<double>;

// log Gamma(z). For Re z >= 0.5 this is the branch analytic in the right
// half-plane and real on the positive axis; elsewhere it is continued by
// reflection and the imaginary part is only fixed modulo 2*pi.
// Throws PoleError for z in {0, -1, -2, ...}.
Complex log_gamma(Complex z);

// Gamma'(z) / Gamma(z). Throws PoleError at the nonpositive integers.
Complex digamma(Complex z);

// Q_l(x) = int_0^inf (x + sqrt(x^2 - 1) cosh u)^(-l-1) du by adaptive
// quadrature. Requires x > 1 and 0 <= l <= 20.
double legendre_q(int ell, double x);

// Decomposition Q_l(x) = log_coef * ln|(x + 1)/(x - 1)| / 2 - remainder with
// log_coef = P_l(x) and remainder = W_{l-1}(x), both polynomials in x. Valid
// for any real x != +-1; it is how kernels with the p = k log singularity are
// split, and it is a closed-form check on legendre_q for moderate x.
struct LegendreQParts {
  double log_coef;
  double remainder;
};
LegendreQParts legendre_q_parts(int ell, double x);

// Q_l(x) from the closed form above. Loses relative accuracy once x grows
// past a few units (cancellation between the two parts).
double legendre_q_closed(int ell, double x);

} // namespace genscatter::specfun
