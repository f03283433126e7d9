#pragma once

// Closed-form Coulomb scattering functions, deviation factors, the
// momentum-space kernel and the first-order coefficient.

#include <complex>

namespace genscatter::coulomb {

using Complex = std::complex<double>;

// Strength z of the potential 2z/r, momentum k, angular number ell.
// Physical use has z > 0; other real z give the analytic continuation.
struct Params {
  double z = 1.0;
  double k = 1.0;
  int ell = 0;
};

// Throws DomainError unless k > 0, ell >= 0 and z is finite.
void validate(const Params &p);

// (2k)^{4iz/k} Gamma(l+1-iz/k) / Gamma(l+1+iz/k).
Complex s_dyn(const Params &p);

// Gamma(l+1-iz/k) / Gamma(l+1+iz/k).
Complex s_st(const Params &p);

enum class Branch { plus, minus };

// |t|^{-iz/k} for Branch::plus and |t|^{+iz/k} for Branch::minus.
Complex coulomb_deviation(double t, const Params &p, Branch branch);

// -(2z/pi) Q_l((k^2 + p^2) / (2pk)); uses p.z and p.ell. DomainError at p = k.
double kernel_R(double k, double p, const Params &params);

// -(2i/k) (psi(l+1) - 2 ln 2k), the derivative of log s_dyn in z at z = 0.
Complex s1_coefficient(double k, int ell);

} // namespace genscatter::coulomb
