#pragma once

// Dynamical deviation factors and numerical checks of the ergodic equalities
// that tie them to the stationary ones.

#include <complex>
#include <functional>
#include <span>
#include <string>

#include "genscatter/potential.hpp"

namespace genscatter::ergodic {

using Complex = std::complex<double>;

// scalar phase per (t, momentum) point
struct DynamicalDeviation {
  std::function<Complex(double t, double momentum)> eval;
  std::string description;
  Complex operator()(double t, double p) const { return eval(t, p); }
};

// exp((i/2k) int_a^{tk} pot)
Complex w0_schrodinger(double t, double k, const PotentialSpec &pot);
// max over t of |V0(tk, k) - W0(t, k)|
double check_ergodic_schrodinger(const PotentialSpec &pot, double k, std::span<const double> t_grid);

// exp(i sgn(t) int_1^{|t|} b(r s) dr), s = p / sqrt(p^2 + m^2); by quadrature
Complex w0_dirac(double t, double p, double m, const PotentialSpec &b);

struct DiracErgodicCheck {
  double constancy = 0.0;  // max |ratio(t) - ratio(t0)|
  double modulus = 0.0;    // max ||ratio(t)| - 1|
  Complex c_of_p = 1.0;    // ratio(t0)
};
DiracErgodicCheck check_ergodic_dirac(const PotentialSpec &b, double p, double m,
                                      std::span<const double> t_grid);
// exp(i int_{1/s}^1 b(r s) dr) by direct quadrature
Complex dirac_constant(const PotentialSpec &b, double p, double m);

// sup over k of |w(t + tau, k) / w(t, k) - 1| at t = t_eval
double check_admissibility(const DynamicalDeviation &w, std::span<const double> k_grid, double tau,
                           double t_eval = 1e6);

DynamicalDeviation coulomb_dynamical(double z);
DynamicalDeviation schrodinger_dynamical(const PotentialSpec &pot);
DynamicalDeviation dirac_dynamical(const PotentialSpec &b, double m);

} // namespace genscatter::ergodic
