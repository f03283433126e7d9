#pragma once

// Radial Schrodinger, radial Dirac and Dirac-type systems: regular solutions
// and stationary scattering functions matched against deviation-factor
// dressed asymptotics.

#include <array>
#include <complex>
#include <vector>

#include "genscatter/ode.hpp"
#include "genscatter/potential.hpp"

namespace genscatter::radial {

using Complex = std::complex<double>;

enum class System { schrodinger, dirac, dirac_type };

// Regular solution on [r0, R]. State is (y, y') for Schrodinger and (f, g)
// for the Dirac systems.
struct RadialTrajectory {
  System system = System::schrodinger;
  int ell = 0;          // Schrodinger
  double k = 0.0;       // Schrodinger momentum
  double kappa = 0.0;   // Dirac angular number
  double lambda = 0.0;  // Dirac energy
  double m = 0.0;
  ode::Trajectory path;

  double r0() const { return path.start(); }
  double R() const { return path.end(); }
  std::array<double, 2> at(double r) const;
  std::array<double, 2> final_state() const;
  // radii at which the integrator took steps
  const std::vector<double> &grid() const { return path.knots(); }
};

struct SolveOptions {
  double rtol = 1e-10;
  double atol = 0.0;
  bool dense = true;
};

// min(1e-3/k, 1e-3)
double default_start(double k);

// y'' = (l(l+1)/r^2 - phi - k^2) y with y ~ r^{l+1}, started from the
// Frobenius series n(n+2l+1) c_n = -C c_{n-1} - E c_{n-2}, where C is the
// 1/r coefficient of phi and E = k^2 + (smooth part of phi at r0).
RadialTrajectory integrate_schrodinger(int ell, double k, const PotentialSpec &pot, double r0,
                                       double R, const SolveOptions &opt = {});

// exp((i/2k) int_a^r phi). Requires r >= a.
Complex deviation_schrodinger(double r, double k, const PotentialSpec &pot);

// Riccati-Hankel h+_l(x) ~ exp(i(x - l pi/2)) and its x-derivative.
std::array<Complex, 2> riccati_hankel(int ell, double x);

struct ExtractOptions {
  SolveOptions solve;
  bool use_deviation = true;     // false sets V0 = 1 (and drops its phase velocity)
  bool tail_corrections = true;  // second-order tail phases and Hankel/adiabatic basis
};

struct SchrodingerMatch {
  Complex S;      // -beta/alpha
  Complex alpha;  // incoming coefficient
  Complex beta;   // outgoing coefficient
};

// Matches [y(R), y'(R)] = alpha Z1 + beta Z2 with Z2 = h+_l(kR) V0 e^{i delta}
// and Z1 = conj(Z2), delta(R) = int_R^inf [phi^2/(8k^3) - phi l(l+1)/(4k^3 u^2)] du.
// IllConditioned when |alpha| < 1e-10 relative to |(y, y'/k)|.
SchrodingerMatch match_schrodinger(int ell, double k, const PotentialSpec &pot, double R,
                                   const ExtractOptions &opt = {});
Complex extract_s_schrodinger(int ell, double k, const PotentialSpec &pot, double R,
                              const ExtractOptions &opt = {});

// Z' = [[-kappa/r, m+lambda-v], [m-lambda+v, kappa/r]] Z with Z ~ r^alpha (1, b0),
// alpha = sqrt(kappa^2 - A^2), b0 = (alpha + kappa)/A, v = -A/r + phi.
// DomainError unless A > 0, |kappa| > A, |lambda| > m > 0.
RadialTrajectory integrate_dirac(double kappa, double lambda, double m, const PotentialSpec &v,
                                 double r0, double R, const SolveOptions &opt = {});

// exp(i (lambda/eta) int_a^r v), eta = sqrt(lambda^2 - m^2).
Complex deviation_dirac(double r, double lambda, double m, const PotentialSpec &v);

struct DiracScattering {
  Complex s11, s22;  // S = diag(s11, s22)
  Complex c11, c21;  // incoming amplitude C1
};

// Matches (f, g)(R) = alpha Z_in + beta Z_out where Z_in ~ e^{-i eta R} V0(R) u_-,
// u_- = (i(lambda+m)/eta, 1), and Z_out = conj(Z_in); c11 = alpha u_-[0],
// c21 = alpha, S = diag(-conj(c11)/c11, conj(c11)/c11).
DiracScattering extract_s_dirac(double kappa, double lambda, double m, const PotentialSpec &v,
                                double R, const ExtractOptions &opt = {});

// f' = -a f + (lambda+m-b) g, g' = a g - (lambda-m-b) f, (f, g)(0) = (0, 1).
// The reference point of b must be 1.
RadialTrajectory integrate_dirac_type(const PotentialSpec &a_fn, const PotentialSpec &b_fn,
                                      double lambda, double m, double R,
                                      const SolveOptions &opt = {});
DiracScattering extract_s_dirac_type(const PotentialSpec &a_fn, const PotentialSpec &b_fn,
                                     double lambda, double m, double R,
                                     const ExtractOptions &opt = {});

} // namespace genscatter::radial
