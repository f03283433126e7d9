#include "genscatter/radial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "genscatter/errors.hpp"
#include "genscatter/quadrature.hpp"

namespace genscatter::radial {

namespace {

constexpr double pi = std::numbers::pi;
constexpr Complex I(0.0, 1.0);

ode::Options ode_options(const SolveOptions &opt) {
  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.dense = opt.dense;
  return o;
}

double eta_of(double lambda, double m) {
  require(m > 0.0, "dirac: mass must be positive");
  require(std::abs(lambda) > m, "dirac: requires |lambda| > m");
  return std::sqrt((lambda - m) * (lambda + m));
}

quad::Options tail_options() {
  quad::Options o;
  o.abs_tol = 1e-14;
  o.rel_tol = 1e-11;
  o.max_subdivisions = 20000;
  return o;
}

// Pieces of the Dirac-family asymptotic basis at one radius.
struct DiracLocal {
  std::function<double(double)> d, dd;  // kappa/r or a(r), and its derivative
  std::function<double(double)> v, vd;  // potential and derivative
};

// e_- = (P/(d - iK), 1), the eigenvector for exp(-i int K).
struct Adiabatic {
  double P, Qn, K;
  Complex xm, xp;
};

Adiabatic adiabatic(const DiracLocal &loc, double lambda, double m, double r) {
  Adiabatic a;
  const double d = loc.d(r), v = loc.v(r);
  a.P = lambda + m - v;
  a.Qn = lambda - m - v;
  const double K2 = a.P * a.Qn - d * d;
  if (!(K2 > 0.0))
    throw DomainError("dirac matching: radius " + std::to_string(r) +
                      " lies in a classically forbidden region");
  a.K = std::sqrt(K2);
  a.xm = a.P / Complex(d, -a.K);
  a.xp = a.P / Complex(d, a.K);
  return a;
}

DiracScattering match_dirac(const DiracLocal &loc, double lambda, double m, double R,
                            double v0_phase, double f, double g, const ExtractOptions &opt) {
  const double eta = eta_of(lambda, m);
  const Complex u0(0.0, (lambda + m) / eta);
  Complex zin0, zin1;
  if (!opt.use_deviation || !opt.tail_corrections) {
    const Complex ph = std::polar(1.0, -eta * R + (opt.use_deviation ? v0_phase : 0.0));
    zin0 = u0 * ph;
    zin1 = ph;
  } else {
    // G: residual phase of the local wavenumber beyond eta - lambda v / eta.
    auto h = [&](double u) {
      const Adiabatic a = adiabatic(loc, lambda, m, u);
      const double v = loc.v(u), d = loc.d(u);
      const double kme = (-2.0 * lambda * v + v * v - d * d) / (a.K + eta);
      return (v * v - d * d) / (a.K + eta) + lambda * v * kme / (eta * (a.K + eta));
    };
    // D: adiabatic amplitude transport -x_-'/(x_+ - x_-).
    auto dm = [&](double u) -> Complex {
      const Adiabatic a = adiabatic(loc, lambda, m, u);
      const double d = loc.d(u), dd = loc.dd(u), vd = loc.vd(u);
      const double Pd = -vd;
      const double Kd = (-vd * (a.Qn + a.P) - 2.0 * d * dd) / (2.0 * a.K);
      const Complex den(d, -a.K);
      const Complex xmd = Pd / den - a.P * Complex(dd, -Kd) / (den * den);
      return -xmd / (a.xp - a.xm);
    };
    const auto to = tail_options();
    const double G = quad::integrate_tail(h, R, to).value;
    const Complex D = quad::integrate_tail(dm, R, to).value;
    const Adiabatic a = adiabatic(loc, lambda, m, R);
    const Complex amp = std::exp(I * (-eta * R + v0_phase + G) + D);
    zin0 = a.xm * amp;
    zin1 = amp;
  }
  // (f, g) = alpha Z_in + beta conj(Z_in)
  const Complex det = zin0 * std::conj(zin1) - std::conj(zin0) * zin1;
  const Complex alpha = (f * std::conj(zin1) - std::conj(zin0) * g) / det;
  if (std::abs(alpha) < 1e-10 * std::max(std::abs(f), std::abs(g)))
    throw IllConditioned("dirac matching: incoming amplitude vanishes");
  DiracScattering out;
  out.c11 = alpha * u0;
  out.c21 = alpha;
  out.s11 = -std::conj(out.c11) / out.c11;
  out.s22 = std::conj(out.c11) / out.c11;
  return out;
}

} // namespace

std::array<double, 2> RadialTrajectory::at(double r) const {
  const auto y = path.at(r);
  return {y[0], y[1]};
}

std::array<double, 2> RadialTrajectory::final_state() const {
  const auto &y = path.final_state();
  return {y[0], y[1]};
}

double default_start(double k) { return std::min(1e-3 / k, 1e-3); }

RadialTrajectory integrate_schrodinger(int ell, double k, const PotentialSpec &pot, double r0,
                                       double R, const SolveOptions &opt) {
  require(ell >= 0, "integrate_schrodinger: ell must be nonnegative");
  require(k > 0.0, "integrate_schrodinger: k must be positive");
  require(0.0 < r0 && r0 < R, "integrate_schrodinger: need 0 < r0 < R");

  const double C = pot.inverse_r_coef();
  const double E = k * k + pot.smooth(r0);
  // y = r^{l+1} sum c_n r^n
  double cm2 = 0.0, cm1 = 1.0;
  double sy = 1.0, sdy = ell + 1.0;
  double rn = 1.0;
  for (int n = 1; n < 80; ++n) {
    const double cn = (-C * cm1 - E * cm2) / (n * (n + 2.0 * ell + 1.0));
    rn *= r0;
    const double term = cn * rn;
    sy += term;
    sdy += (n + ell + 1.0) * term;
    cm2 = cm1;
    cm1 = cn;
    if (n >= 2 && std::abs(term) < 1e-18 * std::abs(sy))
      break;
  }
  const double lead = std::pow(r0, ell + 1);
  ode::State y0 = {lead * sy, lead / r0 * sdy};

  const double L = ell * (ell + 1.0);
  auto rhs = [&pot, L, k](double r, const double *y, double *d) {
    d[0] = y[1];
    d[1] = (L / (r * r) - pot(r) - k * k) * y[0];
  };
  RadialTrajectory tr;
  tr.system = System::schrodinger;
  tr.ell = ell;
  tr.k = k;
  tr.path = ode::integrate(rhs, r0, R, std::move(y0), ode_options(opt));
  return tr;
}

Complex deviation_schrodinger(double r, double k, const PotentialSpec &pot) {
  require(k > 0.0, "deviation_schrodinger: k must be positive");
  require(r >= pot.a(), "deviation_schrodinger: requires r >= a");
  return std::polar(1.0, pot.antiderivative(r) / (2.0 * k));
}

std::array<Complex, 2> riccati_hankel(int ell, double x) {
  require(ell >= 0 && x > 0.0, "riccati_hankel: need ell >= 0 and x > 0");
  // sum_j (l+j)!/(j!(l-j)!) (i/(2x))^j
  Complex s = 0.0, ds = 0.0;
  double coef = 1.0;
  Complex w = 1.0;
  const Complex step = I / (2.0 * x);
  for (int j = 0; j <= ell; ++j) {
    if (j > 0) {
      coef *= static_cast<double>((ell + j) * (ell - j + 1)) / j;
      w *= step;
    }
    s += coef * w;
    ds += -static_cast<double>(j) / x * coef * w;
  }
  const Complex e = std::polar(1.0, x - 0.5 * ell * pi);
  return {e * s, e * (I * s + ds)};
}

SchrodingerMatch match_schrodinger(int ell, double k, const PotentialSpec &pot, double R,
                                   const ExtractOptions &opt) {
  SolveOptions so = opt.solve;
  so.dense = false;
  const auto tr = integrate_schrodinger(ell, k, pot, default_start(k), R, so);
  const auto [y, dy] = tr.final_state();

  const double L = ell * (ell + 1.0);
  Complex z2, dz2;
  if (opt.tail_corrections) {
    const auto [h, dh] = riccati_hankel(ell, k * R);
    z2 = h;
    dz2 = k * dh;
  } else {
    z2 = std::polar(1.0, k * R - 0.5 * ell * pi);
    dz2 = I * k * z2;
  }
  if (opt.use_deviation) {
    const Complex v0 = deviation_schrodinger(R, k, pot);
    double phase_rate = pot(R) / (2.0 * k);
    Complex extra = 1.0;
    if (opt.tail_corrections) {
      const double k3 = k * k * k;
      auto g = [&](double u) {
        const double p = pot(u);
        return p * p / (8.0 * k3) - p * L / (4.0 * k3 * u * u);
      };
      const double delta = quad::integrate_tail(g, R, tail_options()).value;
      extra = std::polar(1.0, delta);
      phase_rate -= g(R);
    }
    dz2 = (dz2 + I * phase_rate * z2) * v0 * extra;
    z2 = z2 * v0 * extra;
  }
  const Complex z1 = std::conj(z2), dz1 = std::conj(dz2);
  const Complex det = z1 * dz2 - z2 * dz1;
  SchrodingerMatch out;
  out.alpha = (y * dz2 - dy * z2) / det;
  out.beta = (z1 * dy - dz1 * y) / det;
  if (std::abs(out.alpha) < 1e-10 * std::max(std::abs(y), std::abs(dy) / k))
    throw IllConditioned("schrodinger matching: incoming amplitude vanishes");
  out.S = -out.beta / out.alpha;
  return out;
}

Complex extract_s_schrodinger(int ell, double k, const PotentialSpec &pot, double R,
                              const ExtractOptions &opt) {
  return match_schrodinger(ell, k, pot, R, opt).S;
}

RadialTrajectory integrate_dirac(double kappa, double lambda, double m, const PotentialSpec &v,
                                 double r0, double R, const SolveOptions &opt) {
  const double eta = eta_of(lambda, m);
  const double A = -v.inverse_r_coef();
  require(A > 0.0, "integrate_dirac: the 1/r coefficient -A of v must have A > 0");
  require(std::abs(kappa) > A, "integrate_dirac: requires |kappa| > A");
  require(0.0 < r0 && r0 < R, "integrate_dirac: need 0 < r0 < R");
  (void)eta;

  const double alpha = std::sqrt(kappa * kappa - A * A);
  const double ps = v.smooth(r0);
  const double P = m + lambda - ps, Mq = m - lambda + ps;
  double a_prev = 1.0, b_prev = (alpha + kappa) / A;
  double sf = a_prev, sg = b_prev, rn = 1.0;
  for (int n = 1; n < 80; ++n) {
    const double det = n * (2.0 * alpha + n);
    const double an = (P * b_prev * (alpha + n - kappa) + A * Mq * a_prev) / det;
    const double bn = ((alpha + n + kappa) * Mq * a_prev - A * P * b_prev) / det;
    rn *= r0;
    sf += an * rn;
    sg += bn * rn;
    a_prev = an;
    b_prev = bn;
    if (n >= 2 && std::abs(an * rn) + std::abs(bn * rn) < 1e-18 * (std::abs(sf) + std::abs(sg)))
      break;
  }
  const double lead = std::pow(r0, alpha);
  auto rhs = [&v, kappa, lambda, m](double r, const double *z, double *d) {
    const double vv = v(r);
    d[0] = -kappa / r * z[0] + (m + lambda - vv) * z[1];
    d[1] = (m - lambda + vv) * z[0] + kappa / r * z[1];
  };
  RadialTrajectory tr;
  tr.system = System::dirac;
  tr.kappa = kappa;
  tr.lambda = lambda;
  tr.m = m;
  tr.path = ode::integrate(rhs, r0, R, {lead * sf, lead * sg}, ode_options(opt));
  return tr;
}

Complex deviation_dirac(double r, double lambda, double m, const PotentialSpec &v) {
  const double eta = eta_of(lambda, m);
  require(r > 0.0, "deviation_dirac: requires r > 0");
  return std::polar(1.0, lambda / eta * v.antiderivative(r));
}

DiracScattering extract_s_dirac(double kappa, double lambda, double m, const PotentialSpec &v,
                                double R, const ExtractOptions &opt) {
  const double eta = eta_of(lambda, m);
  SolveOptions so = opt.solve;
  so.dense = false;
  const auto tr = integrate_dirac(kappa, lambda, m, v, default_start(eta), R, so);
  const auto [f, g] = tr.final_state();
  DiracLocal loc;
  loc.d = [kappa](double r) { return kappa / r; };
  loc.dd = [kappa](double r) { return -kappa / (r * r); };
  loc.v = [&v](double r) { return v(r); };
  loc.vd = [&v](double r) { return v.deriv(r); };
  const double phase = lambda / eta * v.antiderivative(R);
  return match_dirac(loc, lambda, m, R, phase, f, g, opt);
}

RadialTrajectory integrate_dirac_type(const PotentialSpec &a_fn, const PotentialSpec &b_fn,
                                      double lambda, double m, double R,
                                      const SolveOptions &opt) {
  eta_of(lambda, m);
  require(R > 0.0, "integrate_dirac_type: R must be positive");
  require(a_fn.inverse_r_coef() == 0.0 && b_fn.inverse_r_coef() == 0.0,
          "integrate_dirac_type: a and b must be regular at the origin");
  auto rhs = [&a_fn, &b_fn, lambda, m](double r, const double *z, double *d) {
    const double a = a_fn(r), b = b_fn(r);
    d[0] = -a * z[0] + (lambda + m - b) * z[1];
    d[1] = a * z[1] - (lambda - m - b) * z[0];
  };
  RadialTrajectory tr;
  tr.system = System::dirac_type;
  tr.lambda = lambda;
  tr.m = m;
  tr.path = ode::integrate(rhs, 0.0, R, {0.0, 1.0}, ode_options(opt));
  return tr;
}

DiracScattering extract_s_dirac_type(const PotentialSpec &a_fn, const PotentialSpec &b_fn,
                                     double lambda, double m, double R,
                                     const ExtractOptions &opt) {
  const double eta = eta_of(lambda, m);
  require(b_fn.a() == 1.0, "extract_s_dirac_type: b must use the reference point 1");
  SolveOptions so = opt.solve;
  so.dense = false;
  const auto tr = integrate_dirac_type(a_fn, b_fn, lambda, m, R, so);
  const auto [f, g] = tr.final_state();
  DiracLocal loc;
  loc.d = [&a_fn](double r) { return a_fn(r); };
  loc.dd = [&a_fn](double r) { return a_fn.deriv(r); };
  loc.v = [&b_fn](double r) { return b_fn(r); };
  loc.vd = [&b_fn](double r) { return b_fn.deriv(r); };
  const double phase = lambda / eta * b_fn.antiderivative(R);
  return match_dirac(loc, lambda, m, R, phase, f, g, opt);
}

} // namespace genscatter::radial
