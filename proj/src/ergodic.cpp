#include "genscatter/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "genscatter/errors.hpp"
#include "genscatter/parallel.hpp"
#include "genscatter/quadrature.hpp"
#include "genscatter/radial.hpp"

namespace genscatter::ergodic {

namespace {

quad::Options phase_options() {
  quad::Options o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-14;
  o.max_subdivisions = 20000;
  return o;
}

// int_lo^hi f(r s) dr on panels that respect the support breaks of f
double scaled_integral(const std::function<double(double)> &f, const std::vector<double> &breaks,
                       double s, double lo, double hi) {
  if (lo == hi) return 0.0;
  const double a = std::min(lo, hi), c = std::max(lo, hi);
  std::vector<double> br{a};
  for (double x : breaks)
    if (x / s > a && x / s < c) br.push_back(x / s);
  // geometric panels keep long ranges resolved
  for (double x = std::max(a, 1.0) * 4.0; x < c; x *= 4.0) br.push_back(x);
  br.push_back(c);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  const double v = quad::integrate_panels([&](double r) { return f(r * s); }, br, phase_options()).value;
  return hi >= lo ? v : -v;
}

double scaled_integral(const PotentialSpec &b, double s, double lo, double hi) {
  std::vector<double> breaks;
  for (const auto &comp : b.components())
    if (const auto *sm = std::get_if<Smooth>(&comp))
      breaks.insert(breaks.end(), sm->breaks.begin(), sm->breaks.end());
  return scaled_integral([&b](double r) { return b(r); }, breaks, s, lo, hi);
}

double speed(double p, double m) {
  require(p > 0.0 && m > 0.0, "dirac deviation: need p > 0 and m > 0");
  return p / std::hypot(p, m);
}

} // namespace

Complex w0_schrodinger(double t, double k, const PotentialSpec &pot) {
  require(k > 0.0, "w0_schrodinger: k must be positive");
  require(t * k >= pot.a(), "w0_schrodinger: requires t k >= a");
  // component by component in the time variable: int_a^{tk} q = k int_{a/k}^t q(k s) ds
  double phase = 0.0;
  for (const auto &comp : pot.components()) {
    if (const auto *ir = std::get_if<InverseR>(&comp)) {
      phase += ir->coef / (2.0 * k) * (std::log(t) - std::log(pot.a() / k));
    } else {
      const auto &sm = std::get<Smooth>(comp);
      if (sm.antideriv) {
        phase += sm.antideriv(pot.a(), t * k) / (2.0 * k);
      } else {
        std::vector<double> br;
        for (double x : sm.breaks) br.push_back(x);
        phase += 0.5 * scaled_integral(sm.eval, br, k, pot.a() / k, t);
      }
    }
  }
  return std::polar(1.0, phase);
}

double check_ergodic_schrodinger(const PotentialSpec &pot, double k, std::span<const double> t_grid) {
  std::vector<double> dev(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    dev[i] = std::abs(radial::deviation_schrodinger(t * k, k, pot) - w0_schrodinger(t, k, pot));
  });
  return dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

Complex w0_dirac(double t, double p, double m, const PotentialSpec &b) {
  require(std::abs(t) >= 1.0, "w0_dirac: requires |t| >= 1");
  const double s = speed(p, m);
  const double sgn = t > 0 ? 1.0 : -1.0;
  return std::polar(1.0, sgn * scaled_integral(b, s, 1.0, std::abs(t)));
}

Complex dirac_constant(const PotentialSpec &b, double p, double m) {
  const double s = speed(p, m);
  return std::polar(1.0, scaled_integral(b, s, 1.0 / s, 1.0));
}

DiracErgodicCheck check_ergodic_dirac(const PotentialSpec &b, double p, double m,
                                      std::span<const double> t_grid) {
  require(!t_grid.empty(), "check_ergodic_dirac: empty grid");
  require(b.a() == 1.0, "check_ergodic_dirac: b must use the reference point 1");
  const double s = speed(p, m);
  const double lambda = std::hypot(p, m);
  std::vector<Complex> ratio(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    require(t >= 1.0, "check_ergodic_dirac: grid must satisfy t >= 1");
    ratio[i] = radial::deviation_dirac(t * s, lambda, m, b) / w0_dirac(t, p, m, b);
  });
  DiracErgodicCheck out;
  out.c_of_p = ratio.front();
  for (const auto &r : ratio) {
    out.constancy = std::max(out.constancy, std::abs(r - out.c_of_p));
    out.modulus = std::max(out.modulus, std::abs(std::abs(r) - 1.0));
  }
  return out;
}

double check_admissibility(const DynamicalDeviation &w, std::span<const double> k_grid, double tau,
                           double t_eval) {
  std::vector<double> dev(k_grid.size());
  parallel_for(k_grid.size(), [&](std::size_t i) {
    const double k = k_grid[i];
    dev[i] = std::abs(w(t_eval + tau, k) / w(t_eval, k) - 1.0);
  });
  return dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

DynamicalDeviation coulomb_dynamical(double z) {
  return {[z](double t, double k) {
            require(t != 0.0 && k > 0.0, "coulomb deviation: need t != 0 and k > 0");
            return std::polar(1.0, -z / k * std::log(std::abs(t)));
          },
          "|t|^{-iz/k}"};
}

DynamicalDeviation schrodinger_dynamical(const PotentialSpec &pot) {
  return {[pot](double t, double k) { return w0_schrodinger(t, k, pot); },
          "exp((i/2k) int_a^{tk} q)"};
}

DynamicalDeviation dirac_dynamical(const PotentialSpec &b, double m) {
  return {[b, m](double t, double p) { return w0_dirac(t, p, m, b); },
          "exp(i sgn(t) int_1^{|t|} b(r s) dr)"};
}

} // namespace genscatter::ergodic
