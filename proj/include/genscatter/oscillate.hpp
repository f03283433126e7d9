#pragma once

// Log-singular oscillatory quadrature for the truncated perturbation terms
// S_1(t, tau) and a bilinear second-order example, plus growth fits and
// regularization by deviation factors.

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "genscatter/coulomb.hpp"

namespace genscatter::osc {

using Complex = std::complex<double>;

// Smooth test function supported in [c1, c2], 0 < c1 < c2.
struct TestFunction {
  std::function<double(double)> eval;
  double c1 = 0.5;
  double c2 = 2.0;

  double operator()(double p) const { return (p <= c1 || p >= c2) ? 0.0 : eval(p); }

  // exp(-1/(1-u^2)) with u mapping [c1, c2] onto [-1, 1].
  static TestFunction bump(double c1, double c2);
};

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms
};

struct QuadControl {
  double abs_tol = 1e-10;  // absolute error target of the p-integral
  double rel_tol = 1e-10;
};

// E(p) = int_tau^t exp(i w t1) dt1, w = (k - p)(k + p), evaluated stably.
Complex window_factor(double k, double p, double t, double tau);

// Values of a smooth integrand split as regular + log_coef * ln|p - k|.
struct LogSplit {
  double regular;
  double log_coef;
};
using SplitFn = std::function<LogSplit(double)>;

// int_{c1}^{c2} [a(p) + b(p) ln|p - k|] E(p) dp for smooth a, b. The panels
// put k on a boundary and are never wider than half an oscillation; the log
// term is integrated after subtracting b(k) E(k) ln|p - k| on the two
// panels next to k, whose contribution is added back in closed form.
Complex log_oscillatory(const SplitFn &ab, double k, double c1,
                        double c2, double t, double tau, const QuadControl &qc = {});

// (2i/pi) int_tau^t int_0^inf f(p) Q_l((k^2+p^2)/(2pk)) exp(i(k^2-p^2)t1) dp dt1
// with k and l from `params` (z does not enter). Requires t >= tau.
Complex s1_truncated(const coulomb::Params &params, double t, double tau, const TestFunction &f,
                     const QuadControl &qc = {});

// Second-order term of the bilinear example at x = q, acting on the bump on
// [q/2, 2q] and divided by its value at q:
// -i int f(y) eps^2 p(q) p(y) ln|q^2 - y^2| E(y) dy / f(q).
Complex s2_example(double q, double t, double tau, const std::function<double(double)> &p_fn,
                   double eps, const QuadControl &qc = {});

// Least squares value ~ slope ln(scale) + intercept. Needs >= 3 samples with
// scales > 1; DegenerateDesign when all scales coincide.
GrowthFit fit_log_growth(std::span<const std::pair<double, double>> samples);

using RawMap = std::function<Complex(double t, double tau)>;
using PhaseMap = std::function<Complex(double)>;

// (t, tau) -> conj(w_plus(t)) raw(t, tau) w_minus(tau). The returned map
// throws DomainError if a factor is not unimodular to 1e-12.
RawMap regularize_by_deviation(RawMap raw, PhaseMap w_plus, PhaseMap w_minus);

// Deviation factors that depend on the expansion parameter g.
using FamilyPhase = std::function<Complex(double time, double g)>;

// Coefficient of g in conj(w_plus(t; g)) (1 + g raw) w_minus(tau; g),
// by central difference of step h around g = 0.
Complex regularized_coefficient(Complex raw, double t, double tau, const FamilyPhase &w_plus,
                                const FamilyPhase &w_minus, double h = 1e-6);

// Coulomb factors for regularizing S_1: w_plus(t; z) = |t|^{iz/k},
// w_minus(tau; z) = |tau|^{-iz/k}.
FamilyPhase coulomb_w_plus(double k);
FamilyPhase coulomb_w_minus(double k);

// Second-order example factors as functions of g = eps^2: t^{i g phi}, |tau|^{-i g phi}.
FamilyPhase example_w_plus(double phi);
FamilyPhase example_w_minus(double phi);

// One row of a diagonal (t = -tau = scale) growth study.
struct GrowthRow {
  double scale;        // t = -tau
  Complex raw;         // normalized coefficient before regularization
  Complex regularized; // after the deviation factors
};

struct GrowthStudy {
  std::vector<GrowthRow> rows;
  GrowthFit raw_fit;          // of Im(raw) against ln|t tau|
  GrowthFit regularized_fit;  // of Im(regularized) against ln|t tau|
};

// S_1 f / f(k) on t = -tau in `scales`, regularized with the Coulomb factors.
GrowthStudy s1_growth(const coulomb::Params &params, std::span<const double> scales,
                      const TestFunction &f, const QuadControl &qc = {});

// Bilinear-example coefficient S_2 / eps^2 on t = -tau in `scales`, regularized
// with the t^{i g phi} |tau|^{-i g phi} factors at the given phi.
GrowthStudy s2_growth(double q, std::span<const double> scales,
                      const std::function<double(double)> &p_fn, double phi,
                      const QuadControl &qc = {});

} // namespace genscatter::osc
