#pragma once

// Dyson series coefficients for matrix-valued interactions and the cutoff
// renormalization pipeline for second-order coefficients.

#include <complex>
#include <functional>
#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace genscatter::renorm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct MatrixInteraction {
  std::function<Matrix(double)> eval;
  int dimension = 0;
  Matrix operator()(double t) const { return eval(t); }
};

struct DysonOptions {
  int nodes = 16;           // Gauss-Legendre points per panel
  int initial_panels = 4;
  int max_panels = 8192;
  double tol = 1e-13;       // relative change of every S_k(t) between refinements
};

// S_0 = I, S_k(t) = -i int_{t0}^t V(u) S_{k-1}(u) du, k = 0..K
std::vector<Matrix> dyson_coefficients(const MatrixInteraction &v, double t0, double t, int K,
                                       const DysonOptions &opt = {});
Matrix dyson_sum(std::span<const Matrix> coeffs, double eps);
// || A* A - I ||_2
double unitarity_defect(const Matrix &a);

struct DivergenceProfile {
  double phi = 0.0, psi = 0.0, nu = 0.0, mu = 0.0;  // L^2, L, ln L, 1
};

struct ProfileFit {
  DivergenceProfile profile;
  double tail = 0.0;      // coefficient of the 1/L column, 0 if unused
  double residual = 0.0;  // rms of Im a2
};

struct FitOptions {
  bool tail_column = true;   // add 1/L so o(1) tails do not leak into mu
  double imag_tol = 1e-8;    // allowed |Re a2| relative to max(1, |a2|)
};

ProfileFit fit_divergence_profile(std::span<const std::pair<double, Complex>> samples,
                                  const FitOptions &opt = {});

// exp(i eps^2 (phi L^2 + psi L)) L^{i eps^2 nu}
Complex u0_factor(const DivergenceProfile &p, double L, double eps);
// a2 - i (phi L^2 + psi L + nu ln L)
Complex regularized_coefficient(Complex a2, const DivergenceProfile &p, double L);

struct Moduli {
  double abs_raw = 0.0, abs_reg = 0.0;
};
// |s| and |s u0|; u0 must be unimodular within 1e-12
Moduli modulus_invariance(Complex s_raw, Complex u0);

// CSV with columns L, re_a2, im_a2; '#' lines and a header row are skipped
std::vector<std::pair<double, Complex>> read_samples_csv(std::istream &in);

} // namespace genscatter::renorm
