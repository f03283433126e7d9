#pragma once

// Momentum-space Dirac matrices H(q), the doubled 8x8 operator, spectral
// projectors and validators for block structure of scattering matrices.

#include <array>
#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace genscatter::diracq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Momentum3 {
  double q1 = 0.0, q2 = 0.0, q3 = 0.0;
  double norm2() const { return q1 * q1 + q2 * q2 + q3 * q3; }
};

struct SpectralDecomposition {
  double eigenvalue_neg = 0.0, eigenvalue_pos = 0.0;
  Matrix projector_neg, projector_pos;
  Matrix basis_neg, basis_pos;  // orthonormal columns spanning each eigenspace
};

Matrix h_matrix(const Momentum3 &q, double m);
// unnormalized g_1..g_4 as columns; g_3, g_4 are singular at q = 0
Matrix closed_form_eigenvectors(const Momentum3 &q, double m);
SpectralDecomposition eigensystem(const Momentum3 &q, double m);

Matrix h_hat_matrix(const Momentum3 &q, double m);
SpectralDecomposition big_eigensystem(const Momentum3 &q, double m);

double operator_norm(const Matrix &a);
double unitarity_defect(const Matrix &s);

struct StructureCheck {
  double offblock_norm = 0.0;
  double block_unitarity_defect = 0.0;
};
// S is 4x4 or 8x8 and unitary within 1e-10
StructureCheck check_structure(const Matrix &s, const Momentum3 &q, double m);

// |s_kl| with 1-based indices, after checking the rest of row k and column l vanish
double corollary_modulus(const Matrix &s, int k_idx, int l_idx);

// exp(i f(H)) from the two eigenvalue phases
Matrix spectral_function(const SpectralDecomposition &d, double phase_neg, double phase_pos);
// Haar-distributed unitary from a seeded Gaussian QR
Matrix random_unitary(int n, std::uint64_t seed);

// rows of [re, im] pairs
std::string to_json(const Matrix &a);
Matrix from_json(const std::string &text);

} // namespace genscatter::diracq
