#include "genscatter/diracq.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

#include "genscatter/errors.hpp"

namespace genscatter::diracq {

namespace {


Matrix doubled(const Matrix &a) {
  const auto n = a.rows();
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a;
  out.bottomRightCorner(n, n) = a;
  return out;
}

// modified Gram-Schmidt, applied twice
Matrix orthonormalize(Matrix v) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) v.col(j) -= v.col(i).dot(v.col(j)) * v.col(i);
      v.col(j).normalize();
    }
  return v;
}

} // namespace

Matrix h_matrix(const Momentum3 &q, double m) {
  require(m > 0.0, "h_matrix: m must be positive");
  const Complex a(q.q1, -q.q2), b(q.q1, q.q2);
  Matrix h(4, 4);
  h << m, 0, q.q3, a,
       0, m, b, -q.q3,
       q.q3, a, -m, 0,
       b, -q.q3, 0, -m;
  return h;
}

Matrix closed_form_eigenvectors(const Momentum3 &q, double m) {
  require(m > 0.0, "closed_form_eigenvectors: m must be positive");
  const double l3 = std::sqrt(m * m + q.norm2());
  const Complex mq(-q.q1, q.q2), pq(-q.q1, -q.q2);
  Matrix g(4, 4);
  const double dp = m + l3, dm = m - l3;
  g.col(0) << mq / dp, q.q3 / dp, 0.0, 1.0;
  g.col(1) << -q.q3 / dp, pq / dp, 1.0, 0.0;
  g.col(2) << mq / dm, q.q3 / dm, 0.0, 1.0;
  g.col(3) << -q.q3 / dm, pq / dm, 1.0, 0.0;
  return g;
}

SpectralDecomposition eigensystem(const Momentum3 &q, double m) {
  require(m > 0.0, "eigensystem: m must be positive");
  const double e = std::sqrt(m * m + q.norm2());
  SpectralDecomposition d;
  d.eigenvalue_neg = -e;
  d.eigenvalue_pos = e;
  Matrix neg(4, 2), pos(4, 2);
  if (q.norm2() < 1e-20) {
    neg.setZero();
    pos.setZero();
    neg(2, 0) = neg(3, 1) = 1.0;
    pos(0, 0) = pos(1, 1) = 1.0;
  } else {
    // B = sigma . q; negative: (-B w/(m+e), w), positive: (u, B u/(m+e))
    Eigen::Matrix2cd B;
    B << q.q3, Complex(q.q1, -q.q2), Complex(q.q1, q.q2), -q.q3;
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    neg.topRows(2) = -B * id / (m + e);
    neg.bottomRows(2) = id;
    pos.topRows(2) = id;
    pos.bottomRows(2) = B * id / (m + e);
  }
  d.basis_neg = orthonormalize(neg);
  d.basis_pos = orthonormalize(pos);
  d.projector_neg = d.basis_neg * d.basis_neg.adjoint();
  d.projector_pos = d.basis_pos * d.basis_pos.adjoint();
  return d;
}

Matrix h_hat_matrix(const Momentum3 &q, double m) { return doubled(h_matrix(q, m)); }

SpectralDecomposition big_eigensystem(const Momentum3 &q, double m) {
  const auto s = eigensystem(q, m);
  SpectralDecomposition d;
  d.eigenvalue_neg = s.eigenvalue_neg;
  d.eigenvalue_pos = s.eigenvalue_pos;
  d.projector_neg = doubled(s.projector_neg);
  d.projector_pos = doubled(s.projector_pos);
  d.basis_neg = Matrix::Zero(8, 4);
  d.basis_pos = Matrix::Zero(8, 4);
  d.basis_neg.topLeftCorner(4, 2) = s.basis_neg;
  d.basis_neg.bottomRightCorner(4, 2) = s.basis_neg;
  d.basis_pos.topLeftCorner(4, 2) = s.basis_pos;
  d.basis_pos.bottomRightCorner(4, 2) = s.basis_pos;
  return d;
}

double operator_norm(const Matrix &a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double unitarity_defect(const Matrix &s) {
  require(s.rows() == s.cols(), "unitarity_defect: matrix must be square");
  return operator_norm(s.adjoint() * s - Matrix::Identity(s.rows(), s.cols()));
}

StructureCheck check_structure(const Matrix &s, const Momentum3 &q, double m) {
  if (!((s.rows() == 4 && s.cols() == 4) || (s.rows() == 8 && s.cols() == 8)))
    throw PreconditionViolation("check_structure: S must be 4x4 or 8x8");
  const double def = unitarity_defect(s);
  if (!(def <= 1e-10))
    throw PreconditionViolation("check_structure: S is not unitary (defect " +
                                std::to_string(def) + ")");
  const auto d = s.rows() == 4 ? eigensystem(q, m) : big_eigensystem(q, m);
  StructureCheck out;
  out.offblock_norm = operator_norm(d.projector_neg * s * d.projector_pos) +
                      operator_norm(d.projector_pos * s * d.projector_neg);
  for (const Matrix *b : {&d.basis_neg, &d.basis_pos}) {
    const Matrix blk = b->adjoint() * s * *b;
    out.block_unitarity_defect = std::max(out.block_unitarity_defect, unitarity_defect(blk));
  }
  return out;
}

double corollary_modulus(const Matrix &s, int k_idx, int l_idx) {
  if (s.rows() != s.cols())
    throw PreconditionViolation("corollary_modulus: matrix must be square");
  const int n = static_cast<int>(s.rows());
  if (k_idx < 1 || k_idx > n || l_idx < 1 || l_idx > n)
    throw PreconditionViolation("corollary_modulus: index out of range");
  const double def = unitarity_defect(s);
  if (!(def <= 1e-10))
    throw PreconditionViolation("corollary_modulus: S is not unitary (defect " +
                                std::to_string(def) + ")");
  const int k = k_idx - 1, l = l_idx - 1;
  std::ostringstream bad;
  int count = 0;
  auto probe = [&](int i, int j) {
    if (std::abs(s(i, j)) >= 1e-12) {
      bad << (count++ ? ", " : "") << "(" << i + 1 << "," << j + 1 << ")=" << std::abs(s(i, j));
    }
  };
  for (int j = 0; j < n; ++j)
    if (j != l) probe(k, j);
  for (int i = 0; i < n; ++i)
    if (i != k) probe(i, l);
  if (count)
    throw PreconditionViolation("corollary_modulus: nonzero entries " + bad.str());
  return std::abs(s(k, l));
}

Matrix spectral_function(const SpectralDecomposition &d, double phase_neg, double phase_pos) {
  return std::polar(1.0, phase_neg) * d.projector_neg + std::polar(1.0, phase_pos) * d.projector_pos;
}

Matrix random_unitary(int n, std::uint64_t seed) {
  require(n > 0, "random_unitary: n must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

std::string to_json(const Matrix &a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(row);
  }
  return rows.dump();
}

Matrix from_json(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("matrix json: ") + e.what());
  }
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ConfigError("matrix json: expected an array of rows");
  const auto n = j.size(), c = j[0].size();
  Matrix a(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != c) throw ConfigError("matrix json: ragged rows");
    for (std::size_t k = 0; k < c; ++k) {
      const auto &e = j[i][k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ConfigError("matrix json: entries must be [re, im]");
      a(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return a;
}

} // namespace genscatter::diracq
