#include "genscatter/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genscatter/errors.hpp"
#include "genscatter/quadrature.hpp"

namespace genscatter::renorm {

namespace {

constexpr Complex I(0.0, 1.0);

// Q(i, j) = int_{-1}^{x_i} l_j(x) dx for the Lagrange basis on Gauss nodes
Eigen::MatrixXd cumulative_matrix(const quad::Rule &rule) {
  const int n = static_cast<int>(rule.nodes.size());
  auto legendre = [n](double x) {
    std::vector<double> p(n + 1);
    p[0] = 1.0;
    if (n >= 1) p[1] = x;
    for (int k = 1; k < n; ++k) p[k + 1] = ((2 * k + 1) * x * p[k] - k * p[k - 1]) / (k + 1);
    return p;
  };
  std::vector<std::vector<double>> pn(n);
  for (int j = 0; j < n; ++j) pn[j] = legendre(rule.nodes[j]);
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i) {
    const auto pi = pn[i];
    for (int j = 0; j < n; ++j) {
      // l_j = w_j sum_k (2k+1)/2 P_k(x_j) P_k; int P_k = (P_{k+1} - P_{k-1})/(2k+1)
      double s = 0.5 * (rule.nodes[i] + 1.0);
      for (int k = 1; k < n; ++k) s += 0.5 * pn[j][k] * (pi[k + 1] - pi[k - 1]);
      q(i, j) = rule.weights[j] * s;
    }
  }
  return q;
}

std::vector<Matrix> dyson_pass(const MatrixInteraction &v, double t0, double t, int K,
                               const quad::Rule &rule, const Eigen::MatrixXd &Q, int panels) {
  const int d = v.dimension, n = static_cast<int>(rule.nodes.size());
  const double h = (t - t0) / panels;
  std::vector<Matrix> left(K + 1, Matrix::Zero(d, d));
  left[0] = Matrix::Identity(d, d);
  std::vector<Matrix> vn(n);
  // s[k][j] = S_k at node j of the current panel
  std::vector<std::vector<Matrix>> s(K + 1, std::vector<Matrix>(n));
  for (int p = 0; p < panels; ++p) {
    const double a = t0 + p * h;
    for (int j = 0; j < n; ++j) {
      vn[j] = v(a + 0.5 * h * (rule.nodes[j] + 1.0));
      s[0][j] = Matrix::Identity(d, d);
    }
    for (int k = 1; k <= K; ++k) {
      std::vector<Matrix> f(n);
      for (int j = 0; j < n; ++j) f[j] = -I * (vn[j] * s[k - 1][j]);
      Matrix total = Matrix::Zero(d, d);
      for (int j = 0; j < n; ++j) total += rule.weights[j] * f[j];
      for (int i = 0; i < n; ++i) {
        Matrix acc = Matrix::Zero(d, d);
        for (int j = 0; j < n; ++j) acc += Q(i, j) * f[j];
        s[k][i] = left[k] + 0.5 * h * acc;
      }
      left[k] += 0.5 * h * total;
    }
  }
  return left;
}

} // namespace

std::vector<Matrix> dyson_coefficients(const MatrixInteraction &v, double t0, double t, int K,
                                       const DysonOptions &opt) {
  require(K >= 0 && K <= 12, "dyson_coefficients: need 0 <= K <= 12");
  require(v.dimension >= 1 && v.dimension <= 8, "dyson_coefficients: dimension must be 1..8");
  require(opt.nodes >= 2 && opt.initial_panels >= 1, "dyson_coefficients: bad options");
  if (K == 0 || t == t0) {
    std::vector<Matrix> out(K + 1, Matrix::Zero(v.dimension, v.dimension));
    out[0] = Matrix::Identity(v.dimension, v.dimension);
    return out;
  }
  const auto rule = quad::gauss_legendre(opt.nodes);
  const auto Q = cumulative_matrix(rule);
  int panels = opt.initial_panels;
  auto prev = dyson_pass(v, t0, t, K, rule, Q, panels);
  while (panels < opt.max_panels) {
    panels *= 2;
    auto next = dyson_pass(v, t0, t, K, rule, Q, panels);
    bool done = true;
    for (int k = 1; k <= K && done; ++k) {
      if ((next[k] - prev[k]).norm() > opt.tol * std::max(1.0, next[k].norm())) done = false;
    }
    prev = std::move(next);
    if (done) return prev;
  }
  throw QuadratureError("dyson_coefficients: panel refinement did not converge");
}

Matrix dyson_sum(std::span<const Matrix> coeffs, double eps) {
  require(!coeffs.empty(), "dyson_sum: no coefficients");
  Matrix out = Matrix::Zero(coeffs[0].rows(), coeffs[0].cols());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out = eps * out + *it;
  return out;
}

double unitarity_defect(const Matrix &a) {
  const Matrix d = a.adjoint() * a - Matrix::Identity(a.rows(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(d);
  return svd.singularValues()(0);
}

ProfileFit fit_divergence_profile(std::span<const std::pair<double, Complex>> samples,
                                  const FitOptions &opt) {
  if (samples.size() < 6)
    throw DomainError("fit_divergence_profile: need at least 6 samples");
  double lo = samples[0].first, hi = lo;
  for (const auto &[L, a2] : samples) {
    if (!(L > 1.0)) throw DomainError("fit_divergence_profile: every L must exceed 1");
    if (std::abs(a2.real()) > opt.imag_tol * std::max(1.0, std::abs(a2)))
      throw DomainError("fit_divergence_profile: sample at L=" + std::to_string(L) +
                        " is not purely imaginary");
    lo = std::min(lo, L);
    hi = std::max(hi, L);
  }
  if (hi / lo < 100.0 * (1.0 - 1e-12))
    throw DomainError("fit_divergence_profile: L must span at least two decades");

  const int n = static_cast<int>(samples.size()), cols = opt.tail_column ? 5 : 4;
  Eigen::MatrixXd A(n, cols);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double L = samples[i].first;
    A(i, 0) = L * L;
    A(i, 1) = L;
    A(i, 2) = std::log(L);
    A(i, 3) = 1.0;
    if (opt.tail_column) A(i, 4) = 1.0 / L;
    y(i) = samples[i].second.imag();
  }
  // equilibrate columns before the pivoted QR
  Eigen::VectorXd scale(cols);
  for (int c = 0; c < cols; ++c) {
    scale(c) = A.col(c).norm();
    A.col(c) /= scale(c);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < cols)
    throw DegenerateDesign("fit_divergence_profile: samples do not determine the profile");
  Eigen::VectorXd x = qr.solve(y);
  const double res = (A * x - y).norm() / std::sqrt(double(n));
  x = x.cwiseQuotient(scale);
  ProfileFit out;
  out.profile = {x(0), x(1), x(2), x(3)};
  out.tail = opt.tail_column ? x(4) : 0.0;
  out.residual = res;
  return out;
}

Complex u0_factor(const DivergenceProfile &p, double L, double eps) {
  require(L > 1.0, "u0_factor: requires L > 1");
  const double e2 = eps * eps;
  return std::polar(1.0, e2 * (p.phi * L * L + p.psi * L) + e2 * p.nu * std::log(L));
}

Complex regularized_coefficient(Complex a2, const DivergenceProfile &p, double L) {
  require(L > 1.0, "regularized_coefficient: requires L > 1");
  return a2 - I * (p.phi * L * L + p.psi * L + p.nu * std::log(L));
}

Moduli modulus_invariance(Complex s_raw, Complex u0) {
  if (std::abs(std::abs(u0) - 1.0) > 1e-12)
    throw DomainError("modulus_invariance: factor is not unimodular");
  return {std::abs(s_raw), std::abs(s_raw * u0)};
}

std::vector<std::pair<double, Complex>> read_samples_csv(std::istream &in) {
  std::vector<std::pair<double, Complex>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() < 3) throw ConfigError("samples line " + std::to_string(lineno) + ": need 3 columns");
    double v[3];
    bool numeric = true;
    for (int c = 0; c < 3; ++c) {
      try {
        std::size_t pos = 0;
        v[c] = std::stod(f[c], &pos);
        if (f[c].find_first_not_of(" \t", pos) != std::string::npos) numeric = false;
      } catch (const std::exception &) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (out.empty()) continue;  // header row
      throw ConfigError("samples line " + std::to_string(lineno) + ": not numeric");
    }
    out.emplace_back(v[0], Complex(v[1], v[2]));
  }
  return out;
}

} // namespace genscatter::renorm
