#pragma once

// Radial potentials as sums of a Coulomb-type 1/r part and smooth parts,
// with access to values, derivatives and antiderivatives from a reference
// point a.

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace genscatter {

// coef / r
struct InverseR {
  double coef = 0.0;
};

struct Smooth {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  // int_a^r eval; left empty when only quadrature is available
  std::function<double(double a, double r)> antideriv;
  std::vector<double> breaks;  // kinks or support ends, helps quadrature
  std::string name;
};

using Component = std::variant<InverseR, Smooth>;

class PotentialSpec {
public:
  explicit PotentialSpec(double a = 1.0);

  PotentialSpec &add(Component c);
  PotentialSpec operator+(const PotentialSpec &other) const;

  double a() const { return a_; }
  const std::vector<Component> &components() const { return parts_; }

  double operator()(double r) const;
  double deriv(double r) const;
  // total 1/r coefficient
  double inverse_r_coef() const;
  // value without the 1/r part
  double smooth(double r) const;
  // int_a^r of the potential; analytic where available, else quadrature
  double antiderivative(double r) const;
  // same integral by adaptive quadrature of every component
  double antiderivative_by_quadrature(double r) const;
  bool has_analytic_antiderivative() const;
  std::string describe() const;

  // 2z / r
  static PotentialSpec coulomb(double z, double a = 1.0);
  // c / (1 + r)^2
  static PotentialSpec inverse_square(double c, double a = 1.0);
  // c / (1 + r)
  static PotentialSpec inverse_linear(double c, double a = 1.0);
  // c exp(-r)
  static PotentialSpec exponential(double c, double a = 1.0);
  // c exp(-1/(1-u^2)) on [r1, r2], antiderivative by quadrature
  static PotentialSpec compact_bump(double c, double r1, double r2, double a = 1.0);
  // -A / r + phi (Dirac potential v)
  static PotentialSpec dirac(double A, const PotentialSpec &phi);
  static PotentialSpec zero(double a = 1.0);

private:
  double a_;
  std::vector<Component> parts_;
};

} // namespace genscatter
