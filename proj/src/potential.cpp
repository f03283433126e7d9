#include "genscatter/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genscatter/errors.hpp"
#include "genscatter/quadrature.hpp"

namespace genscatter {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

double quadrature_of(const Smooth &s, double a, double r) {
  if (a == r)
    return 0.0;
  const double lo = std::min(a, r), hi = std::max(a, r);
  std::vector<double> br = {lo};
  for (double b : s.breaks)
    if (b > lo && b < hi)
      br.push_back(b);
  br.push_back(hi);
  std::sort(br.begin(), br.end());
  quad::Options opt;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-13;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i)
    total += quad::integrate(s.eval, br[i], br[i + 1], opt).value;
  return r >= a ? total : -total;
}

} // namespace

PotentialSpec::PotentialSpec(double a) : a_(a) {
  require(a > 0.0, "PotentialSpec: reference point a must be positive");
}

PotentialSpec &PotentialSpec::add(Component c) {
  if (const auto *s = std::get_if<Smooth>(&c))
    require(static_cast<bool>(s->eval) && static_cast<bool>(s->deriv),
            "PotentialSpec: smooth component needs eval and deriv");
  parts_.push_back(std::move(c));
  return *this;
}

PotentialSpec PotentialSpec::operator+(const PotentialSpec &other) const {
  require(a_ == other.a_, "PotentialSpec: sum of potentials with different reference points");
  PotentialSpec out = *this;
  for (const auto &c : other.parts_)
    out.parts_.push_back(c);
  return out;
}

double PotentialSpec::operator()(double r) const {
  double v = 0.0;
  for (const auto &c : parts_)
    v += std::visit(overloaded{[&](const InverseR &q) { return q.coef / r; },
                               [&](const Smooth &s) { return s.eval(r); }},
                    c);
  return v;
}

double PotentialSpec::deriv(double r) const {
  double v = 0.0;
  for (const auto &c : parts_)
    v += std::visit(overloaded{[&](const InverseR &q) { return -q.coef / (r * r); },
                               [&](const Smooth &s) { return s.deriv(r); }},
                    c);
  return v;
}

double PotentialSpec::inverse_r_coef() const {
  double c = 0.0;
  for (const auto &p : parts_)
    if (const auto *q = std::get_if<InverseR>(&p))
      c += q->coef;
  return c;
}

double PotentialSpec::smooth(double r) const {
  double v = 0.0;
  for (const auto &p : parts_)
    if (const auto *s = std::get_if<Smooth>(&p))
      v += s->eval(r);
  return v;
}

double PotentialSpec::antiderivative(double r) const {
  require(r > 0.0, "PotentialSpec::antiderivative: r must be positive");
  double v = 0.0;
  for (const auto &c : parts_)
    v += std::visit(overloaded{[&](const InverseR &q) { return q.coef * std::log(r / a_); },
                               [&](const Smooth &s) {
                                 return s.antideriv ? s.antideriv(a_, r) : quadrature_of(s, a_, r);
                               }},
                    c);
  return v;
}

double PotentialSpec::antiderivative_by_quadrature(double r) const {
  require(r > 0.0, "PotentialSpec::antiderivative_by_quadrature: r must be positive");
  double v = 0.0;
  for (const auto &c : parts_) {
    if (const auto *q = std::get_if<InverseR>(&c)) {
      Smooth s;
      s.eval = [coef = q->coef](double u) { return coef / u; };
      v += quadrature_of(s, a_, r);
    } else {
      v += quadrature_of(std::get<Smooth>(c), a_, r);
    }
  }
  return v;
}

bool PotentialSpec::has_analytic_antiderivative() const {
  return std::all_of(parts_.begin(), parts_.end(), [](const Component &c) {
    const auto *s = std::get_if<Smooth>(&c);
    return !s || static_cast<bool>(s->antideriv);
  });
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (parts_.empty())
    os << "0";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i)
      os << " + ";
    std::visit(overloaded{[&](const InverseR &q) { os << q.coef << "/r"; },
                          [&](const Smooth &s) { os << (s.name.empty() ? "smooth" : s.name); }},
               parts_[i]);
  }
  os << " (a=" << a_ << ")";
  return os.str();
}

PotentialSpec PotentialSpec::zero(double a) { return PotentialSpec(a); }

PotentialSpec PotentialSpec::coulomb(double z, double a) {
  PotentialSpec p(a);
  p.add(InverseR{2.0 * z});
  return p;
}

PotentialSpec PotentialSpec::inverse_square(double c, double a) {
  Smooth s;
  s.eval = [c](double r) { return c / ((1.0 + r) * (1.0 + r)); };
  s.deriv = [c](double r) { return -2.0 * c / ((1.0 + r) * (1.0 + r) * (1.0 + r)); };
  s.antideriv = [c](double lo, double r) { return c * (1.0 / (1.0 + lo) - 1.0 / (1.0 + r)); };
  std::ostringstream os;
  os.precision(17);
  os << c << "/(1+r)^2";
  s.name = os.str();
  PotentialSpec p(a);
  p.add(std::move(s));
  return p;
}

PotentialSpec PotentialSpec::inverse_linear(double c, double a) {
  Smooth s;
  s.eval = [c](double r) { return c / (1.0 + r); };
  s.deriv = [c](double r) { return -c / ((1.0 + r) * (1.0 + r)); };
  s.antideriv = [c](double lo, double r) { return c * std::log((1.0 + r) / (1.0 + lo)); };
  std::ostringstream os;
  os.precision(17);
  os << c << "/(1+r)";
  s.name = os.str();
  PotentialSpec p(a);
  p.add(std::move(s));
  return p;
}

PotentialSpec PotentialSpec::exponential(double c, double a) {
  Smooth s;
  s.eval = [c](double r) { return c * std::exp(-r); };
  s.deriv = [c](double r) { return -c * std::exp(-r); };
  s.antideriv = [c](double lo, double r) { return c * (std::exp(-lo) - std::exp(-r)); };
  std::ostringstream os;
  os.precision(17);
  os << c << "*exp(-r)";
  s.name = os.str();
  PotentialSpec p(a);
  p.add(std::move(s));
  return p;
}

PotentialSpec PotentialSpec::compact_bump(double c, double r1, double r2, double a) {
  require(0.0 <= r1 && r1 < r2, "compact_bump: need 0 <= r1 < r2");
  auto u_of = [r1, r2](double r) { return (2.0 * r - r1 - r2) / (r2 - r1); };
  Smooth s;
  s.eval = [=](double r) {
    const double u = u_of(r);
    return std::abs(u) >= 1.0 ? 0.0 : c * std::exp(-1.0 / (1.0 - u * u));
  };
  s.deriv = [=](double r) {
    const double u = u_of(r);
    if (std::abs(u) >= 1.0)
      return 0.0;
    const double w = 1.0 - u * u;
    return c * std::exp(-1.0 / w) * (-2.0 * u / (w * w)) * 2.0 / (r2 - r1);
  };
  s.breaks = {r1, r2};
  std::ostringstream os;
  os.precision(17);
  os << c << "*bump[" << r1 << "," << r2 << "]";
  s.name = os.str();
  PotentialSpec p(a);
  p.add(std::move(s));
  return p;
}

PotentialSpec PotentialSpec::dirac(double A, const PotentialSpec &phi) {
  require(A > 0.0, "PotentialSpec::dirac: A must be positive");
  PotentialSpec p(phi.a());
  p.add(InverseR{-A});
  for (const auto &c : phi.components())
    p.add(c);
  return p;
}

} // namespace genscatter
