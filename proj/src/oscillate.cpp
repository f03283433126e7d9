#include "genscatter/oscillate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "genscatter/errors.hpp"
#include "genscatter/quadrature.hpp"
#include "genscatter/specfun.hpp"

namespace genscatter::osc {

namespace {

constexpr double pi = std::numbers::pi;

double sinc(double x) {
  if (std::abs(x) < 1e-4)
    return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void check_unimodular(Complex w, const char *what) {
  if (std::abs(std::abs(w) - 1.0) > 1e-12)
    throw DomainError(std::string("regularize_by_deviation: ") + what + " is not unimodular");
}

} // namespace

TestFunction TestFunction::bump(double c1, double c2) {
  require(0.0 < c1 && c1 < c2, "TestFunction::bump: need 0 < c1 < c2");
  TestFunction f;
  f.c1 = c1;
  f.c2 = c2;
  f.eval = [c1, c2](double p) {
    const double u = (2.0 * p - c1 - c2) / (c2 - c1);
    if (std::abs(u) >= 1.0)
      return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
  };
  return f;
}

Complex window_factor(double k, double p, double t, double tau) {
  const double w = (k - p) * (k + p);
  return std::polar((t - tau) * sinc(0.5 * w * (t - tau)), 0.5 * w * (t + tau));
}

Complex log_oscillatory(const SplitFn &ab, double k, double c1, double c2, double t,
                        double tau, const QuadControl &qc) {
  require(c1 < c2, "log_oscillatory: empty support");
  require(t >= tau, "log_oscillatory: window needs t >= tau");
  if (t == tau)
    return 0.0;

  const double T = std::max({std::abs(t), std::abs(tau), 1.0});
  const double half_wave = pi / (2.0 * std::max(std::abs(c1), std::abs(c2)) * T);
  const double width = std::min(half_wave, (c2 - c1) / 8.0);

  std::vector<double> breaks;
  auto fill = [&](double lo, double hi) {
    const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    for (int i = 0; i < n; ++i)
      breaks.push_back(lo + (hi - lo) * i / n);
  };
  const bool inside = c1 < k && k < c2;
  if (inside) {
    fill(c1, k);
    fill(k, c2);
  } else {
    fill(c1, c2);
  }
  breaks.push_back(c2);

  const double ek = t - tau;  // E(k)
  const double bk = inside ? ab(k).log_coef : 0.0;

  Complex total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const bool touches = inside && (lo == k || hi == k);
    auto g = [&](double p) -> Complex {
      const LogSplit s = ab(p);
      const Complex e = window_factor(k, p, t, tau);
      if (!touches)
        return (s.regular + s.log_coef * std::log(std::abs(p - k))) * e;
      return s.regular * e + (s.log_coef * e - bk * ek) * std::log(std::abs(p - k));
    };
    quad::Options opt;
    opt.abs_tol = qc.abs_tol * (hi - lo) / (c2 - c1);
    opt.rel_tol = qc.rel_tol;
    total += quad::integrate(g, lo, hi, opt).value;
    if (touches) {
      const double h = hi - lo;
      total += bk * ek * (h * std::log(h) - h);
    }
  }
  return total;
}

Complex s1_truncated(const coulomb::Params &params, double t, double tau, const TestFunction &f,
                     const QuadControl &qc) {
  coulomb::validate(params);
  require(t >= tau, "s1_truncated: requires t >= tau");
  require(0.0 < f.c1 && f.c1 < f.c2, "s1_truncated: test function support must lie in (0, inf)");
  const double k = params.k;
  const int ell = params.ell;
  // Q_l(x(p)) = P_l(x) [ln(p + k) - ln|p - k|] - W_{l-1}(x)
  auto ab = [&](double p) -> LogSplit {
    const double fp = f(p);
    if (fp == 0.0)
      return {0.0, 0.0};
    const double x = (k * k + p * p) / (2.0 * p * k);
    const auto parts = specfun::legendre_q_parts(ell, x);
    return {fp * (parts.log_coef * std::log(p + k) - parts.remainder), -fp * parts.log_coef};
  };
  return Complex(0.0, 2.0 / pi) * log_oscillatory(ab, k, f.c1, f.c2, t, tau, qc);
}

Complex s2_example(double q, double t, double tau, const std::function<double(double)> &p_fn,
                   double eps, const QuadControl &qc) {
  require(q > 0.0, "s2_example: q must be positive");
  require(t >= tau, "s2_example: requires t >= tau");
  const TestFunction f = TestFunction::bump(0.5 * q, 2.0 * q);
  const double pq = p_fn(q);
  require(pq > 0.0, "s2_example: p(q) must be positive");
  // ln|q^2 - y^2| = ln|y - q| + ln(y + q)
  auto ab = [&](double y) -> LogSplit {
    const double fy = f(y);
    if (fy == 0.0)
      return {0.0, 0.0};
    const double w = eps * eps * pq * fy * p_fn(y);
    return {w * std::log(y + q), w};
  };
  return Complex(0.0, -1.0) * log_oscillatory(ab, q, f.c1, f.c2, t, tau, qc) / f(q);
}

GrowthFit fit_log_growth(std::span<const std::pair<double, double>> samples) {
  require(samples.size() >= 3, "fit_log_growth: need at least 3 samples");
  double mx = 0.0, my = 0.0;
  for (const auto &[s, v] : samples) {
    require(s > 1.0, "fit_log_growth: scales must exceed 1");
    mx += std::log(s);
    my += v;
  }
  const double n = static_cast<double>(samples.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto &[s, v] : samples) {
    const double dx = std::log(s) - mx;
    sxx += dx * dx;
    sxy += dx * (v - my);
  }
  if (!(sxx > 1e-24 * n))
    throw DegenerateDesign("fit_log_growth: all scales coincide");
  GrowthFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto &[s, v] : samples) {
    const double r = v - (fit.slope * std::log(s) + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

RawMap regularize_by_deviation(RawMap raw, PhaseMap w_plus, PhaseMap w_minus) {
  return [raw = std::move(raw), wp = std::move(w_plus), wm = std::move(w_minus)](double t,
                                                                                double tau) {
    const Complex a = wp(t), b = wm(tau);
    check_unimodular(a, "w_plus");
    check_unimodular(b, "w_minus");
    return std::conj(a) * raw(t, tau) * b;
  };
}

Complex regularized_coefficient(Complex raw, double t, double tau, const FamilyPhase &w_plus,
                                const FamilyPhase &w_minus, double h) {
  auto at = [&](double g) {
    auto reg = regularize_by_deviation([&](double, double) { return 1.0 + g * raw; },
                                       [&](double s) { return w_plus(s, g); },
                                       [&](double s) { return w_minus(s, g); });
    return reg(t, tau);
  };
  return (at(h) - at(-h)) / (2.0 * h);
}

FamilyPhase coulomb_w_plus(double k) {
  return [k](double time, double z) { return std::polar(1.0, z / k * std::log(std::abs(time))); };
}

FamilyPhase coulomb_w_minus(double k) {
  return [k](double time, double z) { return std::polar(1.0, -z / k * std::log(std::abs(time))); };
}

FamilyPhase example_w_plus(double phi) {
  return [phi](double time, double g) { return std::polar(1.0, g * phi * std::log(std::abs(time))); };
}

FamilyPhase example_w_minus(double phi) {
  return [phi](double time, double g) { return std::polar(1.0, -g * phi * std::log(std::abs(time))); };
}

namespace {

void fit_study(GrowthStudy &st) {
  std::vector<std::pair<double, double>> raw, reg;
  for (const auto &r : st.rows) {
    raw.emplace_back(r.scale * r.scale, r.raw.imag());
    reg.emplace_back(r.scale * r.scale, r.regularized.imag());
  }
  st.raw_fit = fit_log_growth(raw);
  st.regularized_fit = fit_log_growth(reg);
}

} // namespace

GrowthStudy s1_growth(const coulomb::Params &params, std::span<const double> scales,
                      const TestFunction &f, const QuadControl &qc) {
  const double fk = f(params.k);
  require(fk != 0.0, "s1_growth: test function vanishes at k");
  GrowthStudy st;
  for (double s : scales) {
    require(s > 1.0, "s1_growth: scales must exceed 1");
    const Complex raw = s1_truncated(params, s, -s, f, qc) / fk;
    const Complex reg = regularized_coefficient(raw, s, -s, coulomb_w_plus(params.k),
                                                coulomb_w_minus(params.k));
    st.rows.push_back({s, raw, reg});
  }
  fit_study(st);
  return st;
}

GrowthStudy s2_growth(double q, std::span<const double> scales,
                      const std::function<double(double)> &p_fn, double phi,
                      const QuadControl &qc) {
  GrowthStudy st;
  for (double s : scales) {
    require(s > 1.0, "s2_growth: scales must exceed 1");
    const Complex raw = s2_example(q, s, -s, p_fn, 1.0, qc);
    const Complex reg =
        regularized_coefficient(raw, s, -s, example_w_plus(phi), example_w_minus(phi));
    st.rows.push_back({s, raw, reg});
  }
  fit_study(st);
  return st;
}

} // namespace genscatter::osc
