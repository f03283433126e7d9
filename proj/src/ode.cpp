#include "genscatter/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genscatter/errors.hpp"

namespace genscatter::ode {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double sup_norm(const double *v, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    m = std::max(m, std::abs(v[i]));
  return m;
}

// Starting step in the spirit of Hairer's HINIT.
double initial_step(const Rhs &f, double r0, const State &y, const State &k1, double dir,
                    const Options &opt) {
  const std::size_t n = y.size();
  const double sk = opt.atol + opt.rtol * sup_norm(y.data(), n);
  const double dnf = sup_norm(k1.data(), n) / sk;
  const double dny = sup_norm(y.data(), n) / sk;
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
  h = std::min(h, opt.max_step);
  State y1(n), k2(n);
  for (std::size_t i = 0; i < n; ++i)
    y1[i] = y[i] + dir * h * k1[i];
  f(r0 + dir * h, y1.data(), k2.data());
  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    der2 = std::max(der2, std::abs(k2[i] - k1[i]));
  der2 /= sk * h;
  const double der = std::max(der2, dnf);
  const double h1 = der <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der, 0.2);
  return std::min({100.0 * h, h1, opt.max_step});
}

} // namespace

State Trajectory::at(double r) const {
  require(!step_r_.empty() || r == r_end_, "Trajectory::at: no dense output stored");
  const double lo = std::min(r_start_, r_end_), hi = std::max(r_start_, r_end_);
  require(r >= lo && r <= hi, "Trajectory::at: r outside the integrated range");
  if (step_r_.empty())
    return y_end_;
  const bool forward = r_end_ >= r_start_;
  // Step index whose interval contains r.
  std::size_t idx;
  if (forward)
    idx = std::upper_bound(step_r_.begin(), step_r_.end(), r) - step_r_.begin();
  else
    idx = std::upper_bound(step_r_.begin(), step_r_.end(), r, std::greater<>()) -
          step_r_.begin();
  idx = idx == 0 ? 0 : idx - 1;
  const double theta = (r - step_r_[idx]) / step_h_[idx];
  const double theta1 = 1.0 - theta;
  const double *c = cont_.data() + 5 * dim_ * idx;
  State y(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    y[i] = c[i] +
           theta * (c[dim_ + i] +
                    theta1 * (c[2 * dim_ + i] +
                              theta * (c[3 * dim_ + i] + theta1 * c[4 * dim_ + i])));
  return y;
}

Trajectory integrate(const Rhs &f, double r0, double r1, State y0, const Options &opt) {
  require(opt.rtol > 0.0 && opt.atol >= 0.0, "ode::integrate: tolerances must be positive");
  const std::size_t n = y0.size();
  Trajectory tr;
  tr.r_start_ = r0;
  tr.r_end_ = r1;
  tr.dim_ = n;
  if (r0 == r1 || n == 0) {
    tr.y_end_ = std::move(y0);
    return tr;
  }
  const double dir = r1 > r0 ? 1.0 : -1.0;
  State y = std::move(y0), ytmp(n), ynew(n);
  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  f(r0, y.data(), k1.data());
  double h = opt.initial_step > 0.0 ? opt.initial_step : initial_step(f, r0, y, k1, dir, opt);
  double r = r0;
  bool last_rejected = false;
  long count = 0;

  while (dir * (r1 - r) > 0.0) {
    if (++count > opt.max_steps)
      throw StepFailure("ode::integrate: step budget exhausted at r = " + std::to_string(r));
    bool final_step = false;
    if (dir * (r + dir * h - r1) >= 0.0) {
      h = std::abs(r1 - r);
      final_step = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(r)))
      throw StepFailure("ode::integrate: step size underflow at r = " + std::to_string(r));
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * a21 * k1[i];
    f(r + c2 * hs, ytmp.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    f(r + c3 * hs, ytmp.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(r + c4 * hs, ytmp.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(r + c5 * hs, ytmp.data(), k5.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                             a65 * k5[i]);
    const double rnew = final_step ? r1 : r + hs;
    f(r + hs, ytmp.data(), k6.data());
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                             a76 * k6[i]);
    f(rnew, ynew.data(), k7.data());

    const double scale =
        opt.atol + opt.rtol * std::max(sup_norm(y.data(), n), sup_norm(ynew.data(), n));
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e));
    }
    err /= scale;
    if (!std::isfinite(err))
      err = 1e10;

    double fac = err == 0.0 ? 10.0 : 0.9 * std::pow(err, -0.2);
    fac = std::clamp(fac, 0.2, 10.0);

    if (err <= 1.0) {
      if (opt.dense) {
        tr.step_r_.push_back(r);
        tr.step_h_.push_back(rnew - r);
        const std::size_t off = tr.cont_.size();
        tr.cont_.resize(off + 5 * n);
        double *c = tr.cont_.data() + off;
        for (std::size_t i = 0; i < n; ++i) {
          const double ydiff = ynew[i] - y[i];
          const double bspl = hs * k1[i] - ydiff;
          c[i] = y[i];
          c[n + i] = ydiff;
          c[2 * n + i] = bspl;
          c[3 * n + i] = ydiff - hs * k7[i] - bspl;
          c[4 * n + i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                               d6 * k6[i] + d7 * k7[i]);
        }
      }
      y.swap(ynew);
      k1.swap(k7);
      r = rnew;
      ++tr.accepted_;
      if (last_rejected)
        fac = std::min(fac, 1.0);
      last_rejected = false;
      h = std::min(h * fac, opt.max_step);
    } else {
      ++tr.rejected_;
      last_rejected = true;
      h *= std::min(fac, 1.0);
    }
  }
  tr.y_end_ = std::move(y);
  return tr;
}

} // namespace genscatter::ode
