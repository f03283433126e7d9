#pragma once

// Dormand-Prince 5(4) integrator with continuous (dense) output.

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace genscatter::ode {

using State = std::vector<double>;
// dy/dr evaluated into `dydr`; both arrays have the system dimension.
using Rhs = std::function<void(double r, const double *y, double *dydr)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 picks one automatically
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 5'000'000;
  bool dense = true;          // keep interpolation data for every step
};

// Solution of one integration: end state plus optional dense output.
class Trajectory {
public:
  double start() const { return r_start_; }
  double end() const { return r_end_; }
  std::size_t dim() const { return dim_; }
  std::size_t steps() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }
  const State &final_state() const { return y_end_; }
  // left ends of the accepted steps (empty without dense output)
  const std::vector<double> &knots() const { return step_r_; }

  // Interpolated state at r inside [start, end]. Needs Options::dense.
  State at(double r) const;

private:
  friend Trajectory integrate(const Rhs &, double, double, State, const Options &);
  double r_start_ = 0.0, r_end_ = 0.0;
  std::size_t dim_ = 0, accepted_ = 0, rejected_ = 0;
  State y_end_;
  std::vector<double> step_r_, step_h_;
  std::vector<double> cont_;  // 5 * dim coefficients per step
};

// Integrates y' = f(r, y) from r0 to r1 (either direction). Error per step is
// max_i |e_i| / (atol + rtol * max_i |y_i|). Throws StepFailure when the step
// size underflows or max_steps is exceeded.
Trajectory integrate(const Rhs &f, double r0, double r1, State y0, const Options &opt = {});

} // namespace genscatter::ode
