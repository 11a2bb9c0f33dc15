#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "floqs/types.hpp"

namespace floqs {

/// Linear ODE dy/dt = A(t) y + C(t) described through callbacks.
/// `apply` is required. The remaining members are optional:
///  - `inhomogeneity` adds C(t) (vector states only),
///  - `diag_antiderivative` + `offdiag_apply` enable the exponential
///    integrating-factor stepper for stiff diagonals.
struct OdeSystem {
  int dim = 0;
  std::function<void(double, const ComplexMatrix&, ComplexMatrix&)> apply;
  std::function<void(double, ComplexVector&)> inhomogeneity;
  std::function<ComplexVector(double)> diag_antiderivative;
  std::function<void(double, const ComplexMatrix&, ComplexMatrix&)> offdiag_apply;
};

enum class OdeMethod {
  auto_select,  // resolved by the caller layer; plain stepper by default
  dopri5,       // embedded Dormand-Prince 5(4)
  exp_dopri5,   // same pair in the exact-diagonal integrating-factor frame
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 = choose automatically
  double max_step = 0.0;      // 0 = unlimited
  long max_steps = 100000000;
  OdeMethod method = OdeMethod::auto_select;
};

/// Samples of a time-dependent matrix/vector state on an increasing grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  std::string interpolation = "trigonometric";
  double error_estimate = 0.0;  // accumulated local truncation error
  long steps = 0;
  long rejected = 0;

  int size() const { return static_cast<int>(times.size()); }
  const ComplexMatrix& front() const { return states.front(); }
  const ComplexMatrix& back() const { return states.back(); }
};

/// Integrates dy/dt = A(t) y (+ C(t)) from t0 to t1, recording the state at
/// `sample_times` (strictly increasing, within [t0, t1]). The endpoint t1 is
/// always included. Steps land exactly on sample times; no interpolant error
/// enters the stored samples.
Trajectory integrate_linear_ode(const OdeSystem& sys, const ComplexMatrix& y0,
                                double t0, double t1,
                                std::span<const double> sample_times = {},
                                const OdeOptions& opts = {});

/// Uniform grid helper: n+1 sample times covering [0, T].
std::vector<double> period_grid(double period, int n);

}  // namespace floqs
