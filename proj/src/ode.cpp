#include "floqs/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace floqs {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,          500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784,  11.0 / 84,    0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

double scaled_error(const ComplexMatrix& y_old, const ComplexMatrix& y_new,
                    const ComplexMatrix& diff, double atol, double rtol) {
  double sum = 0.0;
  const auto n = y_old.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc =
        atol + rtol * std::max(std::abs(y_old(i)), std::abs(y_new(i)));
    const double e = std::abs(diff(i)) / sc;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

}  // namespace

std::vector<double> period_grid(double period, int n) {
  std::vector<double> ts(n + 1);
  for (int k = 0; k <= n; ++k) ts[k] = period * static_cast<double>(k) / n;
  ts.back() = period;
  return ts;
}

Trajectory integrate_linear_ode(const OdeSystem& sys, const ComplexMatrix& y0,
                                double t0, double t1,
                                std::span<const double> sample_times,
                                const OdeOptions& opts) {
  if (!sys.apply) throw InvalidInput("integrate_linear_ode: missing apply()");
  if (!(t1 > t0)) throw InvalidInput("integrate_linear_ode: need t1 > t0");
  if (opts.rtol <= 0 || opts.atol <= 0)
    throw InvalidInput("integrate_linear_ode: tolerances must be positive");
  const bool exp_frame = opts.method == OdeMethod::exp_dopri5;
  // auto_select falls through to the plain stepper here; dimension-aware
  // resolution happens in the layers that know the generator.
  if (exp_frame && (!sys.diag_antiderivative || !sys.offdiag_apply))
    throw InvalidInput(
        "integrate_linear_ode: exp_dopri5 needs diag_antiderivative and "
        "offdiag_apply");
  const bool inhom = static_cast<bool>(sys.inhomogeneity);
  if (inhom && y0.cols() != 1)
    throw InvalidInput("integrate_linear_ode: inhomogeneity needs vector state");

  Trajectory out;
  out.times.reserve(sample_times.size() + 2);
  out.states.reserve(sample_times.size() + 2);

  const double span = t1 - t0;
  for (size_t i = 0; i < sample_times.size(); ++i) {
    const double s = sample_times[i];
    if (s < t0 - 1e-12 * span || s > t1 + 1e-12 * span)
      throw InvalidInput("integrate_linear_ode: sample time outside span");
    if (i > 0 && !(s > sample_times[i - 1]))
      throw InvalidInput("integrate_linear_ode: sample times must increase");
  }

  ComplexMatrix y = y0;
  double t = t0;
  size_t next_sample = 0;
  auto record_if_sample = [&](double tc, const ComplexMatrix& yc) {
    while (next_sample < sample_times.size() &&
           std::abs(sample_times[next_sample] - tc) <= 1e-12 * std::max(1.0, std::abs(tc))) {
      out.times.push_back(sample_times[next_sample]);
      out.states.push_back(yc);
      ++next_sample;
    }
  };
  record_if_sample(t0, y);

  const int rows = static_cast<int>(y.rows());
  const int cols = static_cast<int>(y.cols());
  std::vector<ComplexMatrix> k(7, ComplexMatrix(rows, cols));
  ComplexMatrix stage(rows, cols), work(rows, cols), y5(rows, cols), y4(rows, cols);
  ComplexVector cvec;
  if (inhom) cvec.resize(rows);

  // Plain-frame RHS.
  auto rhs_plain = [&](double tt, const ComplexMatrix& yy, ComplexMatrix& dy) {
    sys.apply(tt, yy, dy);
    if (inhom) {
      sys.inhomogeneity(tt, cvec);
      dy.col(0) += cvec;
    }
  };

  // Exponential-frame machinery: per step, d_i = Lam(t + c_i h) - Lam(t).
  ComplexVector lam0, ed, inv_ed;
  auto rhs_exp = [&](double step_t0, double tau, const ComplexMatrix& zz,
                     ComplexMatrix& dz) {
    const double tt = step_t0 + tau;
    ComplexVector d = sys.diag_antiderivative(tt) - lam0;
    ed = d.array().exp();
    work = ed.asDiagonal() * zz;
    sys.offdiag_apply(tt, work, dz);
    if (inhom) {
      sys.inhomogeneity(tt, cvec);
      dz.col(0) += cvec;
    }
    dz = ed.cwiseInverse().asDiagonal() * dz;
  };

  // Initial step size heuristic.
  double h = opts.initial_step;
  if (h <= 0) {
    if (exp_frame) {
      lam0 = sys.diag_antiderivative(t);
      rhs_exp(t, 0.0, y, k[0]);
    } else {
      rhs_plain(t, y, k[0]);
    }
    const double d0 = y.norm() + opts.atol;
    const double d1 = k[0].norm() + opts.atol;
    h = 0.01 * d0 / d1;
    h = std::min(h, span / 10.0);
    h = std::max(h, 1e-12 * span);
  } else {
    if (exp_frame) {
      lam0 = sys.diag_antiderivative(t);
      rhs_exp(t, 0.0, y, k[0]);
    } else {
      rhs_plain(t, y, k[0]);
    }
  }
  if (opts.max_step > 0) h = std::min(h, opts.max_step);

  bool fsal_valid = true;  // k[0] holds f(t, y)
  long nstep = 0, nrej = 0;
  double err_accum = 0.0;
  const double hmin_floor = 1e-14 * std::max({std::abs(t0), std::abs(t1), 1.0});

  while (t < t1 - 1e-14 * span) {
    double h_try = std::min(h, t1 - t);
    if (next_sample < sample_times.size())
      h_try = std::min(h_try, sample_times[next_sample] - t);
    if (opts.max_step > 0) h_try = std::min(h_try, opts.max_step);
    if (h_try < hmin_floor)
      throw StepSizeUnderflow("integrate_linear_ode: step size underflow at t=" +
                              std::to_string(t));
    if (++nstep > opts.max_steps)
      throw SolverError("integrate_linear_ode: step budget exhausted");

    if (exp_frame && !fsal_valid) {
      lam0 = sys.diag_antiderivative(t);
      rhs_exp(t, 0.0, y, k[0]);
      fsal_valid = true;
    } else if (!exp_frame && !fsal_valid) {
      rhs_plain(t, y, k[0]);
      fsal_valid = true;
    }

    for (int i = 1; i < 7; ++i) {
      stage = y;
      for (int j = 0; j < i; ++j)
        if (kA[i][j] != 0.0) stage.noalias() += (h_try * kA[i][j]) * k[j];
      if (exp_frame)
        rhs_exp(t, kC[i] * h_try, stage, k[i]);
      else
        rhs_plain(t + kC[i] * h_try, stage, k[i]);
    }
    y5 = y;
    y4 = y;
    for (int j = 0; j < 7; ++j) {
      if (kB5[j] != 0.0) y5.noalias() += (h_try * kB5[j]) * k[j];
      if (kB4[j] != 0.0) y4.noalias() += (h_try * kB4[j]) * k[j];
    }
    work = y5 - y4;
    const double err = scaled_error(y, y5, work, opts.atol, opts.rtol);
    if (!std::isfinite(err))
      throw NonFiniteState("integrate_linear_ode: non-finite state at t=" +
                           std::to_string(t));

    if (err <= 1.0) {
      if (exp_frame) {
        ComplexVector d = sys.diag_antiderivative(t + h_try) - lam0;
        ed = d.array().exp();
        y = ed.asDiagonal() * y5;
        // FSAL: k7 was evaluated in the old frame at tau=h; rescale into the
        // new frame where the factor resets to identity.
        k[0] = ed.asDiagonal() * k[6];
        lam0 = sys.diag_antiderivative(t + h_try);
      } else {
        y = y5;
        k[0] = k[6];
      }
      err_accum += work.cwiseAbs().maxCoeff();
      t += h_try;
      record_if_sample(t, y);
      fsal_valid = true;
      h = h_try * std::min(5.0, std::max(0.2, 0.9 * std::pow(err + 1e-300, -0.2)));
    } else {
      ++nrej;
      // Step start (and its frame) unchanged on rejection; k[0] stays valid.
      h = h_try * std::min(1.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    }
  }

  // Endpoint: always included.
  if (out.times.empty() || out.times.back() != t1) {
    if (next_sample < sample_times.size() &&
        std::abs(sample_times[next_sample] - t1) <= 1e-12 * std::max(1.0, std::abs(t1))) {
      out.times.push_back(sample_times[next_sample]);
    } else {
      out.times.push_back(t1);
    }
    out.states.push_back(y);
  }
  out.error_estimate = err_accum;
  out.steps = nstep;
  out.rejected = nrej;
  return out;
}

}  // namespace floqs
