#pragma once

#include <span>
#include <vector>

#include "floqs/ode.hpp"
#include "floqs/types.hpp"

namespace floqs {

/// Truncated Fourier representation of a T-periodic vector-valued function,
/// X(t) = sum_{|m| <= m_max} coeff(m) e^{-i m Omega t},  Omega = 2*pi/T.
class FourierSeries {
 public:
  FourierSeries() = default;
  FourierSeries(double period, int m_max, int dim);

  double period() const { return period_; }
  int m_max() const { return m_max_; }
  int dim() const { return dim_; }
  double omega() const;

  const ComplexVector& coeff(int m) const;
  ComplexVector& coeff(int m);

  ComplexVector eval(double t) const;
  Complex eval_component(int row, double t) const;

  /// Series of the time derivative (coefficients scaled by -i m Omega).
  FourierSeries derivative() const;

 private:
  double period_ = 0.0;
  int m_max_ = 0;
  int dim_ = 0;
  std::vector<ComplexVector> coeffs_;  // index m + m_max
};

/// Coefficients from samples on a uniform grid over one period. The grid may
/// carry a duplicated endpoint (t0 + T); it is dropped. Non-uniform grids are
/// rejected. Requires at least 2*m_max + 2 distinct samples.
FourierSeries fourier_coefficients(std::span<const double> times,
                                   const std::vector<ComplexVector>& values,
                                   double period, int m_max);
FourierSeries fourier_coefficients(const Trajectory& traj, double period,
                                   int m_max);

/// Spectral derivative of n uniform samples over one period (no duplicate
/// endpoint). Nyquist mode zeroed for even n.
std::vector<ComplexVector> spectral_derivative(
    const std::vector<ComplexVector>& values, double period);

/// Spectral antiderivative with zero time average; the input mean is ignored.
std::vector<ComplexVector> spectral_antiderivative_zero_mean(
    const std::vector<ComplexVector>& values, double period);

}  // namespace floqs
