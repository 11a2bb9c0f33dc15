#include "floqs/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <functional>
#include <numbers>

namespace floqs {

namespace {

// samples: column k = component values at grid point k (n points, no
// duplicate endpoint). Returns signed-mode coefficients c_m, m in
// [-(n/2-1), n/2] stored by the caller's indexing.
void check_uniform(std::span<const double> times, double period, int& n_out,
                   bool& drop_last) {
  const int n_all = static_cast<int>(times.size());
  if (n_all < 2) throw InvalidInput("fourier: need at least 2 samples");
  drop_last = std::abs((times[n_all - 1] - times[0]) - period) <
              1e-9 * std::max(1.0, period);
  const int n = drop_last ? n_all - 1 : n_all;
  const double dt = period / n;
  for (int k = 1; k < n; ++k) {
    const double step = times[k] - times[k - 1];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, dt))
      throw InvalidInput("fourier: non-uniform grid rejected");
  }
  n_out = n;
}

}  // namespace

FourierSeries::FourierSeries(double period, int m_max, int dim)
    : period_(period), m_max_(m_max), dim_(dim),
      coeffs_(2 * m_max + 1, ComplexVector::Zero(dim)) {}

double FourierSeries::omega() const {
  return 2.0 * std::numbers::pi / period_;
}

const ComplexVector& FourierSeries::coeff(int m) const {
  if (std::abs(m) > m_max_) throw InvalidInput("FourierSeries: |m| > m_max");
  return coeffs_[m + m_max_];
}

ComplexVector& FourierSeries::coeff(int m) {
  if (std::abs(m) > m_max_) throw InvalidInput("FourierSeries: |m| > m_max");
  return coeffs_[m + m_max_];
}

ComplexVector FourierSeries::eval(double t) const {
  const double w = omega();
  ComplexVector out = ComplexVector::Zero(dim_);
  for (int m = -m_max_; m <= m_max_; ++m)
    out += coeffs_[m + m_max_] * std::exp(Complex(0.0, -m * w * t));
  return out;
}

Complex FourierSeries::eval_component(int row, double t) const {
  const double w = omega();
  Complex out = 0.0;
  for (int m = -m_max_; m <= m_max_; ++m)
    out += coeffs_[m + m_max_](row) * std::exp(Complex(0.0, -m * w * t));
  return out;
}

FourierSeries FourierSeries::derivative() const {
  FourierSeries d(period_, m_max_, dim_);
  const double w = omega();
  for (int m = -m_max_; m <= m_max_; ++m)
    d.coeff(m) = coeff(m) * Complex(0.0, -m * w);
  return d;
}

FourierSeries fourier_coefficients(std::span<const double> times,
                                   const std::vector<ComplexVector>& values,
                                   double period, int m_max) {
  if (period <= 0) throw InvalidInput("fourier: period must be positive");
  if (times.size() != values.size())
    throw InvalidInput("fourier: times/values size mismatch");
  int n = 0;
  bool drop_last = false;
  check_uniform(times, period, n, drop_last);
  if (n < 2 * m_max + 2)
    throw InvalidInput("fourier: need at least 2*m_max+2 samples");

  const int dim = static_cast<int>(values[0].size());
  FourierSeries out(period, m_max, dim);
  const double w = 2.0 * std::numbers::pi / period;
  // c_m = (1/n) sum_k X(t_k) e^{+i m Omega t_k}
  for (int m = -m_max; m <= m_max; ++m) {
    ComplexVector acc = ComplexVector::Zero(dim);
    for (int k = 0; k < n; ++k)
      acc += values[k] * std::exp(Complex(0.0, m * w * times[k]));
    out.coeff(m) = acc / static_cast<double>(n);
  }
  return out;
}

FourierSeries fourier_coefficients(const Trajectory& traj, double period,
                                   int m_max) {
  std::vector<ComplexVector> vals;
  vals.reserve(traj.states.size());
  for (const auto& s : traj.states) {
    if (s.cols() != 1) throw InvalidInput("fourier: vector samples required");
    vals.push_back(s.col(0));
  }
  return fourier_coefficients(traj.times, vals, period, m_max);
}

namespace {

// Apply a signed-mode multiplier to the DFT of each component row.
std::vector<ComplexVector> mode_transform(
    const std::vector<ComplexVector>& values,
    const std::function<Complex(int)>& factor) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw InvalidInput("spectral transform: need >= 2 samples");
  const int dim = static_cast<int>(values[0].size());
  Eigen::FFT<double> fft;
  std::vector<Complex> in(n), freq(n);
  std::vector<ComplexVector> out(n, ComplexVector::Zero(dim));
  for (int r = 0; r < dim; ++r) {
    for (int k = 0; k < n; ++k) in[k] = values[k](r);
    fft.fwd(freq, in);
    // bin k of the forward DFT corresponds to signed mode m = -k (mod n) in
    // the e^{-i m Omega t} convention used here.
    for (int k = 0; k < n; ++k) {
      int m = (n - k) % n;
      if (m > n / 2) m -= n;
      if (2 * m == n) m = 0;  // drop the ambiguous Nyquist mode
      freq[k] *= factor(m) / static_cast<double>(n);
    }
    fft.inv(in, freq);
    for (int k = 0; k < n; ++k) out[k](r) = in[k] * static_cast<double>(n);
  }
  return out;
}

}  // namespace

std::vector<ComplexVector> spectral_derivative(
    const std::vector<ComplexVector>& values, double period) {
  const double w = 2.0 * std::numbers::pi / period;
  return mode_transform(values, [&](int m) { return Complex(0.0, -m * w); });
}

std::vector<ComplexVector> spectral_antiderivative_zero_mean(
    const std::vector<ComplexVector>& values, double period) {
  const double w = 2.0 * std::numbers::pi / period;
  return mode_transform(values, [&](int m) {
    if (m == 0) return Complex(0.0, 0.0);
    return 1.0 / Complex(0.0, -m * w);
  });
}

}  // namespace floqs
