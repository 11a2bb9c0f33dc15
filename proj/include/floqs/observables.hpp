#pragma once

#include <vector>

#include "floqs/floquet.hpp"
#include "floqs/fourier.hpp"
#include "floqs/models.hpp"

namespace floqs {

enum class Channel { left, right };

/// Reflection/transmission amplitudes over one period, with their harmonics.
struct AmplitudeTrace {
  std::vector<double> times;  // period grid including endpoint
  ComplexVector r;
  ComplexVector t;
  FourierSeries r_fourier;
  FourierSeries t_fourier;
  double flux = 0.0;
  double period = 0.0;
};

AmplitudeTrace reflection_transmission(const QubitModel& m,
                                       const QuasiStationaryState& state,
                                       int m_max = 32);
AmplitudeTrace reflection_transmission(const LambdaModel& m,
                                       const QuasiStationaryState& state,
                                       int m_max = 32);

/// Outgoing photon fluxes per channel and the power-conservation residual
/// |mean(f_L) + mean(f_R) - f| / f.
struct FluxTrace {
  std::vector<double> times;
  RealVector left;
  RealVector right;
  double mean_left = 0.0;
  double mean_right = 0.0;
  double input = 0.0;
  double conservation_residual = 0.0;
};

FluxTrace output_fluxes(const QubitModel& m, const QuasiStationaryState& state);
FluxTrace output_fluxes(const LambdaModel& m, const QuasiStationaryState& state);

/// Output power spectrum relative to the working frequency. Elastic lines are
/// delta peaks (position, weight); the inelastic part is a sum of Lorentzians
/// with analytic positions and widths.
struct SpectrumResult {
  struct ElasticLine {
    int m;
    double position;  // m * Omega
    double weight;
  };
  struct Lorentzian {
    int m;
    int j;
    double position;    // m * Omega + Im b_j
    double half_width;  // -Re b_j
    Complex weight;
  };
  Channel channel = Channel::left;
  double omega = 0.0;  // modulation frequency (0 for static)
  std::vector<ElasticLine> elastic;
  std::vector<Lorentzian> inelastic;

  double evaluate_inelastic(double omega_rel) const;
  Complex evaluate_inelastic_complex(double omega_rel) const;
  /// Integral of the inelastic density over all frequencies.
  double inelastic_integral() const;
};

SpectrumResult elastic_spectrum(const AmplitudeTrace& trace, Channel channel,
                                int m_max);
SpectrumResult inelastic_spectrum(const QubitModel& m,
                                  const QuasiStationaryState& state,
                                  const FloquetDecomposition& floq, int m_max);

/// Trivial decomposition of a static generator (P = 1, B = A) so the static
/// spectrum runs through the same assembly.
FloquetDecomposition static_decomposition(const PeriodicGenerator& gen,
                                          int grid_n);

struct CorrelationOptions {
  double tau_max = 10.0;
  int tau_count = 400;    // approximate; delays snap to the period grid
  int tau_c_stride = 1;   // take every k-th period-grid point
  OdeOptions ode;
  bool parallel = true;
};

/// First-order output coherence on the (tau, tau_c) grid (rotating frame,
/// carrier phase omitted). g1 includes elastic and inelastic parts; the
/// regression vector component G1 is kept for cross-checks.
struct CorrelationResult {
  std::vector<double> tau;
  std::vector<double> tau_c;
  Eigen::MatrixXcd g1;      // tau x tau_c
  Eigen::MatrixXcd g1_inel;
  Eigen::MatrixXcd big_g1;  // first regression component
  Channel channel = Channel::left;
};

CorrelationResult g1_correlation(const QubitModel& m,
                                 const QuasiStationaryState& state,
                                 const CorrelationOptions& opts, Channel channel);
CorrelationResult g1_correlation_serial(const QubitModel& m,
                                        const QuasiStationaryState& state,
                                        const CorrelationOptions& opts,
                                        Channel channel);

/// Second-order coherence for both channels. Samples where the left flux
/// vanishes (coupling quench) are finite continuations of the 0/0 limit and
/// are flagged in `at_flux_zero`.
struct G2Result {
  std::vector<double> tau;
  std::vector<double> tau_c;
  Eigen::MatrixXd ll;
  Eigen::MatrixXd rr;
  Eigen::MatrixXd max_imag;  // reality diagnostic per sample
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> at_flux_zero;
};

G2Result g2_correlation(const QubitModel& m, const QuasiStationaryState& state,
                        const CorrelationOptions& opts);
G2Result g2_correlation_serial(const QubitModel& m,
                               const QuasiStationaryState& state,
                               const CorrelationOptions& opts);

/// Occupation, entropy and the detuning-occupation loop of a Kerr state.
struct KerrObservables {
  std::vector<double> times;
  RealVector occupation;
  RealVector entropy;
  RealVector delta_values;
  double loop_area = 0.0;  // signed shoelace area of (delta, occupation)
  double min_eigenvalue = 0.0;
};

KerrObservables kerr_observables(const QuasiStationaryState& state,
                                 const KerrModel& m);

/// Signed polygon area of a closed parametric curve (shoelace rule).
double shoelace_area(const RealVector& x, const RealVector& y);

}  // namespace floqs
