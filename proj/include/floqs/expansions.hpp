#pragma once

#include <vector>

#include "floqs/generator.hpp"
#include "floqs/ode.hpp"

namespace floqs {

/// Instantaneous steady state and its first slow-modulation correction.
/// `valid` marks grid points where the local gap exceeds the modulation
/// frequency (the adiabaticity indicator); points where the frozen generator
/// is numerically singular are filled from neighbours and flagged invalid.
struct AdiabaticResult {
  std::vector<double> times;
  std::vector<ComplexVector> instantaneous;
  std::vector<ComplexVector> corrected;  // order-1; equals instantaneous at order 0
  std::vector<bool> valid;
  int order = 0;
};

/// `gap_mask` controls whether the per-point gap indicator is evaluated; for
/// large dimensions it costs an iterative eigensolve per grid point, so
/// callers that only need the state can turn it off (points then stay valid
/// unless the frozen solve fails).
AdiabaticResult adiabatic_expansion(const PeriodicGenerator& gen, int order,
                                    int grid_n, bool gap_mask = true);

/// Inverse-frequency hierarchy: constant parts per order plus zero-average
/// oscillating parts, and the assembled state on the grid.
struct HighFrequencyResult {
  std::vector<double> times;
  int order = 0;
  std::vector<ComplexVector> constant_parts;            // orders 0..n
  std::vector<std::vector<ComplexVector>> oscillating;  // orders 1..n on grid
  std::vector<ComplexVector> assembled;
};

HighFrequencyResult high_frequency_expansion(const PeriodicGenerator& gen,
                                             int order, int grid_n);

/// Low-power reflection coherence for the driven two-level model: evaluates
/// the resummed single-period quadrature of the linear-response solution.
/// gamma_t, delta_t and g_t are the rate, detuning and coupling as
/// trigonometric polynomials; returns s2 samples on the grid.
std::vector<Complex> weak_power_s2(const TrigPoly& gamma_t,
                                   const TrigPoly& delta_t, const TrigPoly& g_t,
                                   double flux, double period, int grid_n,
                                   bool* weak_limit_ok = nullptr);

}  // namespace floqs
