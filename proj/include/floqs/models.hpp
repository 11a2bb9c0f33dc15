#pragma once

#include "floqs/generator.hpp"
#include "floqs/lindblad.hpp"
#include "floqs/waveform.hpp"

namespace floqs {

/// Driven two-level emitter with a modulated waveguide coupling g(t).
/// Units: rates in gamma0 = pi g0^2; the coupling waveform carries g(t) in
/// units where amplitude 1 gives gamma0 = 1. Detuning is the working-frequency
/// offset. `coupling_phase` multiplies g by a global phase (gauge).
struct QubitModel {
  Waveform g = Waveform::constant(1.0 / 1.7724538509055160273);  // sqrt(1/pi)
  double delta = 0.0;
  double f = 0.0;  // input photon flux
  double coupling_phase = 0.0;

  static QubitModel sign_change(double f, double omega, double delta = 0.0);
  static QubitModel on_off(double f, double omega, double delta = 0.0);
  static QubitModel constant(double f, double delta = 0.0);
};

/// Reduced 3-component generator in the spin basis (s+, s-, 1+sz).
PeriodicGenerator qubit_generator(const QubitModel& m);

/// Three-level Lambda scheme: classical drive F(t) on the metastable leg,
/// probe flux f on the g-e leg, bare rate gamma.
struct LambdaModel {
  double gamma = 1.0;
  Waveform drive = Waveform::constant(10.0);
  double delta1 = 0.0;
  double delta2 = 0.0;
  double f = 0.0;
};

/// 8-component generator in the basis (Pe, Ps, s+g, s-g, s+s, s-s, s+r, s-r).
PeriodicGenerator lambda_generator(const LambdaModel& m);

/// Driven Kerr cavity: photon interaction u, modulated detuning, Fock
/// truncation n_max (levels 0..n_max).
struct KerrModel {
  double gamma = 1.0;
  double interaction = -0.5;
  Waveform delta = Waveform::constant(0.0);
  double f = 0.0;
  int n_max = 48;
};

/// Reduced generator over the truncated Fock space, D = (n_max+1)^2 - 1.
PeriodicGenerator kerr_generator(const KerrModel& m);

/// Smallest truncation (stepping by 8 from m.n_max) whose static steady state
/// at the most occupied detuning keeps the top two Fock levels below
/// `tail_threshold`. Throws if max_n is reached without convergence.
int kerr_converged_truncation(const KerrModel& m, double tail_threshold = 1e-8,
                              int max_n = 96);

/// Fock-space operators (dimension n_max+1).
ComplexMatrix fock_annihilation(int n_max);

}  // namespace floqs
