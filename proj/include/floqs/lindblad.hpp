#pragma once

#include <vector>

#include "floqs/generator.hpp"
#include "floqs/waveform.hpp"

namespace floqs {

/// Time-dependent system data for a single-channel Lindblad master equation:
///   d rho/dt = -i [H_eff(t), rho] + rate(t) (O rho O^dag - {O^dag O, rho}/2)
/// with H_eff(t) = sum_k weight_k(t) * op_k (each op_k Hermitian).
struct HamiltonianTerm {
  ComplexMatrix op;
  TrigPoly weight;
};

struct LindbladSpec {
  int dimension = 0;
  double period = 0.0;
  std::vector<HamiltonianTerm> h_eff;
  ComplexMatrix jump;
  TrigPoly rate{1.0};
};

/// Vectorizes the Liouvillian (column stacking), eliminates the trace mode by
/// expressing the (0,0) population through the unit-trace constraint, and
/// returns the reduced affine generator in the plain basis.
PeriodicGenerator build_generator(const LindbladSpec& spec);

}  // namespace floqs
