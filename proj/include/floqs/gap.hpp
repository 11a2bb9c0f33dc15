#pragma once

#include "floqs/generator.hpp"

namespace floqs {

/// Smallest dissipation rate min_j(-Re lambda_j) of a reduced static
/// generator, by dense eigendecomposition.
double dissipation_gap(const ComplexMatrix& a_static);

struct IterativeGapOptions {
  double span = 2.0;     // propagation time per operator application
  int krylov_dim = 36;
  uint64_t seed = 42;    // deterministic start vector
  double rtol = 1e-8;
  double atol = 1e-12;
};

/// Same quantity for large dimensions: Arnoldi on the propagator exp(A s),
/// whose dominant moduli are the slowest decay rates; gap = -ln(max |mu|)/s.
double dissipation_gap_iterative(const PeriodicGenerator& frozen_gen,
                                 const IterativeGapOptions& opts = {});

/// Dense path below `dense_limit` dimensions, iterative above.
double dissipation_gap_auto(const PeriodicGenerator& gen, double freeze_time,
                            int dense_limit = 64,
                            const IterativeGapOptions& opts = {});

}  // namespace floqs
