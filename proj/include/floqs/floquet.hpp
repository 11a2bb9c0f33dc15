#pragma once

#include <optional>

#include "floqs/eig.hpp"
#include "floqs/fourier.hpp"
#include "floqs/generator.hpp"
#include "floqs/krylov.hpp"
#include "floqs/ode.hpp"

namespace floqs {

/// Fundamental solution dO/dt = A(t) O, O(0) = 1, sampled on the period grid.
struct FundamentalSolution {
  Trajectory o;  // matrix samples, o.times = period grid including T
  double period = 0.0;
  const ComplexMatrix& monodromy() const { return o.states.back(); }
};

/// O(t) = P(t) exp(B t) with T-periodic P, P(0) = 1.
struct FloquetDecomposition {
  ComplexMatrix b;
  EigenSystem eig;                      // of B (shared eigenvectors with O(T))
  std::vector<ComplexMatrix> p;         // P on the period grid
  std::vector<double> times;
  double period = 0.0;
};

/// Periodic long-time state on one period; samples are reduced state vectors.
struct QuasiStationaryState {
  Trajectory rho;
  Trajectory c;  // particular solution, c(0) = 0
  FourierSeries fourier;
  BasisPtr basis;
  double period = 0.0;
  double resummation_condition = 0.0;  // estimate for (1 - O(T)) when formed
  bool static_shortcut = false;

  int grid_size() const { return rho.size() - 1; }
  ComplexVector at(int k) const { return rho.states[k].col(0); }
};

/// Structural health of a quasi-stationary state (trace, Hermiticity,
/// positivity, periodicity).
struct StateDiagnostics {
  double periodicity_residual = 0.0;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

StateDiagnostics validate_state(const QuasiStationaryState& state);

/// Column-parallel integration of the fundamental system (OpenMP).
FundamentalSolution fundamental_solution(const PeriodicGenerator& gen,
                                         int grid_n, const OdeOptions& opts = {});
/// Single whole-matrix integration; reference implementation for testing.
FundamentalSolution fundamental_solution_serial(const PeriodicGenerator& gen,
                                                int grid_n,
                                                const OdeOptions& opts = {});

FloquetDecomposition floquet_decompose(const FundamentalSolution& fund);

/// Particular solution dc/dt = A(t) c + C(t), c(0) = 0 on the period grid.
Trajectory particular_solution(const PeriodicGenerator& gen, int grid_n,
                               const OdeOptions& opts = {});

/// Resummed quasi-stationary state rho(t) = O(t) (1 - O(T))^-1 c(T) + c(t).
QuasiStationaryState quasi_stationary(const PeriodicGenerator& gen,
                                      const FundamentalSolution& fund,
                                      const Trajectory& c, int m_max = 32);

/// Same state without forming O(t): the resolvent solve runs matrix-free
/// through GMRES with one period propagation per iteration. Suited to large
/// dimensions (Fock-space models).
QuasiStationaryState quasi_stationary_matrix_free(const PeriodicGenerator& gen,
                                                  int grid_n,
                                                  const OdeOptions& opts = {},
                                                  const GmresOptions& gmres_opts = {},
                                                  int m_max = 32);

struct OracleResult {
  Trajectory last_period;
  double convergence = 0.0;  // ||rho(nT) - rho((n-1)T)||_inf
  long periods = 0;
};

/// Long-time propagation oracle: integrates from rho0 through n_periods
/// periods and returns the final-period samples.
OracleResult brute_force_oracle(const PeriodicGenerator& gen,
                                const ComplexVector& rho0, long n_periods,
                                int grid_n, const OdeOptions& opts = {});

/// Default period count ceil(40 / (gap * T)) + 5, capped at 1e6.
long oracle_periods(double slowest_rate, double period);

struct SolveOptions {
  int grid = 512;
  int m_max = 32;
  OdeOptions ode;
  GmresOptions gmres;
  int matrix_free_above = 64;   // dimension threshold
  bool force_dynamic = false;   // disable the static shortcut (testing)
  bool refine = true;           // grid doubling until samples settle
  int max_doublings = 3;
  double refine_tol = 1e-8;
  bool want_decomposition = true;  // skipped on the matrix-free path
};

struct QsSolution {
  QuasiStationaryState state;
  std::optional<FundamentalSolution> fund;
  std::optional<FloquetDecomposition> floq;
  int grid_used = 0;
  double grid_change = 0.0;  // sup-norm change in the last doubling
};

/// Full pipeline with static shortcut, dense/matrix-free dispatch and
/// optional grid-doubling validation.
QsSolution solve_quasi_stationary(const PeriodicGenerator& gen,
                                  const SolveOptions& opts = {});

}  // namespace floqs
