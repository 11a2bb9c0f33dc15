#include "floqs/gap.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>

#include "floqs/krylov.hpp"
#include "floqs/ode.hpp"

namespace floqs {

double dissipation_gap(const ComplexMatrix& a_static) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a_static, false);
  if (es.info() != Eigen::Success)
    throw SolverError("dissipation_gap: eigensolver failed");
  double max_re = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
    max_re = std::max(max_re, es.eigenvalues()(j).real());
  return -max_re;
}

namespace {

// Deterministic Gaussian start vector (splitmix64 + Box-Muller).
ComplexVector start_vector(int dim, uint64_t seed) {
  auto next = [&seed]() {
    seed += 0x9e3779b97f4a7c15ULL;
    uint64_t z = seed;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  auto uniform = [&]() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  };
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    v(i) = Complex(r * std::cos(2 * std::numbers::pi * u2),
                   r * std::sin(2 * std::numbers::pi * u2));
  }
  return v / v.norm();
}

}  // namespace

double dissipation_gap_iterative(const PeriodicGenerator& frozen_gen,
                                 const IterativeGapOptions& opts) {
  OdeSystem sys = frozen_gen.ode(false);
  OdeOptions ode;
  ode.rtol = opts.rtol;
  ode.atol = opts.atol;
  ode.method = OdeMethod::exp_dopri5;
  const double s = opts.span;
  MatVec apply = [&](const ComplexVector& v) -> ComplexVector {
    Trajectory tr = integrate_linear_ode(sys, v, 0.0, s, {}, ode);
    return tr.back().col(0);
  };
  const auto ritz = arnoldi_ritz(apply, start_vector(frozen_gen.dim(), opts.seed),
                                 opts.krylov_dim);
  if (ritz.empty()) throw SolverError("dissipation_gap_iterative: no Ritz values");
  const double mu_max = std::abs(ritz.front().value);
  if (!(mu_max > 0.0))
    throw SolverError("dissipation_gap_iterative: degenerate propagator");
  return -std::log(mu_max) / s;
}

double dissipation_gap_auto(const PeriodicGenerator& gen, double freeze_time,
                            int dense_limit, const IterativeGapOptions& opts) {
  if (gen.dim() <= dense_limit) return dissipation_gap(gen.a_at(freeze_time));
  return dissipation_gap_iterative(gen.frozen(freeze_time), opts);
}

}  // namespace floqs
