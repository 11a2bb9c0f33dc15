#include "floqs/floquet.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "floqs/matrix_log.hpp"

namespace floqs {

namespace {

void require_periodic(const PeriodicGenerator& gen) {
  if (!(gen.period() > 0.0))
    throw InvalidInput("floquet: generator carries no period");
}

OdeMethod pick_method(const PeriodicGenerator& gen, const OdeOptions& opts) {
  // Large Fock-space generators carry stiff diagonals; the exponential frame
  // removes them exactly. Small systems run plain DOPRI5.
  if (opts.method != OdeMethod::auto_select) return opts.method;
  return gen.dim() > 64 ? OdeMethod::exp_dopri5 : OdeMethod::dopri5;
}

}  // namespace

FundamentalSolution fundamental_solution_serial(const PeriodicGenerator& gen,
                                                int grid_n,
                                                const OdeOptions& opts) {
  require_periodic(gen);
  OdeOptions o = opts;
  o.method = pick_method(gen, opts);
  OdeSystem sys = gen.ode(false);
  const auto ts = period_grid(gen.period(), grid_n);
  FundamentalSolution fund;
  fund.period = gen.period();
  fund.o = integrate_linear_ode(
      sys, ComplexMatrix::Identity(gen.dim(), gen.dim()), 0.0, gen.period(), ts, o);
  return fund;
}

FundamentalSolution fundamental_solution(const PeriodicGenerator& gen,
                                         int grid_n, const OdeOptions& opts) {
  require_periodic(gen);
  OdeOptions o = opts;
  o.method = pick_method(gen, opts);
  OdeSystem sys = gen.ode(false);
  const int d = gen.dim();
  const auto ts = period_grid(gen.period(), grid_n);

  std::vector<Trajectory> cols(d);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < d; ++j) {
    ComplexVector e = ComplexVector::Zero(d);
    e(j) = 1.0;
    cols[j] = integrate_linear_ode(sys, e, 0.0, gen.period(), ts, o);
  }

  FundamentalSolution fund;
  fund.period = gen.period();
  fund.o.times = cols[0].times;
  fund.o.interpolation = cols[0].interpolation;
  const int nt = cols[0].size();
  fund.o.states.assign(nt, ComplexMatrix(d, d));
  for (int k = 0; k < nt; ++k)
    for (int j = 0; j < d; ++j) fund.o.states[k].col(j) = cols[j].states[k].col(0);
  for (int j = 0; j < d; ++j) {
    fund.o.error_estimate = std::max(fund.o.error_estimate, cols[j].error_estimate);
    fund.o.steps += cols[j].steps;
    fund.o.rejected += cols[j].rejected;
  }
  return fund;
}

FloquetDecomposition floquet_decompose(const FundamentalSolution& fund) {
  FloquetDecomposition dec;
  dec.period = fund.period;
  dec.times = fund.o.times;
  EigenSystem mono = eig_biorthonormal(fund.monodromy());
  const ComplexVector b_vals = floquet_exponents(mono, fund.period);
  dec.b = mono.right * b_vals.asDiagonal() * mono.left;
  dec.eig = std::move(mono);
  dec.eig.values = b_vals;  // exponents share the monodromy eigenvectors
  // resort by descending real part of the exponents
  {
    const int n = static_cast<int>(b_vals.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
      if (b_vals(a).real() != b_vals(c).real())
        return b_vals(a).real() > b_vals(c).real();
      return b_vals(a).imag() > b_vals(c).imag();
    });
    EigenSystem sorted;
    sorted.values.resize(n);
    sorted.right.resize(n, n);
    sorted.left.resize(n, n);
    for (int j = 0; j < n; ++j) {
      sorted.values(j) = dec.eig.values(order[j]);
      sorted.right.col(j) = dec.eig.right.col(order[j]);
      sorted.left.row(j) = dec.eig.left.row(order[j]);
    }
    sorted.condition = dec.eig.condition;
    dec.eig = std::move(sorted);
  }
  // P(t_k) = O(t_k) exp(-B t_k)
  dec.p.reserve(fund.o.states.size());
  const int n = static_cast<int>(dec.eig.values.size());
  ComplexVector phase(n);
  for (size_t k = 0; k < fund.o.states.size(); ++k) {
    const double t = fund.o.times[k];
    for (int j = 0; j < n; ++j) phase(j) = std::exp(-dec.eig.values(j) * t);
    dec.p.push_back(fund.o.states[k] * dec.eig.right * phase.asDiagonal() *
                    dec.eig.left);
  }
  return dec;
}

Trajectory particular_solution(const PeriodicGenerator& gen, int grid_n,
                               const OdeOptions& opts) {
  require_periodic(gen);
  OdeOptions o = opts;
  o.method = pick_method(gen, opts);
  OdeSystem sys = gen.ode(true);
  const auto ts = period_grid(gen.period(), grid_n);
  return integrate_linear_ode(sys, ComplexVector::Zero(gen.dim()), 0.0,
                              gen.period(), ts, o);
}

namespace {

QuasiStationaryState assemble_state(const PeriodicGenerator& gen,
                                    const std::vector<double>& times,
                                    std::vector<ComplexVector> rho_samples,
                                    Trajectory c, int m_max, double cond) {
  QuasiStationaryState qs;
  qs.period = gen.period();
  qs.basis = gen.basis();
  qs.c = std::move(c);
  qs.rho.times = times;
  qs.rho.states.reserve(rho_samples.size());
  for (auto& v : rho_samples) qs.rho.states.emplace_back(std::move(v));
  qs.resummation_condition = cond;
  qs.fourier = fourier_coefficients(qs.rho, qs.period, m_max);
  return qs;
}

}  // namespace

QuasiStationaryState quasi_stationary(const PeriodicGenerator& gen,
                                      const FundamentalSolution& fund,
                                      const Trajectory& c, int m_max) {
  const int d = gen.dim();
  const ComplexMatrix& o_t = fund.monodromy();
  {  // dissipativity guard
    const ComplexVector mu = eig_biorthonormal(o_t).values;
    for (int j = 0; j < mu.size(); ++j)
      if (!(std::abs(mu(j)) < 1.0))
        throw NonDecayingMode(
            "quasi_stationary: monodromy eigenvalue modulus >= 1; (1-O(T)) "
            "is singular");
  }
  const ComplexMatrix resolvent = ComplexMatrix::Identity(d, d) - o_t;
  Eigen::PartialPivLU<ComplexMatrix> lu(resolvent);
  const ComplexVector x = lu.solve(c.back().col(0));
  // cheap condition estimate from the solve
  const double cond = resolvent.norm() * lu.solve(ComplexMatrix::Identity(d, d)).norm() / d;

  std::vector<ComplexVector> rho(fund.o.states.size());
  for (size_t k = 0; k < fund.o.states.size(); ++k)
    rho[k] = fund.o.states[k] * x + c.states[k].col(0);
  return assemble_state(gen, fund.o.times, std::move(rho), c, m_max, cond);
}

QuasiStationaryState quasi_stationary_matrix_free(const PeriodicGenerator& gen,
                                                  int grid_n,
                                                  const OdeOptions& opts,
                                                  const GmresOptions& gmres_opts,
                                                  int m_max) {
  require_periodic(gen);
  OdeOptions o = opts;
  o.method = pick_method(gen, opts);
  const double T = gen.period();
  const auto ts = period_grid(T, grid_n);

  OdeSystem inhom = gen.ode(true);
  Trajectory c = integrate_linear_ode(inhom, ComplexVector::Zero(gen.dim()), 0.0,
                                      T, ts, o);

  OdeSystem hom = gen.ode(false);
  MatVec resolvent_apply = [&](const ComplexVector& v) -> ComplexVector {
    Trajectory tr = integrate_linear_ode(hom, v, 0.0, T, {}, o);
    return v - tr.back().col(0);
  };
  GmresResult sol = gmres(resolvent_apply, c.back().col(0), gmres_opts);
  if (!sol.converged)
    throw SolverError(
        "quasi_stationary_matrix_free: GMRES stalled at relative residual " +
        std::to_string(sol.relative_residual) +
        " (slow mode close to non-decaying)");

  Trajectory ox = integrate_linear_ode(hom, sol.x, 0.0, T, ts, o);
  std::vector<ComplexVector> rho(ox.states.size());
  for (size_t k = 0; k < ox.states.size(); ++k)
    rho[k] = ox.states[k].col(0) + c.states[k].col(0);
  return assemble_state(gen, ox.times, std::move(rho), c, m_max, 0.0);
}

OracleResult brute_force_oracle(const PeriodicGenerator& gen,
                                const ComplexVector& rho0, long n_periods,
                                int grid_n, const OdeOptions& opts) {
  require_periodic(gen);
  if (n_periods < 1) throw InvalidInput("brute_force_oracle: n_periods >= 1");
  OdeOptions o = opts;
  o.method = pick_method(gen, opts);
  const double T = gen.period();
  OdeSystem sys = gen.ode(true);

  ComplexVector rho = rho0;
  for (long p = 0; p + 1 < n_periods; ++p) {
    Trajectory tr = integrate_linear_ode(sys, rho, 0.0, T, {}, o);
    rho = tr.back().col(0);
  }
  const ComplexVector prev = rho;
  const auto ts = period_grid(T, grid_n);
  OracleResult res;
  res.last_period = integrate_linear_ode(sys, rho, 0.0, T, ts, o);
  res.convergence =
      (res.last_period.back().col(0) - prev).cwiseAbs().maxCoeff();
  res.periods = n_periods;
  return res;
}

long oracle_periods(double slowest_rate, double period) {
  if (!(slowest_rate > 0.0) || !(period > 0.0)) return 1000000;
  const double n = std::ceil(40.0 / (slowest_rate * period)) + 5;
  return static_cast<long>(std::min(n, 1e6));
}

StateDiagnostics validate_state(const QuasiStationaryState& state) {
  StateDiagnostics d;
  d.periodicity_residual =
      (state.rho.back() - state.rho.front()).cwiseAbs().maxCoeff();
  d.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& s : state.rho.states) {
    const ComplexMatrix rho = state.basis->devectorize(s.col(0));
    d.max_trace_error =
        std::max(d.max_trace_error, std::abs(rho.trace() - Complex(1.0)));
    d.max_hermiticity_error = std::max(
        d.max_hermiticity_error,
        (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
        ((rho + rho.adjoint()) / 2.0).eval(), Eigen::EigenvaluesOnly);
    d.min_eigenvalue = std::min(d.min_eigenvalue, es.eigenvalues().minCoeff());
  }
  return d;
}

namespace {

QuasiStationaryState static_state(const PeriodicGenerator& gen, int grid_n,
                                  int m_max) {
  const int d = gen.dim();
  const ComplexVector c = gen.c_at(0.0);
  ComplexVector rho_st;
  double resid = 0.0;
  if (d <= 256) {
    const ComplexMatrix a = gen.a_at(0.0);
    rho_st = a.partialPivLu().solve((-c).eval());
    resid = (a * rho_st + c).norm() / (c.norm() + 1e-300);
  } else {
    const SparseCx a = gen.a_sparse_at(0.0);
    Eigen::SparseLU<SparseCx> lu(a);
    if (lu.info() != Eigen::Success)
      throw SolverError("static solve: sparse factorization failed");
    rho_st = lu.solve((-c).eval());
    resid = (a * rho_st + c).norm() / (c.norm() + 1e-300);
  }
  if (!rho_st.allFinite() || resid > 1e-8)
    throw SolverError(
        "static solve: generator is singular (conserved sector present); "
        "propagate from an initial state instead");
  const double T = gen.period() > 0 ? gen.period() : 1.0;
  const auto ts = period_grid(T, grid_n);
  QuasiStationaryState qs;
  qs.period = T;
  qs.basis = gen.basis();
  qs.rho.times = ts;
  qs.rho.states.assign(ts.size(), rho_st);
  qs.c.times = ts;
  qs.c.states.assign(ts.size(), ComplexVector::Zero(d));
  qs.fourier = fourier_coefficients(qs.rho, T, m_max);
  qs.static_shortcut = true;
  return qs;
}

double grid_sup_change(const QuasiStationaryState& coarse,
                       const QuasiStationaryState& fine) {
  // fine has twice the samples; compare at shared times
  double sup = 0.0;
  for (int k = 0; k < coarse.rho.size(); ++k)
    sup = std::max(sup, (fine.rho.states[2 * k] - coarse.rho.states[k])
                            .cwiseAbs()
                            .maxCoeff());
  return sup;
}

}  // namespace

QsSolution solve_quasi_stationary(const PeriodicGenerator& gen,
                                  const SolveOptions& opts) {
  QsSolution sol;
  if (gen.is_static() && !opts.force_dynamic) {
    sol.state = static_state(gen, opts.grid, opts.m_max);
    sol.grid_used = opts.grid;
    return sol;
  }
  require_periodic(gen);
  const bool matrix_free = gen.dim() > opts.matrix_free_above;

  auto solve_at = [&](int grid) -> QsSolution {
    QsSolution s;
    if (matrix_free) {
      s.state = quasi_stationary_matrix_free(gen, grid, opts.ode, opts.gmres,
                                             opts.m_max);
    } else {
      FundamentalSolution fund = fundamental_solution(gen, grid, opts.ode);
      Trajectory c = particular_solution(gen, grid, opts.ode);
      s.state = quasi_stationary(gen, fund, c, opts.m_max);
      if (opts.want_decomposition) s.floq = floquet_decompose(fund);
      s.fund = std::move(fund);
    }
    s.grid_used = grid;
    return s;
  };

  sol = solve_at(opts.grid);
  if (opts.refine) {
    int grid = opts.grid;
    for (int pass = 0; pass < opts.max_doublings; ++pass) {
      QsSolution fine = solve_at(2 * grid);
      sol.grid_change = grid_sup_change(sol.state, fine.state);
      const double change = sol.grid_change;
      sol = std::move(fine);
      sol.grid_change = change;
      grid *= 2;
      if (change < opts.refine_tol) break;
    }
  }
  return sol;
}

}  // namespace floqs
