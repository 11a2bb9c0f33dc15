#include "floqs/models.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>

#include "floqs/floquet.hpp"

namespace floqs {

namespace {
const double kSqrtInvPi = 1.0 / std::sqrt(std::numbers::pi);
}

QubitModel QubitModel::sign_change(double f, double omega, double delta) {
  QubitModel m;
  m.g = Waveform::cosine(kSqrtInvPi, omega);
  m.delta = delta;
  m.f = f;
  return m;
}

QubitModel QubitModel::on_off(double f, double omega, double delta) {
  QubitModel m;
  m.g = Waveform::offset_cosine(kSqrtInvPi, omega);
  m.delta = delta;
  m.f = f;
  return m;
}

QubitModel QubitModel::constant(double f, double delta) {
  QubitModel m;
  m.g = Waveform::constant(kSqrtInvPi);
  m.delta = delta;
  m.f = f;
  return m;
}

PeriodicGenerator qubit_generator(const QubitModel& m) {
  LindbladSpec spec;
  spec.dimension = 2;
  spec.period = m.g.is_constant() ? 0.0 : m.g.period();

  // states |g> = 0, |e> = 1
  ComplexMatrix sm = ComplexMatrix::Zero(2, 2);  // sigma_-
  sm(0, 1) = 1.0;
  ComplexMatrix proj_e = ComplexMatrix::Zero(2, 2);
  proj_e(1, 1) = 1.0;

  const Complex phase = std::exp(kImag * m.coupling_phase);
  ComplexMatrix drive = std::sqrt(std::numbers::pi * m.f) *
                        (phase * sm + std::conj(phase) * sm.adjoint());

  spec.h_eff.push_back({-m.delta * proj_e, TrigPoly(1.0)});
  spec.h_eff.push_back({drive, TrigPoly::from(m.g)});
  spec.jump = sm;
  spec.rate = TrigPoly::from(m.g) * TrigPoly::from(m.g) * std::numbers::pi;

  PeriodicGenerator plain = build_generator(spec);

  // spin basis (s+, s-, 1+sz) from plain (rho_eg, rho_ge, rho_ee)
  ComplexMatrix from_plain = ComplexMatrix::Zero(3, 3);
  from_plain(0, 1) = 1.0;  // <s+> = rho_ge
  from_plain(1, 0) = 1.0;  // <s-> = rho_eg
  from_plain(2, 2) = 2.0;  // <1+sz> = 2 rho_ee
  auto basis = BasisDescriptor::transformed(2, from_plain, "qubit-spin");
  return plain.transformed(from_plain, std::move(basis));
}

PeriodicGenerator lambda_generator(const LambdaModel& m) {
  if (!(m.gamma > 0)) throw InvalidInput("lambda_generator: gamma must be positive");
  LindbladSpec spec;
  spec.dimension = 3;
  spec.period = m.drive.is_constant() ? 0.0 : m.drive.period();

  // states |g> = 0, |e> = 1, |s> = 2
  const int g = 0, e = 1, s = 2;
  ComplexMatrix proj_e = ComplexMatrix::Zero(3, 3), proj_s = ComplexMatrix::Zero(3, 3);
  proj_e(e, e) = 1.0;
  proj_s(s, s) = 1.0;
  ComplexMatrix drive_op = ComplexMatrix::Zero(3, 3);  // |e><s| + |s><e|
  drive_op(e, s) = 1.0;
  drive_op(s, e) = 1.0;
  ComplexMatrix probe = ComplexMatrix::Zero(3, 3);  // |g><e| + |e><g|
  probe(g, e) = 1.0;
  probe(e, g) = 1.0;
  ComplexMatrix jump = ComplexMatrix::Zero(3, 3);  // |g><e|
  jump(g, e) = 1.0;

  const double q = std::sqrt(m.gamma * m.f / 2.0);
  ComplexMatrix h_static =
      -m.delta1 * proj_e + (m.delta2 - m.delta1) * proj_s + q * probe;
  spec.h_eff.push_back({h_static, TrigPoly(1.0)});
  spec.h_eff.push_back({drive_op, TrigPoly::from(m.drive)});
  spec.jump = jump;
  spec.rate = TrigPoly(m.gamma);

  PeriodicGenerator plain = build_generator(spec);

  // paper ordering (Pe, Ps, s+g, s-g, s+s, s-s, s+r, s-r) from plain
  // (rho_eg, rho_sg, rho_ge, rho_ee, rho_se, rho_gs, rho_es, rho_ss)
  ComplexMatrix from_plain = ComplexMatrix::Zero(8, 8);
  from_plain(0, 3) = 1.0;  // Pe   = rho_ee
  from_plain(1, 7) = 1.0;  // Ps   = rho_ss
  from_plain(2, 2) = 1.0;  // s+g  = rho_ge
  from_plain(3, 0) = 1.0;  // s-g  = rho_eg
  from_plain(4, 4) = 1.0;  // s+s  = rho_se
  from_plain(5, 6) = 1.0;  // s-s  = rho_es
  from_plain(6, 5) = 1.0;  // s+r  = rho_gs
  from_plain(7, 1) = 1.0;  // s-r  = rho_sg
  auto basis = BasisDescriptor::transformed(3, from_plain, "lambda");
  return plain.transformed(from_plain, std::move(basis));
}

ComplexMatrix fock_annihilation(int n_max) {
  ComplexMatrix b = ComplexMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

PeriodicGenerator kerr_generator(const KerrModel& m) {
  if (m.n_max < 2) throw InvalidInput("kerr_generator: n_max >= 2 required");
  if (!(m.gamma > 0)) throw InvalidInput("kerr_generator: gamma must be positive");
  LindbladSpec spec;
  spec.dimension = m.n_max + 1;
  spec.period = m.delta.is_constant() ? 0.0 : m.delta.period();

  const ComplexMatrix b = fock_annihilation(m.n_max);
  const ComplexMatrix bd = b.adjoint();
  const ComplexMatrix num = bd * b;
  const ComplexMatrix kerr = bd * bd * b * b;
  ComplexMatrix h_static = 0.5 * m.interaction * kerr +
                           std::sqrt(m.gamma * m.f) * (b + bd);
  spec.h_eff.push_back({h_static, TrigPoly(1.0)});
  spec.h_eff.push_back({-num, TrigPoly::from(m.delta)});  // weight delta(t)
  spec.jump = b;
  spec.rate = TrigPoly(m.gamma);
  return build_generator(spec);
}

int kerr_converged_truncation(const KerrModel& m, double tail_threshold,
                              int max_n) {
  // Find the most occupied detuning over the sweep of the waveform range,
  // then escalate until the static steady state keeps its top two levels
  // below threshold there.
  const double lo = m.delta.offset - std::abs(m.delta.amplitude);
  const double hi = m.delta.offset + std::abs(m.delta.amplitude);
  for (int n = m.n_max; n <= max_n; n += 8) {
    KerrModel probe = m;
    probe.n_max = n;
    double worst_tail = 0.0;
    const int scan = (hi - lo) > 0 ? 61 : 1;
    for (int k = 0; k < scan; ++k) {
      const double dl = scan == 1 ? lo : lo + (hi - lo) * k / (scan - 1);
      KerrModel frozen = probe;
      frozen.delta = Waveform::constant(dl);
      PeriodicGenerator gen = kerr_generator(frozen);
      SolveOptions opts;
      opts.grid = 4;
      opts.m_max = 1;
      QsSolution sol = solve_quasi_stationary(gen, opts);
      const ComplexMatrix rho = gen.basis()->devectorize(sol.state.at(0));
      const double tail =
          std::abs(rho(n, n)) + std::abs(rho(n - 1, n - 1));
      worst_tail = std::max(worst_tail, tail);
    }
    if (worst_tail < tail_threshold) return n;
  }
  throw SolverError("kerr_converged_truncation: no convergence up to max_n");
}

}  // namespace floqs
