#include "floqs/observables.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace floqs {

namespace {

constexpr double kPi = std::numbers::pi;

struct QubitSignals {
  // coupling, rate and drive coefficient at time t
  const QubitModel* model;
  double g(double t) const { return model->g.value(t); }
  double gamma(double t) const {
    const double gv = g(t);
    return kPi * gv * gv;
  }
  double u(double t) const { return std::sqrt(kPi * model->f) * g(t); }
};

void require_qubit_state(const QubitModel& m, const QuasiStationaryState& state) {
  if (state.rho.states.empty() || state.at(0).size() != 3)
    throw InvalidInput("qubit observables: 3-component state expected");
  if (m.f <= 0.0)
    throw InvalidInput("qubit observables: amplitudes undefined at zero flux");
}

// Complex coupling phase is a gauge for amplitudes but the correlation
// assembly below is written for real couplings.
void require_real_coupling(const QubitModel& m, const char* who) {
  if (m.coupling_phase != 0.0)
    throw InvalidInput(std::string(who) + ": coupling phase not supported here");
}

Complex qubit_reflection(const QubitModel& m, double g, Complex s2) {
  const Complex gc = g * std::exp(kImag * m.coupling_phase);
  return -0.5 * kImag * std::sqrt(kPi / m.f) * gc * s2;
}

}  // namespace

AmplitudeTrace reflection_transmission(const QubitModel& m,
                                       const QuasiStationaryState& state,
                                       int m_max) {
  require_qubit_state(m, state);
  AmplitudeTrace tr;
  tr.times = state.rho.times;
  tr.flux = m.f;
  tr.period = state.period;
  const int n = static_cast<int>(tr.times.size());
  tr.r.resize(n);
  tr.t.resize(n);
  for (int k = 0; k < n; ++k) {
    const Complex s2 = state.rho.states[k](1, 0);
    tr.r(k) = qubit_reflection(m, m.g.value(tr.times[k]), s2);
    tr.t(k) = 1.0 + tr.r(k);
  }
  std::vector<ComplexVector> rv(n), tv(n);
  for (int k = 0; k < n; ++k) {
    rv[k] = ComplexVector::Constant(1, tr.r(k));
    tv[k] = ComplexVector::Constant(1, tr.t(k));
  }
  tr.r_fourier = fourier_coefficients(tr.times, rv, state.period, m_max);
  tr.t_fourier = fourier_coefficients(tr.times, tv, state.period, m_max);
  return tr;
}

AmplitudeTrace reflection_transmission(const LambdaModel& m,
                                       const QuasiStationaryState& state,
                                       int m_max) {
  if (state.rho.states.empty() || state.at(0).size() != 8)
    throw InvalidInput("lambda observables: 8-component state expected");
  if (m.f <= 0.0)
    throw InvalidInput("lambda observables: amplitudes undefined at zero flux");
  AmplitudeTrace tr;
  tr.times = state.rho.times;
  tr.flux = m.f;
  tr.period = state.period;
  const int n = static_cast<int>(tr.times.size());
  tr.r.resize(n);
  tr.t.resize(n);
  const double pref = std::sqrt(m.gamma / (2.0 * m.f));
  for (int k = 0; k < n; ++k) {
    const Complex s4 = state.rho.states[k](3, 0);
    tr.r(k) = -kImag * pref * s4;
    tr.t(k) = 1.0 + tr.r(k);
  }
  std::vector<ComplexVector> rv(n), tv(n);
  for (int k = 0; k < n; ++k) {
    rv[k] = ComplexVector::Constant(1, tr.r(k));
    tv[k] = ComplexVector::Constant(1, tr.t(k));
  }
  tr.r_fourier = fourier_coefficients(tr.times, rv, state.period, m_max);
  tr.t_fourier = fourier_coefficients(tr.times, tv, state.period, m_max);
  return tr;
}

namespace {

double mean_dropping_endpoint(const RealVector& v) {
  const int n = static_cast<int>(v.size()) - 1;
  return v.head(n).sum() / n;
}

}  // namespace

FluxTrace output_fluxes(const QubitModel& m, const QuasiStationaryState& state) {
  require_qubit_state(m, state);
  QubitSignals sig{&m};
  FluxTrace fx;
  fx.times = state.rho.times;
  fx.input = m.f;
  const int n = static_cast<int>(fx.times.size());
  fx.left.resize(n);
  fx.right.resize(n);
  for (int k = 0; k < n; ++k) {
    const double t = fx.times[k];
    const Complex s2 = state.rho.states[k](1, 0);
    const double s3 = state.rho.states[k](2, 0).real();
    const double gam = sig.gamma(t);
    const Complex r = qubit_reflection(m, sig.g(t), s2);
    const Complex tt = 1.0 + r;
    const double inel = (gam / 4.0) * (0.5 * s3 - std::norm(s2));
    fx.left(k) = m.f * std::norm(r) + inel;
    fx.right(k) = m.f * std::norm(tt) + inel;
  }
  fx.mean_left = mean_dropping_endpoint(fx.left);
  fx.mean_right = mean_dropping_endpoint(fx.right);
  fx.conservation_residual =
      std::abs(fx.mean_left + fx.mean_right - fx.input) / fx.input;
  return fx;
}

FluxTrace output_fluxes(const LambdaModel& m, const QuasiStationaryState& state) {
  if (state.rho.states.empty() || state.at(0).size() != 8)
    throw InvalidInput("lambda observables: 8-component state expected");
  FluxTrace fx;
  fx.times = state.rho.times;
  fx.input = m.f;
  const int n = static_cast<int>(fx.times.size());
  fx.left.resize(n);
  fx.right.resize(n);
  const double pref = std::sqrt(m.gamma / (2.0 * m.f));
  for (int k = 0; k < n; ++k) {
    const Complex s4 = state.rho.states[k](3, 0);
    const double pe = state.rho.states[k](0, 0).real();
    const Complex r = -kImag * pref * s4;
    const Complex tt = 1.0 + r;
    const double inel = (m.gamma / 2.0) * (pe - std::norm(s4));
    fx.left(k) = m.f * std::norm(r) + inel;
    fx.right(k) = m.f * std::norm(tt) + inel;
  }
  fx.mean_left = mean_dropping_endpoint(fx.left);
  fx.mean_right = mean_dropping_endpoint(fx.right);
  fx.conservation_residual =
      std::abs(fx.mean_left + fx.mean_right - fx.input) / fx.input;
  return fx;
}

double SpectrumResult::evaluate_inelastic(double omega_rel) const {
  double s = 0.0;
  for (const auto& lz : inelastic) {
    const Complex den(lz.half_width, omega_rel - lz.position);
    s += (lz.weight / den).real();
  }
  return s;
}

Complex SpectrumResult::evaluate_inelastic_complex(double omega_rel) const {
  Complex s = 0.0;
  for (const auto& lz : inelastic) {
    const Complex den(lz.half_width, omega_rel - lz.position);
    s += lz.weight / den;
  }
  return s;
}

double SpectrumResult::inelastic_integral() const {
  // integral of Re[w / (i(omega - p) + hw)] over omega is pi Re w
  double s = 0.0;
  for (const auto& lz : inelastic) s += kPi * lz.weight.real();
  return s;
}

SpectrumResult elastic_spectrum(const AmplitudeTrace& trace, Channel channel,
                                int m_max) {
  SpectrumResult sp;
  sp.channel = channel;
  const FourierSeries& fs =
      channel == Channel::left ? trace.r_fourier : trace.t_fourier;
  sp.omega = fs.omega();
  const int mm = std::min(m_max, fs.m_max());
  for (int m = -mm; m <= mm; ++m) {
    const double w = trace.flux * std::norm(fs.coeff(m)(0));
    sp.elastic.push_back({m, m * sp.omega, w});
  }
  return sp;
}

FloquetDecomposition static_decomposition(const PeriodicGenerator& gen,
                                          int grid_n) {
  if (!gen.is_static())
    throw InvalidInput("static_decomposition: generator is not static");
  const double T = gen.period() > 0 ? gen.period() : 1.0;
  FloquetDecomposition dec;
  dec.period = T;
  dec.b = gen.a_at(0.0);
  dec.eig = eig_biorthonormal(dec.b);
  dec.times = period_grid(T, grid_n);
  dec.p.assign(dec.times.size(),
               ComplexMatrix::Identity(gen.dim(), gen.dim()));
  return dec;
}

namespace {

ComplexVector qubit_g_initial(const ComplexVector& s) {
  const Complex s2 = s(1);
  const double s3 = s(2).real();
  ComplexVector g0(3);
  g0(0) = 0.5 * s3 - std::norm(s2);
  g0(1) = -s2 * s2;
  g0(2) = -s3 * s2;
  return g0;
}

}  // namespace

SpectrumResult inelastic_spectrum(const QubitModel& m,
                                  const QuasiStationaryState& state,
                                  const FloquetDecomposition& floq, int m_max) {
  require_qubit_state(m, state);
  require_real_coupling(m, "inelastic_spectrum");
  SpectrumResult sp;
  sp.channel = Channel::left;  // identical for both channels
  const double T = floq.period;
  sp.omega = 2.0 * kPi / T;

  const int ngrid = static_cast<int>(floq.times.size());
  std::vector<ComplexVector> v_plus(ngrid), v_zero(ngrid);
  for (int k = 0; k < ngrid; ++k) {
    const double t = floq.times[k];
    const double g = m.g.value(t);
    const ComplexMatrix& p = floq.p[k];
    v_plus[k] = 0.5 * g * p.row(0).transpose();
    const ComplexVector g0 = qubit_g_initial(state.rho.states[k].col(0));
    v_zero[k] = 0.5 * g * p.partialPivLu().solve(g0);
  }
  FourierSeries fp = fourier_coefficients(floq.times, v_plus, T, m_max);
  FourierSeries f0 = fourier_coefficients(floq.times, v_zero, T, m_max);

  const int dim = static_cast<int>(floq.eig.values.size());
  for (int mm = -m_max; mm <= m_max; ++mm) {
    for (int j = 0; j < dim; ++j) {
      const Complex b = floq.eig.values(j);
      const Complex w = (fp.coeff(-mm).transpose() * floq.eig.right.col(j))(0) *
                        (floq.eig.left.row(j) * f0.coeff(mm))(0);
      if (std::abs(w) < 1e-300) continue;
      sp.inelastic.push_back({mm, j, mm * sp.omega + b.imag(), -b.real(), w});
    }
  }
  return sp;
}

namespace {

// Shared correlation-grid machinery. For each retained grid column tau_c the
// regression system d X/d tau = A(tau_c + tau) X is integrated from the
// stated initial data, with all delays snapped to the stored period grid so
// that flux and amplitude lookups are exact index arithmetic.
struct CorrGrid {
  std::vector<double> tau;
  std::vector<int> tau_index;    // tau / dt
  std::vector<double> tau_c;
  std::vector<int> tau_c_index;  // tau_c / dt
  int n = 0;                     // period grid size
  double dt = 0.0;
};

CorrGrid make_grid(const QuasiStationaryState& state,
                   const CorrelationOptions& opts) {
  CorrGrid g;
  g.n = state.grid_size();
  g.dt = state.period / g.n;
  if (opts.tau_max <= 0 || opts.tau_count < 2)
    throw InvalidInput("correlation grid: tau_max > 0 and tau_count >= 2");
  int stride = std::max(1, static_cast<int>(std::floor(
                               opts.tau_max / g.dt / (opts.tau_count - 1))));
  for (int j = 0; j * stride * g.dt <= opts.tau_max + 1e-12; ++j) {
    g.tau_index.push_back(j * stride);
    g.tau.push_back(j * stride * g.dt);
  }
  const int cstride = std::max(1, opts.tau_c_stride);
  for (int k = 0; k < g.n; k += cstride) {
    g.tau_c_index.push_back(k);
    g.tau_c.push_back(k * g.dt);
  }
  return g;
}

template <typename PerColumn>
void run_columns(int ncols, bool parallel, PerColumn&& work) {
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int ic = 0; ic < ncols; ++ic) work(ic);
  } else {
    for (int ic = 0; ic < ncols; ++ic) work(ic);
  }
}

CorrelationResult g1_impl(const QubitModel& m, const QuasiStationaryState& state,
                          const CorrelationOptions& opts, Channel channel,
                          bool parallel) {
  require_qubit_state(m, state);
  require_real_coupling(m, "g1_correlation");
  const PeriodicGenerator gen = qubit_generator(m);
  const CorrGrid grid = make_grid(state, opts);
  QubitSignals sig{&m};

  // amplitude trace for the elastic part
  AmplitudeTrace tr = reflection_transmission(m, state, 1);

  CorrelationResult res;
  res.tau = grid.tau;
  res.tau_c = grid.tau_c;
  res.channel = channel;
  const int nt = static_cast<int>(grid.tau.size());
  const int nc = static_cast<int>(grid.tau_c.size());
  res.g1.resize(nt, nc);
  res.g1_inel.resize(nt, nc);
  res.big_g1.resize(nt, nc);

  run_columns(nc, parallel && opts.parallel, [&](int ic) {
    const int k0 = grid.tau_c_index[ic];
    const double tc = grid.tau_c[ic];
    OdeSystem sys;
    sys.dim = 3;
    sys.apply = [&gen, tc](double t, const ComplexMatrix& y, ComplexMatrix& out) {
      gen.apply_a(tc + t, y, out);
    };
    const ComplexVector g0 = qubit_g_initial(state.rho.states[k0].col(0));
    Trajectory tr_g;
    if (grid.tau.back() > 0) {
      tr_g = integrate_linear_ode(sys, g0, 0.0, grid.tau.back(), grid.tau,
                                  opts.ode);
    } else {
      tr_g.times = {0.0};
      tr_g.states = {g0};
    }
    for (int it = 0; it < nt; ++it) {
      const int k1 = (k0 + grid.tau_index[it]) % grid.n;
      const double t1 = tc + grid.tau[it];
      const Complex bg1 = tr_g.states[it](0, 0);
      const Complex inel =
          (kPi / 4.0) * sig.g(t1) * sig.g(tc) * bg1;
      Complex elastic;
      if (channel == Channel::left)
        elastic = m.f * std::conj(tr.r(k1)) * tr.r(k0);
      else
        elastic = m.f * std::conj(tr.t(k1)) * tr.t(k0);
      res.big_g1(it, ic) = bg1;
      res.g1_inel(it, ic) = inel;
      res.g1(it, ic) = elastic + inel;
    }
  });
  return res;
}

G2Result g2_impl(const QubitModel& m, const QuasiStationaryState& state,
                 const CorrelationOptions& opts, bool parallel) {
  require_qubit_state(m, state);
  require_real_coupling(m, "g2_correlation");
  const PeriodicGenerator gen = qubit_generator(m);
  const CorrGrid grid = make_grid(state, opts);
  QubitSignals sig{&m};

  G2Result res;
  res.tau = grid.tau;
  res.tau_c = grid.tau_c;
  const int nt = static_cast<int>(grid.tau.size());
  const int nc = static_cast<int>(grid.tau_c.size());
  res.ll.resize(nt, nc);
  res.rr.resize(nt, nc);
  res.max_imag.resize(nt, nc);
  res.at_flux_zero.resize(nt, nc);

  // physical per-channel fluxes on the period grid
  const int n = grid.n;
  RealVector flux_l(n), flux_r(n), s3g(n);
  std::vector<Complex> s2g(n);
  for (int k = 0; k < n; ++k) {
    const double t = state.rho.times[k];
    const Complex s2 = state.rho.states[k](1, 0);
    const double s3 = state.rho.states[k](2, 0).real();
    s2g[k] = s2;
    s3g(k) = s3;
    flux_l(k) = sig.gamma(t) * s3 / 4.0;
    flux_r(k) = 2.0 * m.f + 2.0 * sig.u(t) * s2.imag() + sig.gamma(t) * s3 / 4.0;
  }
  const double flux_floor = 1e-12 * m.f;

  run_columns(nc, parallel && opts.parallel, [&](int ic) {
    const int k0 = grid.tau_c_index[ic];
    const double tc = grid.tau_c[ic];
    OdeSystem sys;
    sys.dim = 3;
    sys.apply = [&gen, tc](double t, const ComplexMatrix& y, ComplexMatrix& out) {
      gen.apply_a(tc + t, y, out);
    };
    const ComplexVector s0 = state.rho.states[k0].col(0);
    ComplexMatrix y0(3, 2);
    y0.col(0) = qubit_g_initial(s0);        // G
    y0.col(1) = -0.5 * s0(2).real() * s0;   // J
    Trajectory tr_gj;
    if (grid.tau.back() > 0) {
      tr_gj = integrate_linear_ode(sys, y0, 0.0, grid.tau.back(), grid.tau,
                                   opts.ode);
    } else {
      tr_gj.times = {0.0};
      tr_gj.states = {y0};
    }
    const double u0 = sig.u(tc);
    const double gam0 = sig.gamma(tc);
    for (int it = 0; it < nt; ++it) {
      const int k1 = (k0 + grid.tau_index[it]) % grid.n;
      const double t1 = tc + grid.tau[it];
      const double u1 = sig.u(t1);
      const double gam1 = sig.gamma(t1);
      const ComplexVector bigg = tr_gj.states[it].col(0);
      const ComplexVector bigj = tr_gj.states[it].col(1);

      // left channel in the flux-cancelled form; exact where fluxes vanish
      const Complex j3 = bigj(2);
      const double s3a = s3g(k0), s3b = s3g(k1);
      res.ll(it, ic) = 1.0 + 2.0 * j3.real() / (s3a * s3b);

      const double excess_imag = std::abs(j3.imag());
      const Complex g12 = bigg(0) - bigg(1);
      const double n_excess = 2.0 * u0 * u1 * g12.real() +
                              gam0 * u1 * bigj(1).imag() +
                              0.5 * gam1 * u0 * bigg(2).imag() +
                              gam0 * gam1 * j3.real() / 8.0;
      const double fr0 = flux_r(k0), fr1 = flux_r(k1);
      res.rr(it, ic) = 1.0 + n_excess / (fr1 * fr0);
      res.max_imag(it, ic) = excess_imag;
      res.at_flux_zero(it, ic) =
          flux_l(k0) < flux_floor || flux_l(k1) < flux_floor;
    }
  });
  return res;
}

}  // namespace

CorrelationResult g1_correlation(const QubitModel& m,
                                 const QuasiStationaryState& state,
                                 const CorrelationOptions& opts,
                                 Channel channel) {
  return g1_impl(m, state, opts, channel, true);
}

CorrelationResult g1_correlation_serial(const QubitModel& m,
                                        const QuasiStationaryState& state,
                                        const CorrelationOptions& opts,
                                        Channel channel) {
  return g1_impl(m, state, opts, channel, false);
}

G2Result g2_correlation(const QubitModel& m, const QuasiStationaryState& state,
                        const CorrelationOptions& opts) {
  return g2_impl(m, state, opts, true);
}

G2Result g2_correlation_serial(const QubitModel& m,
                               const QuasiStationaryState& state,
                               const CorrelationOptions& opts) {
  return g2_impl(m, state, opts, false);
}

double shoelace_area(const RealVector& x, const RealVector& y) {
  const int n = static_cast<int>(x.size());
  if (n != y.size() || n < 3) throw InvalidInput("shoelace_area: need >= 3 points");
  double a = 0.0;
  for (int k = 0; k < n; ++k) {
    const int k1 = (k + 1) % n;
    a += x(k) * y(k1) - x(k1) * y(k);
  }
  return 0.5 * a;
}

KerrObservables kerr_observables(const QuasiStationaryState& state,
                                 const KerrModel& m) {
  KerrObservables out;
  out.times = state.rho.times;
  const int n = static_cast<int>(out.times.size());
  const int d = m.n_max + 1;
  out.occupation.resize(n);
  out.entropy.resize(n);
  out.delta_values.resize(n);
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const ComplexMatrix rho = state.basis->devectorize(state.rho.states[k].col(0));
    if (rho.rows() != d) throw InvalidInput("kerr_observables: dimension mismatch");
    double occ = 0.0;
    for (int i = 0; i < d; ++i) occ += i * rho(i, i).real();
    out.occupation(k) = occ;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
        ((rho + rho.adjoint()) / 2.0).eval(), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      double p = es.eigenvalues()(i);
      out.min_eigenvalue = std::min(out.min_eigenvalue, p);
      if (p < -1e-6)
        throw SolverError(
            "kerr_observables: negative population beyond tolerance "
            "(truncation or integration failure)");
      if (p < 0.0) p = 0.0;  // round-off clip
      if (p > 0.0) s -= p * std::log(p);
    }
    out.entropy(k) = s;
    out.delta_values(k) = m.delta.value(out.times[k]);
  }
  // closed loop over one period: drop the duplicated endpoint
  out.loop_area = shoelace_area(out.delta_values.head(n - 1),
                                out.occupation.head(n - 1));
  return out;
}

}  // namespace floqs
