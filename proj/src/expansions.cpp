#include "floqs/expansions.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>

#include "floqs/fourier.hpp"
#include "floqs/gap.hpp"

namespace floqs {

namespace {

// Dense or sparse factorization of A(t) frozen at one grid point.
struct FrozenSolver {
  bool ok = false;
  bool use_sparse = false;
  Eigen::PartialPivLU<ComplexMatrix> dense;
  Eigen::SparseLU<SparseCx> sparse;
  ComplexMatrix a_dense;
  SparseCx a_sp;

  void factor(const PeriodicGenerator& gen, double t) {
    use_sparse = gen.dim() > 256;
    if (use_sparse) {
      a_sp = gen.a_sparse_at(t);
      sparse.compute(a_sp);
      ok = sparse.info() == Eigen::Success;
    } else {
      a_dense = gen.a_at(t);
      dense.compute(a_dense);
      ok = true;
    }
  }
  ComplexVector solve(const ComplexVector& b, bool* good = nullptr) {
    if (!ok) {
      if (good) *good = false;
      return ComplexVector::Zero(b.size());
    }
    ComplexVector x = use_sparse ? ComplexVector(sparse.solve(b))
                                 : ComplexVector(dense.solve(b));
    const double bn = b.norm();
    const double resid = use_sparse ? (a_sp * x - b).norm() / (bn + 1e-300)
                                    : (a_dense * x - b).norm() / (bn + 1e-300);
    if (good) *good = x.allFinite() && resid < 1e-6;
    return x;
  }
};

}  // namespace

AdiabaticResult adiabatic_expansion(const PeriodicGenerator& gen, int order,
                                    int grid_n, bool gap_mask) {
  if (order < 0 || order > 1)
    throw InvalidInput("adiabatic_expansion: order must be 0 or 1");
  const bool is_static = gen.is_static();
  if (!(gen.period() > 0.0) && !is_static)
    throw InvalidInput("adiabatic_expansion: generator carries no period");
  const double T = gen.period() > 0 ? gen.period() : 1.0;
  const double omega = 2.0 * std::numbers::pi / T;
  const int n = grid_n;
  const int d = gen.dim();

  AdiabaticResult res;
  res.order = order;
  res.times.resize(n);
  res.instantaneous.assign(n, ComplexVector::Zero(d));
  res.valid.assign(n, true);
  std::vector<char> solvable(n, 1);

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) {
    const double t = T * k / n;
    res.times[k] = t;
    FrozenSolver solver;
    solver.factor(gen, t);
    bool good = false;
    ComplexVector x = solver.solve((-gen.c_at(t)).eval(), &good);
    if (good) {
      res.instantaneous[k] = x;
      if (gap_mask && !is_static) {
        const double gap = dissipation_gap_auto(gen, t);
        if (!(gap > omega)) res.valid[k] = false;
      }
    } else {
      solvable[k] = 0;
      res.valid[k] = false;
    }
  }
  // Singular points (exact parameter decoupling) are filled from periodic
  // neighbours so the spectral derivative stays clean; they stay invalid.
  for (int k = 0; k < n; ++k) {
    if (solvable[k]) continue;
    int l = (k + n - 1) % n, r = (k + 1) % n;
    while (!solvable[l] && l != k) l = (l + n - 1) % n;
    while (!solvable[r] && r != k) r = (r + 1) % n;
    if (solvable[l] && solvable[r])
      res.instantaneous[k] = 0.5 * (res.instantaneous[l] + res.instantaneous[r]);
  }

  res.corrected = res.instantaneous;
  if (order == 1 && !is_static) {
    const auto dinst = spectral_derivative(res.instantaneous, T);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n; ++k) {
      if (!solvable[k]) continue;
      FrozenSolver solver;
      solver.factor(gen, res.times[k]);
      bool good = false;
      ComplexVector corr = solver.solve(dinst[k], &good);
      if (good) res.corrected[k] = res.instantaneous[k] + corr;
    }
  }
  return res;
}

HighFrequencyResult high_frequency_expansion(const PeriodicGenerator& gen,
                                             int order, int grid_n) {
  if (order < 1) throw InvalidInput("high_frequency_expansion: order >= 1");
  if (!(gen.period() > 0.0))
    throw InvalidInput("high_frequency_expansion: generator carries no period");
  const double T = gen.period();
  const int n = grid_n;
  const int d = gen.dim();

  HighFrequencyResult res;
  res.order = order;
  res.times.resize(n);
  for (int k = 0; k < n; ++k) res.times[k] = T * k / n;

  // Everything runs on the term split A = Abar + Atil; period averages are
  // uniform quadrature, exact for the trig-polynomial coefficients.
  auto a_tilde_apply = [&](double t, const ComplexVector& v) {
    ComplexVector out = ComplexVector::Zero(d);
    for (const auto& term : gen.a_terms()) {
      const double w = term.weight.value(t) - term.weight.mean();
      if (w == 0.0) continue;
      out += w * (term.matrix * v);
    }
    return out;
  };

  ComplexMatrix a_bar = ComplexMatrix::Zero(d, d);
  for (const auto& term : gen.a_terms())
    a_bar += term.weight.mean() * ComplexMatrix(term.matrix);
  ComplexVector c_bar = ComplexVector::Zero(d);
  for (const auto& [v, w] : gen.c_terms()) c_bar += w.mean() * v;

  Eigen::PartialPivLU<ComplexMatrix> lu_bar(a_bar);
  ComplexVector rho0 = lu_bar.solve((-c_bar).eval());
  if (!rho0.allFinite() ||
      (a_bar * rho0 + c_bar).norm() > 1e-8 * (c_bar.norm() + 1e-300))
    throw SolverError(
        "high_frequency_expansion: singular period-averaged generator");
  res.constant_parts.push_back(rho0);

  auto push_order = [&](const std::vector<ComplexVector>& rhs) {
    std::vector<ComplexVector> osc = spectral_antiderivative_zero_mean(rhs, T);
    ComplexVector avg = ComplexVector::Zero(d);
    for (int k = 0; k < n; ++k) avg += a_tilde_apply(res.times[k], osc[k]);
    avg /= static_cast<double>(n);
    res.oscillating.push_back(std::move(osc));
    res.constant_parts.push_back(lu_bar.solve((-avg).eval()));
  };

  {
    std::vector<ComplexVector> rhs(n, ComplexVector::Zero(d));
    for (int k = 0; k < n; ++k) {
      const double t = res.times[k];
      rhs[k] = a_tilde_apply(t, rho0);
      for (const auto& [v, w] : gen.c_terms())
        rhs[k] += (w.value(t) - w.mean()) * v;
    }
    push_order(rhs);
  }
  for (int ord = 2; ord <= order; ++ord) {
    const auto& prev_osc = res.oscillating[ord - 2];
    const auto& prev_bar = res.constant_parts[ord - 1];
    std::vector<ComplexVector> rhs(n, ComplexVector::Zero(d));
    ComplexVector mean_term = ComplexVector::Zero(d);
    for (int k = 0; k < n; ++k) {
      const double t = res.times[k];
      rhs[k] = a_tilde_apply(t, prev_bar) + a_bar * prev_osc[k] +
               a_tilde_apply(t, prev_osc[k]);
      mean_term += a_tilde_apply(t, prev_osc[k]);
    }
    mean_term /= static_cast<double>(n);
    for (int k = 0; k < n; ++k) rhs[k] -= mean_term;
    push_order(rhs);
  }

  res.assembled.assign(n, ComplexVector::Zero(d));
  for (int k = 0; k < n; ++k) {
    ComplexVector v = res.constant_parts[0];
    for (int ord = 1; ord <= order; ++ord)
      v += res.constant_parts[ord] + res.oscillating[ord - 1][k];
    res.assembled[k] = v;
  }
  return res;
}

std::vector<Complex> weak_power_s2(const TrigPoly& gamma_t,
                                   const TrigPoly& delta_t, const TrigPoly& g_t,
                                   double flux, double period, int grid_n,
                                   bool* weak_limit_ok) {
  if (!(period > 0.0)) throw InvalidInput("weak_power_s2: period required");
  const double T = period;
  const int n = grid_n;
  if (weak_limit_ok) {
    const Complex zbar(gamma_t.mean(), -delta_t.mean());
    *weak_limit_ok = flux < 0.1 * std::abs(zbar);
  }

  // F(t) = int_0^t (gamma/2 - i delta); mu = F(T)/T; p(t) = e^{F - mu t} g(t)
  auto F = [&](double t) {
    return Complex(0.5 * gamma_t.antiderivative(t), -delta_t.antiderivative(t));
  };
  const Complex FT = F(T);
  const Complex mu = FT / T;
  std::vector<ComplexVector> p(n, ComplexVector(1));
  std::vector<double> ts(n);
  for (int k = 0; k < n; ++k) {
    ts[k] = T * k / n;
    p[k](0) = std::exp(F(ts[k]) - mu * ts[k]) * g_t.value(ts[k]);
  }
  const int m_max = n / 2 - 1;
  FourierSeries ps = fourier_coefficients(ts, p, T, m_max);
  const double omega = 2.0 * std::numbers::pi / T;

  // I(t) = int_0^t e^{mu t'} p(t') dt' mode by mode; the pre-history reduces
  // to a geometric series handled by the 1/(e^{F(T)} - 1) factor below.
  auto cum = [&](double t) {
    Complex acc = 0.0;
    for (int m = -m_max; m <= m_max; ++m) {
      const Complex cm = ps.coeff(m)(0);
      if (cm == Complex(0.0)) continue;
      const Complex z = mu - Complex(0.0, m * omega);
      if (std::abs(z) * T < 1e-12)
        acc += cm * t;
      else
        acc += cm * (std::exp(z * t) - 1.0) / z;
    }
    return acc;
  };

  const Complex IT = cum(T);
  const Complex geometric = IT / (std::exp(FT) - 1.0);
  std::vector<Complex> s2(n + 1);
  const double pref = std::sqrt(std::numbers::pi * flux);
  for (int k = 0; k <= n; ++k) {
    const double t = T * k / n;
    s2[k] = -kImag * pref * std::exp(-F(t)) * (geometric + cum(t));
  }
  return s2;
}

}  // namespace floqs
