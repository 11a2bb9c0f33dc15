#include "floqs/lindblad.hpp"

#include <vector>

namespace floqs {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Column-stacked vectorization index of matrix element (r, c).
inline int vec_index(int n, int r, int c) { return r + n * c; }

// vec(H rho): block-diagonal left action.
void add_left(std::vector<Triplet>& trips, const ComplexMatrix& h, Complex coeff) {
  const int n = static_cast<int>(h.rows());
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) {
      if (h(r, k) == 0.0) continue;
      for (int c = 0; c < n; ++c)
        trips.emplace_back(vec_index(n, r, c), vec_index(n, k, c), coeff * h(r, k));
    }
}

// vec(rho M): right action.
void add_right(std::vector<Triplet>& trips, const ComplexMatrix& m, Complex coeff) {
  const int n = static_cast<int>(m.rows());
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < n; ++c) {
      if (m(k, c) == 0.0) continue;
      for (int r = 0; r < n; ++r)
        trips.emplace_back(vec_index(n, r, c), vec_index(n, r, k), coeff * m(k, c));
    }
}

// vec(O rho O^dag).
void add_sandwich(std::vector<Triplet>& trips, const ComplexMatrix& o, Complex coeff) {
  const int n = static_cast<int>(o.rows());
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) {
      if (o(r, k) == 0.0) continue;
      for (int c = 0; c < n; ++c)
        for (int l = 0; l < n; ++l) {
          if (o(c, l) == 0.0) continue;
          trips.emplace_back(vec_index(n, r, c), vec_index(n, k, l),
                             coeff * o(r, k) * std::conj(o(c, l)));
        }
    }
}

// Reduce the full superoperator: drop row/column 0 and fold the unit-trace
// constraint rho_00 = 1 - sum_i rho_ii into A and C.
void reduce_and_add(PeriodicGenerator& gen, const std::vector<Triplet>& trips,
                    int n, const Eigen::VectorXi& markers, const TrigPoly& weight) {
  const int d = n * n - 1;
  SparseCx full(n * n, n * n);
  full.setFromTriplets(trips.begin(), trips.end());
  full.makeCompressed();

  ComplexVector c = ComplexVector::Zero(d);
  std::vector<Triplet> red;
  red.reserve(full.nonZeros());
  for (int col = 0; col < n * n; ++col) {
    for (SparseCx::InnerIterator it(full, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      if (row == 0) continue;
      if (col == 0)
        c(row - 1) += it.value();
      else
        red.emplace_back(row - 1, col - 1, it.value());
    }
  }
  // A = L_kept - C * E^T
  for (int k = 0; k < d; ++k) {
    if (!markers(k)) continue;
    for (int r = 0; r < d; ++r)
      if (c(r) != 0.0) red.emplace_back(r, k, -c(r));
  }
  SparseCx a(d, d);
  a.setFromTriplets(red.begin(), red.end());
  gen.add_a_term(std::move(a), weight);
  gen.add_c_term(std::move(c), weight);
}

}  // namespace

PeriodicGenerator build_generator(const LindbladSpec& spec) {
  const int n = spec.dimension;
  if (n < 2) throw InvalidInput("build_generator: dimension >= 2 required");
  for (const auto& term : spec.h_eff) {
    if (term.op.rows() != n || term.op.cols() != n)
      throw InvalidInput("build_generator: Hamiltonian term size mismatch");
    if ((term.op - term.op.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw InvalidInput("build_generator: non-Hermitian effective Hamiltonian");
  }
  if (spec.jump.rows() != n || spec.jump.cols() != n)
    throw InvalidInput("build_generator: jump operator size mismatch");
  {
    const int probes = 1024;
    const double span = spec.period > 0 ? spec.period : 1.0;
    for (int k = 0; k < probes; ++k)
      if (spec.rate.value(span * k / probes) < -1e-12)
        throw InvalidInput("build_generator: negative dissipation rate");
  }

  auto basis = BasisDescriptor::plain(n);
  PeriodicGenerator gen(n, spec.period, basis);
  const Eigen::VectorXi markers = basis->plain_trace_markers();

  for (const auto& term : spec.h_eff) {
    std::vector<Triplet> trips;
    add_left(trips, term.op, -kImag);
    add_right(trips, term.op, kImag);
    reduce_and_add(gen, trips, n, markers, term.weight);
  }
  {
    std::vector<Triplet> trips;
    const ComplexMatrix odo = spec.jump.adjoint() * spec.jump;
    add_sandwich(trips, spec.jump, 1.0);
    add_left(trips, odo, -0.5);
    add_right(trips, odo, -0.5);
    reduce_and_add(gen, trips, n, markers, spec.rate);
  }
  return gen;
}

}  // namespace floqs
