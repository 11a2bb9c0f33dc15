#pragma once

#include <Eigen/SparseCore>
#include <memory>
#include <utility>
#include <vector>

#include "floqs/basis.hpp"
#include "floqs/ode.hpp"
#include "floqs/waveform.hpp"

namespace floqs {

using SparseCx = Eigen::SparseMatrix<Complex>;

/// One coefficient-matrix pair of the reduced generator,
/// A(t) = sum_k weight_k(t) * matrix_k.
struct GeneratorTerm {
  SparseCx matrix;
  SparseCx offdiag;        // matrix with its diagonal removed
  ComplexVector diagonal;  // diag(matrix)
  ComplexMatrix dense;     // materialized for small dimensions
  TrigPoly weight;
};

/// Reduced affine generator of the vectorized master equation,
///   d rho_vec/dt = A(t) rho_vec + C(t),
/// with the trace mode already eliminated.
class PeriodicGenerator {
 public:
  PeriodicGenerator() = default;
  PeriodicGenerator(int dim, double period, BasisPtr basis);

  int dim() const { return dim_; }
  double period() const { return period_; }
  const BasisPtr& basis() const { return basis_; }
  const Eigen::VectorXi& trace_markers() const { return trace_markers_; }
  void set_trace_markers(Eigen::VectorXi e) { trace_markers_ = std::move(e); }

  void add_a_term(SparseCx matrix, TrigPoly weight);
  void add_c_term(ComplexVector vec, TrigPoly weight);
  const std::vector<GeneratorTerm>& a_terms() const { return a_terms_; }
  const std::vector<std::pair<ComplexVector, TrigPoly>>& c_terms() const {
    return c_terms_;
  }

  bool is_static() const;
  bool has_inhomogeneity() const { return !c_terms_.empty(); }

  ComplexMatrix a_at(double t) const;
  SparseCx a_sparse_at(double t) const;
  ComplexVector c_at(double t) const;
  void apply_a(double t, const ComplexMatrix& y, ComplexMatrix& out) const;
  void apply_offdiag(double t, const ComplexMatrix& y, ComplexMatrix& out) const;
  ComplexVector diag_antiderivative(double t) const;

  /// ODE view; the generator must outlive the returned system.
  OdeSystem ode(bool with_inhomogeneity) const;

  /// Generator with all weights frozen at time t (period kept for reference).
  PeriodicGenerator frozen(double t) const;

  /// Similarity transform stored = f * old (A -> f A f^-1, C -> f C).
  PeriodicGenerator transformed(const ComplexMatrix& from_plain,
                                BasisPtr new_basis) const;

 private:
  int dim_ = 0;
  double period_ = 0.0;
  BasisPtr basis_;
  Eigen::VectorXi trace_markers_;
  std::vector<GeneratorTerm> a_terms_;
  std::vector<std::pair<ComplexVector, TrigPoly>> c_terms_;
};

}  // namespace floqs
