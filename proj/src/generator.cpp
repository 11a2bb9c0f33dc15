#include "floqs/generator.hpp"

namespace floqs {

namespace {
constexpr int kDenseCacheLimit = 256;
}

PeriodicGenerator::PeriodicGenerator(int dim, double period, BasisPtr basis)
    : dim_(dim), period_(period), basis_(std::move(basis)) {
  if (basis_) trace_markers_ = basis_->plain_trace_markers();
}

void PeriodicGenerator::add_a_term(SparseCx matrix, TrigPoly weight) {
  if (matrix.rows() != dim_ || matrix.cols() != dim_)
    throw InvalidInput("PeriodicGenerator: term dimension mismatch");
  GeneratorTerm term;
  term.matrix = std::move(matrix);
  term.matrix.makeCompressed();
  term.diagonal = term.matrix.diagonal();
  term.offdiag = term.matrix;
  for (int i = 0; i < dim_; ++i) term.offdiag.coeffRef(i, i) = 0.0;
  term.offdiag.prune([](const Eigen::Index&, const Eigen::Index&, const Complex& v) {
    return v != Complex(0.0);
  });
  term.offdiag.makeCompressed();
  if (dim_ <= kDenseCacheLimit) term.dense = ComplexMatrix(term.matrix);
  term.weight = std::move(weight);
  a_terms_.push_back(std::move(term));
}

void PeriodicGenerator::add_c_term(ComplexVector vec, TrigPoly weight) {
  if (vec.size() != dim_) throw InvalidInput("PeriodicGenerator: c dimension mismatch");
  if (vec.cwiseAbs().maxCoeff() == 0.0) return;
  c_terms_.emplace_back(std::move(vec), std::move(weight));
}

bool PeriodicGenerator::is_static() const {
  for (const auto& t : a_terms_)
    if (!t.weight.is_constant()) return false;
  for (const auto& [v, w] : c_terms_)
    if (!w.is_constant()) return false;
  return true;
}

ComplexMatrix PeriodicGenerator::a_at(double t) const {
  ComplexMatrix a = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& term : a_terms_) {
    const double w = term.weight.value(t);
    if (w == 0.0) continue;
    if (term.dense.size())
      a += w * term.dense;
    else
      a += w * ComplexMatrix(term.matrix);
  }
  return a;
}

SparseCx PeriodicGenerator::a_sparse_at(double t) const {
  SparseCx a(dim_, dim_);
  bool first = true;
  for (const auto& term : a_terms_) {
    const double w = term.weight.value(t);
    if (w == 0.0) continue;
    if (first) {
      a = w * term.matrix;
      first = false;
    } else {
      a = (a + SparseCx(w * term.matrix)).eval();
    }
  }
  a.makeCompressed();
  return a;
}

ComplexVector PeriodicGenerator::c_at(double t) const {
  ComplexVector c = ComplexVector::Zero(dim_);
  for (const auto& [v, w] : c_terms_) c += w.value(t) * v;
  return c;
}

void PeriodicGenerator::apply_a(double t, const ComplexMatrix& y,
                                ComplexMatrix& out) const {
  out.setZero(y.rows(), y.cols());
  for (const auto& term : a_terms_) {
    const double w = term.weight.value(t);
    if (w == 0.0) continue;
    out.noalias() += w * (term.matrix * y);
  }
}

void PeriodicGenerator::apply_offdiag(double t, const ComplexMatrix& y,
                                      ComplexMatrix& out) const {
  out.setZero(y.rows(), y.cols());
  for (const auto& term : a_terms_) {
    const double w = term.weight.value(t);
    if (w == 0.0) continue;
    out.noalias() += w * (term.offdiag * y);
  }
}

ComplexVector PeriodicGenerator::diag_antiderivative(double t) const {
  ComplexVector lam = ComplexVector::Zero(dim_);
  for (const auto& term : a_terms_)
    lam += term.weight.antiderivative(t) * term.diagonal;
  return lam;
}

OdeSystem PeriodicGenerator::ode(bool with_inhomogeneity) const {
  OdeSystem sys;
  sys.dim = dim_;
  sys.apply = [this](double t, const ComplexMatrix& y, ComplexMatrix& out) {
    apply_a(t, y, out);
  };
  if (with_inhomogeneity && has_inhomogeneity())
    sys.inhomogeneity = [this](double t, ComplexVector& out) { out = c_at(t); };
  sys.diag_antiderivative = [this](double t) { return diag_antiderivative(t); };
  sys.offdiag_apply = [this](double t, const ComplexMatrix& y, ComplexMatrix& out) {
    apply_offdiag(t, y, out);
  };
  return sys;
}

PeriodicGenerator PeriodicGenerator::frozen(double t) const {
  PeriodicGenerator g(dim_, period_, basis_);
  g.trace_markers_ = trace_markers_;
  SparseCx a(dim_, dim_);
  bool first = true;
  for (const auto& term : a_terms_) {
    const double w = term.weight.value(t);
    if (first) {
      a = w * term.matrix;
      first = false;
    } else {
      a += w * term.matrix;
    }
  }
  g.add_a_term(std::move(a), TrigPoly(1.0));
  if (has_inhomogeneity()) g.add_c_term(c_at(t), TrigPoly(1.0));
  return g;
}

PeriodicGenerator PeriodicGenerator::transformed(const ComplexMatrix& from_plain,
                                                 BasisPtr new_basis) const {
  if (from_plain.rows() != dim_ || from_plain.cols() != dim_)
    throw InvalidInput("PeriodicGenerator::transformed: size mismatch");
  const ComplexMatrix inv =
      from_plain.partialPivLu().solve(ComplexMatrix::Identity(dim_, dim_));
  PeriodicGenerator g(dim_, period_, std::move(new_basis));
  g.trace_markers_ = trace_markers_;
  for (const auto& term : a_terms_) {
    ComplexMatrix m = from_plain * ComplexMatrix(term.matrix) * inv;
    g.add_a_term(m.sparseView(1.0, 1e-300), term.weight);
  }
  for (const auto& [v, w] : c_terms_) g.add_c_term(from_plain * v, w);
  return g;
}

}  // namespace floqs
