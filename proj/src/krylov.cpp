#include "floqs/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace floqs {

namespace {

// One Arnoldi expansion step with classical Gram-Schmidt, reorthogonalized.
void arnoldi_step(const MatVec& apply, std::vector<ComplexVector>& basis,
                  ComplexMatrix& hess, int j) {
  ComplexVector w = apply(basis[j]);
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i <= j; ++i) {
      const Complex c = basis[i].dot(w);  // conjugate-linear in basis[i]
      hess(i, j) += c;
      w -= c * basis[i];
    }
  }
  hess(j + 1, j) = w.norm();
  if (std::abs(hess(j + 1, j)) > 0) basis.push_back(w / hess(j + 1, j));
}

}  // namespace

GmresResult gmres(const MatVec& apply, const ComplexVector& rhs,
                  const GmresOptions& opts) {
  GmresResult res;
  const double beta = rhs.norm();
  if (beta == 0.0) {
    res.x = ComplexVector::Zero(rhs.size());
    res.converged = true;
    return res;
  }
  const int kmax = opts.max_iterations;
  std::vector<ComplexVector> basis;
  basis.reserve(kmax + 1);
  basis.push_back(rhs / beta);
  ComplexMatrix hess = ComplexMatrix::Zero(kmax + 1, kmax);

  ComplexVector y;
  double rel = 1.0;
  int j = 0;
  for (; j < kmax; ++j) {
    arnoldi_step(apply, basis, hess, j);
    ComplexVector e1 = ComplexVector::Zero(j + 2);
    e1(0) = beta;
    const auto h = hess.topLeftCorner(j + 2, j + 1);
    y = h.householderQr().solve(e1);
    rel = (e1 - h * y).norm() / beta;
    if (rel < opts.tol || std::abs(hess(j + 1, j)) < 1e-300) {
      ++j;
      break;
    }
  }
  res.x = ComplexVector::Zero(rhs.size());
  for (int i = 0; i < y.size(); ++i) res.x += y(i) * basis[i];
  res.iterations = j;
  res.relative_residual = rel;
  res.converged = rel < opts.tol;
  return res;
}

std::vector<RitzPair> arnoldi_ritz(const MatVec& apply, const ComplexVector& v0,
                                   int krylov_dim) {
  const double nrm = v0.norm();
  if (nrm == 0.0) throw InvalidInput("arnoldi_ritz: zero start vector");
  std::vector<ComplexVector> basis;
  basis.reserve(krylov_dim + 1);
  basis.push_back(v0 / nrm);
  ComplexMatrix hess = ComplexMatrix::Zero(krylov_dim + 1, krylov_dim);
  int k = 0;
  for (; k < krylov_dim; ++k) {
    arnoldi_step(apply, basis, hess, k);
    if (std::abs(hess(k + 1, k)) < 1e-14) {
      ++k;
      break;  // invariant subspace found
    }
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> es(hess.topLeftCorner(k, k), true);
  if (es.info() != Eigen::Success)
    throw SolverError("arnoldi_ritz: Hessenberg eigensolve failed");
  const double h_last = std::abs(hess(k, k - 1));
  std::vector<RitzPair> out(k);
  for (int i = 0; i < k; ++i) {
    out[i].value = es.eigenvalues()(i);
    out[i].residual = h_last * std::abs(es.eigenvectors()(k - 1, i));
  }
  std::sort(out.begin(), out.end(), [](const RitzPair& a, const RitzPair& b) {
    return std::abs(a.value) > std::abs(b.value);
  });
  return out;
}

}  // namespace floqs
