#include "floqs/eig.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

namespace floqs {

EigenSystem eig_biorthonormal(const ComplexMatrix& m, double cond_limit) {
  if (m.rows() != m.cols()) throw InvalidInput("eig_biorthonormal: square input required");
  if (!m.allFinite()) throw InvalidInput("eig_biorthonormal: non-finite entries");

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
  if (solver.info() != Eigen::Success)
    throw SolverError("eig_biorthonormal: eigensolver failed to converge");

  const int n = static_cast<int>(m.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (vals(a).real() != vals(b).real()) return vals(a).real() > vals(b).real();
    return vals(a).imag() > vals(b).imag();
  });

  EigenSystem out;
  out.values.resize(n);
  out.right.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.values(j) = vals(order[j]);
    out.right.col(j) = solver.eigenvectors().col(order[j]);
  }

  Eigen::PartialPivLU<ComplexMatrix> lu(out.right);
  out.left = lu.solve(ComplexMatrix::Identity(n, n));
  out.condition = out.right.norm() * out.left.norm() / n;
  if (!(out.condition < cond_limit))
    throw NearDefectiveMatrix(
        "eig_biorthonormal: near-defective matrix, eigenvector condition "
        "estimate " + std::to_string(out.condition),
        out.condition);
  return out;
}

}  // namespace floqs
