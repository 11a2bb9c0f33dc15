#pragma once

#include "floqs/types.hpp"

namespace floqs {

/// Eigendecomposition with biorthonormal left/right vectors:
/// values sorted by descending real part, left.row(j) * right.col(j') = delta.
struct EigenSystem {
  ComplexVector values;
  ComplexMatrix right;  // columns chi_r^(j)
  ComplexMatrix left;   // rows chi_l^(j)
  double condition = 0.0;

  ComplexMatrix reconstruct() const {
    return right * values.asDiagonal() * left;
  }
};

/// Throws NearDefectiveMatrix when the eigenvector matrix condition estimate
/// exceeds `cond_limit`.
EigenSystem eig_biorthonormal(const ComplexMatrix& m, double cond_limit = 1e12);

}  // namespace floqs
