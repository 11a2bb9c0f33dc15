#pragma once

#include <functional>
#include <vector>

#include "floqs/types.hpp"

namespace floqs {

using MatVec = std::function<ComplexVector(const ComplexVector&)>;

struct GmresOptions {
  double tol = 1e-9;  // relative residual target
  int max_iterations = 80;
};

struct GmresResult {
  ComplexVector x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Matrix-free GMRES (no restarts) for A x = b with apply(v) = A v.
GmresResult gmres(const MatVec& apply, const ComplexVector& rhs,
                  const GmresOptions& opts = {});

struct RitzPair {
  Complex value;
  double residual;  // Arnoldi residual estimate |h_{k+1,k}| |y_k|
};

/// Ritz values of the operator from a k-step Arnoldi process started at v0,
/// sorted by descending modulus.
std::vector<RitzPair> arnoldi_ritz(const MatVec& apply, const ComplexVector& v0,
                                   int krylov_dim);

}  // namespace floqs
