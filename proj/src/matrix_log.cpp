#include "floqs/matrix_log.hpp"

#include <cmath>

namespace floqs {

ComplexVector floquet_exponents(const EigenSystem& eig, double period) {
  const int n = static_cast<int>(eig.values.size());
  ComplexVector b(n);
  for (int j = 0; j < n; ++j) {
    const Complex mu = eig.values(j);
    const double mod = std::abs(mu);
    if (!(mod < 1.0))
      throw NonDecayingMode(
          "floquet_exponents: monodromy eigenvalue modulus " +
          std::to_string(mod) + " >= 1 (non-decaying mode)");
    b(j) = std::log(mu) / period;  // principal branch: Im in (-Omega/2, Omega/2]
  }
  return b;
}

ComplexMatrix matrix_log_over_period(const EigenSystem& eig, double period) {
  const ComplexVector b = floquet_exponents(eig, period);
  return eig.right * b.asDiagonal() * eig.left;
}

ComplexMatrix matrix_log_over_period(const ComplexMatrix& o_t, double period) {
  if (period <= 0) throw InvalidInput("matrix_log_over_period: period must be positive");
  return matrix_log_over_period(eig_biorthonormal(o_t), period);
}

}  // namespace floqs
