#pragma once

#include "floqs/eig.hpp"
#include "floqs/types.hpp"

namespace floqs {

/// B = log(O_T)/T with the scalar log on the principal branch, so
/// Im(eigenvalues of B) lies in (-Omega/2, Omega/2] with Omega = 2*pi/T.
/// Requires all monodromy eigenvalue moduli < 1 (throws NonDecayingMode).
ComplexMatrix matrix_log_over_period(const ComplexMatrix& o_t, double period);

/// Same, reusing an existing eigendecomposition of the monodromy.
ComplexMatrix matrix_log_over_period(const EigenSystem& eig, double period);

/// Floquet exponents log(mu_j)/T for a decomposed monodromy.
ComplexVector floquet_exponents(const EigenSystem& eig, double period);

}  // namespace floqs
