#pragma once

#include <vector>

#include "shiftcurv/identities.hpp"

namespace shiftcurv {

struct ExactSweepOptions {
  unsigned long long seed = 1;
  int cases = 120;    ///< random cases per identity family
  bool exact = true;  ///< rational arithmetic; false runs the same cases in double
  double float_tol = 1e-9;
};

/// Randomized checks of the algebraic identities, one report per family:
///   sigma_kronecker   sigma_k(A) by Kronecker contraction == by Newton's identities
///   trace_newton_a    tr(T_{k-1} A) == k sigma_k(A)
///   trace_newton      tr(T_{k-1}) == (n - k + 1) sigma_{k-1}(A)
///   shift_forward     H_k(kappa - 1) == sum (-1)^{k-i} C(k,i) H_i(kappa)
///   shift_inverse     H_k(kappa) == sum C(k,i) H_i(kappa - 1)
///   gauss_bonnet      L_k by curvature-tensor contraction == shifted expansion
/// lhs counts matching cases, rhs counts cases; extras hold the worst residual.
std::vector<IdentityReport> exact_identity_sweep(const ExactSweepOptions& opts = {});

}  // namespace shiftcurv
