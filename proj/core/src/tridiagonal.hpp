#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fracqm::detail {

using cplx = std::complex<double>;

// Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
// lower[0] and upper[n-1] are ignored.
std::vector<cplx> solve_tridiagonal(std::span<const cplx> lower, std::span<const cplx> diag,
                                    std::span<const cplx> upper, std::span<const cplx> rhs);

// Cyclic variant: lower[0] couples x[0] to x[n-1], upper[n-1] couples x[n-1]
// to x[0]. Sherman-Morrison on top of the Thomas solve.
std::vector<cplx> solve_cyclic_tridiagonal(std::span<const cplx> lower, std::span<const cplx> diag,
                                           std::span<const cplx> upper, std::span<const cplx> rhs);

}  // namespace fracqm::detail
