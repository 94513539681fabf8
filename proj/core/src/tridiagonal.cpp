#include "tridiagonal.hpp"

#include <cmath>

#include "fracqm/errors.hpp"

namespace fracqm::detail {

std::vector<cplx> solve_tridiagonal(std::span<const cplx> lower, std::span<const cplx> diag,
                                    std::span<const cplx> upper, std::span<const cplx> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return {};
    std::vector<cplx> c(n), d(n);
    cplx beta = diag[0];
    if (std::abs(beta) == 0.0) throw SolverError("singular tridiagonal system (row 0)");
    c[0] = n > 1 ? upper[0] / beta : cplx{};
    d[0] = rhs[0] / beta;
    for (std::size_t i = 1; i < n; ++i) {
        beta = diag[i] - lower[i] * c[i - 1];
        if (std::abs(beta) == 0.0 || !std::isfinite(std::abs(beta))) {
            throw SolverError("singular tridiagonal system (row " + std::to_string(i) + ")");
        }
        c[i] = i + 1 < n ? upper[i] / beta : cplx{};
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

std::vector<cplx> solve_cyclic_tridiagonal(std::span<const cplx> lower, std::span<const cplx> diag,
                                           std::span<const cplx> upper, std::span<const cplx> rhs) {
    const std::size_t n = diag.size();
    if (n < 3) throw SolverError("cyclic tridiagonal system needs at least three unknowns");
    const cplx alpha = upper[n - 1];  // A[n-1][0]
    const cplx beta = lower[0];       // A[0][n-1]
    const cplx gamma = -diag[0];

    std::vector<cplx> bb(diag.begin(), diag.end());
    bb[0] = diag[0] - gamma;
    bb[n - 1] = diag[n - 1] - alpha * beta / gamma;

    const auto x = solve_tridiagonal(lower, bb, upper, rhs);
    std::vector<cplx> u(n, cplx{});
    u[0] = gamma;
    u[n - 1] = alpha;
    const auto z = solve_tridiagonal(lower, bb, upper, u);

    const cplx fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
    return out;
}

}  // namespace fracqm::detail
