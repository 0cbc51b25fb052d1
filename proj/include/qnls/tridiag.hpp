#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace qnls {

/// Thomas algorithm for a complex tridiagonal system. `lower[0]` and
/// `upper[n-1]` are ignored. No pivoting; the Crank-Nicolson matrices this
/// solves are strictly dominated by their unit diagonal. Throws on a zero
/// pivot.
template <typename T>
std::vector<T> tridiag_solve(const std::vector<T>& lower,
                             const std::vector<T>& diag,
                             const std::vector<T>& upper,
                             const std::vector<T>& rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n)
        throw std::invalid_argument("tridiag_solve: size mismatch");
    if (n == 0) return {};

    std::vector<T> c(n), x(n);
    if (diag[0] == T{}) throw std::runtime_error("tridiag_solve: zero pivot");
    c[0] = upper[0] / diag[0];
    x[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const T denom = diag[i] - lower[i] * c[i - 1];
        if (denom == T{}) throw std::runtime_error("tridiag_solve: zero pivot");
        c[i] = upper[i] / denom;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

} // namespace qnls
