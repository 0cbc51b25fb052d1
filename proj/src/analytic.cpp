#include "qnls/analytic.hpp"

#include <cmath>

namespace qnls {

complexd free_gaussian(double A, double sigma, double beta, int N, double r,
                       double t) {
    const complexd gamma0(1.0 / (sigma * sigma), -2.0 * beta);
    const complexd s0 = 1.0 / gamma0;
    const complexd s = s0 - complexd(0.0, 2.0 * t);
    // Re s0 > 0 and Re s > 0, so the principal power never crosses the cut.
    const complexd prefactor = std::pow(s0 / s, 0.5 * N);
    return A * prefactor * std::exp(-r * r / (2.0 * s));
}

} // namespace qnls
