#pragma once

#include <complex>

#include "qnls/model.hpp"

namespace qnls {

/// Closed-form h == 0, V == 0 evolution of the chirped Gaussian
/// u0 = A exp(-r^2/(2 sigma^2)) exp(i beta r^2) under iu_t = Lap u:
/// with gamma0 = 1/sigma^2 - 2 i beta and s0 = 1/gamma0,
///   u(r, t) = A (s0 / (s0 - 2 i t))^{N/2} exp(-r^2 / (2 (s0 - 2 i t))).
complexd free_gaussian(double A, double sigma, double beta, int N, double r,
                       double t);

} // namespace qnls
