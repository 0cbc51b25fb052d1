#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace qnls {

using complexd = std::complex<double>;

/// One power term b * s^alpha of the nonlinearity h(s).
struct HTerm {
    double b;
    double alpha;
};

/// Finite power sum h(s) = sum_i b_i s^{alpha_i}, b_i >= 0, alpha_i > 0.
/// An empty term list means h == 0. Terms are kept sorted by strictly
/// increasing exponent; equal exponents are merged at construction.
class NonlinearitySpec {
  public:
    NonlinearitySpec() = default;
    explicit NonlinearitySpec(std::vector<HTerm> terms);

    const std::vector<HTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

  private:
    std::vector<HTerm> terms_;
};

/// Values of h and its first two derivatives at one point.
struct HEval {
    double h;
    double hp;
    double hpp;
};

// Derivatives with negative powers of s are evaluated at max(s, kSFloor) so
// that the coefficients stay finite where |u| -> 0.
inline constexpr double kSFloor = 1e-12;

/// Evaluate h, h', h'' at s >= 0. Throws std::domain_error for s < 0.
HEval eval_h(const NonlinearitySpec& h, double s);

/// Radial potential sign * c * r^{-m} + v_bounded. The singular part is
/// capped at its r = epsilon value inside the core, where its radial
/// derivative is taken to be zero.
struct PotentialSpec {
    double c = 0.0;         // singular amplitude, >= 0
    double m = 0.0;         // singularity exponent, >= 0
    int sign = 1;           // +1 or -1
    double v_bounded = 0.0; // constant bounded component
    double epsilon = 1e-3;  // core regularization radius

    void validate() const;
};

/// V(r) and the radial dilation derivative x.grad(V) = r V'(r).
struct VEval {
    double V;
    double xdV;
};

/// Evaluate the capped potential at r >= 0. Total on r >= 0.
VEval eval_V(const PotentialSpec& V, double r);

/// Initial data u0(r) = amplitude * exp(-r^2/(2 sigma^2)) * exp(i chirp r^2),
/// or explicit samples on the grid nodes when `tabulated` is set.
struct InitialDataSpec {
    double amplitude = 1.0;
    double sigma = 1.0;
    double chirp = 0.0;
    std::optional<std::vector<complexd>> tabulated;

    void validate() const;
};

/// Full Cauchy-problem description plus discretization extents.
struct ProblemSpec {
    int dim = 3;
    NonlinearitySpec h;
    PotentialSpec V;
    InitialDataSpec u0;
    double radius = 16.0;
    int grid_points = 1024;
    double dt0 = 1e-3;
    double t_end = 1.0;

    void validate() const; // throws std::invalid_argument with a message
};

} // namespace qnls
