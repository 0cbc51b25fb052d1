#pragma once

#include <vector>

#include "qnls/model.hpp"

namespace qnls {

/// Uniform cell-centered radial grid for R^N with N >= 3: nodes at
/// r_j = (j + 1/2) dr, j = 0..M-1, dr = R/M. No node sits at r = 0, so the
/// metric term and singular potentials need no special-casing there.
class RadialGrid {
  public:
    RadialGrid(int dim, double radius, int points);

    int dim() const { return dim_; }
    double radius() const { return radius_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    double dr() const { return dr_; }
    double node(int j) const { return nodes_[j]; }
    const std::vector<double>& nodes() const { return nodes_; }

    /// Area of the unit sphere S^{N-1}: 2 pi^{N/2} / Gamma(N/2).
    double surface_factor() const { return surface_; }

    /// Midpoint quadrature weight at node j: omega * r_j^{N-1} * dr.
    double weight(int j) const { return weights_[j]; }

  private:
    int dim_;
    double radius_;
    double dr_;
    double surface_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// integral over R^N of f dx = omega_{N-1} * sum_j f_j r_j^{N-1} dr.
double integrate(const std::vector<double>& f, const RadialGrid& grid);

/// Radial derivative: central differences in the interior, even reflection
/// across r = 0 at the first node, one-sided backward at the last node.
std::vector<double> radial_gradient(const std::vector<double>& f,
                                    const RadialGrid& grid);

/// Tridiagonal coefficients of the conservative radial Laplacian
/// (1/r^{N-1}) d/dr (r^{N-1} df/dr) with zero flux through r = 0 and a
/// homogeneous Dirichlet ghost value beyond r = R. Symmetric with respect
/// to the midpoint quadrature weights.
struct LaplacianStencil {
    std::vector<double> lower; // lower[0] unused
    std::vector<double> diag;
    std::vector<double> upper; // upper[M-1] unused

    std::vector<double> apply(const std::vector<double>& f) const;
    std::vector<complexd> apply(const std::vector<complexd>& f) const;
};

LaplacianStencil make_laplacian(const RadialGrid& grid);

/// radial_laplacian(f) = make_laplacian(grid).apply(f).
std::vector<double> radial_laplacian(const std::vector<double>& f,
                                     const RadialGrid& grid);

/// Radially symmetric complex field sampled on the grid nodes at time t.
struct FieldState {
    RadialGrid grid;
    double t = 0.0;
    std::vector<complexd> values;

    /// True when |u| at the outermost node exceeds 1e-6 of max_j |u_j|,
    /// i.e. the Dirichlet truncation is no longer clean.
    bool boundary_contaminated() const;
};

/// Materialize the initial data on the grid at t = 0.
FieldState make_initial_state(const ProblemSpec& spec, const RadialGrid& grid);

} // namespace qnls
